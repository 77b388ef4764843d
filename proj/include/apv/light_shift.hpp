#pragma once

#include <Eigen/Dense>

#include "apv/coupling.hpp"
#include "apv/field.hpp"
#include "apv/species.hpp"

namespace apv {

/// Interference light shift of ground sublevel m:
///   -Re sum_m' conj(Omega^PNC_m'm) Omega^quad_m'm / Omega^quad_m,
///   Omega^quad_m = sqrt(sum_m' |Omega^quad_m'm|^2).
/// Throws NoQuadrupoleCouplingError when Omega^quad_m == 0.
double pnc_light_shift(const CouplingMatrix& pnc, const CouplingMatrix& quad, HalfInt m);

/// Off-resonant second-order shift sum_m' |Omega_m'm|^2 / (4 detuning).
double quad_light_shift(const CouplingMatrix& quad, double detuning, HalfInt m);

/// PNC scale (rad/s per V/m) for which pnc_light_shift(m = +1/2) equals
/// target_shift with the ion at the E' antinode and field amplitude e0_prime.
double calibrate_pnc_scale(const IonSpecies& species, double e0_prime, double target_shift,
                           const CouplingMatrix& quad, const GeometryFactors& pnc_geometry);

/// Ground-state Larmor splitting with lasers on. The common-mode term moves
/// both sublevels equally and so never enters the result.
double larmor_splitting(double zeeman_splitting, double pnc_shift_plus, double pnc_shift_minus,
                        double common_mode);

/// Both standing waves plus the scales that turn fields into Rabi frequencies.
struct LightShiftSetup {
    StandingWaveField pnc_field;
    StandingWaveField quad_field;
    double pnc_scale = 0.0;   // rad/s per V/m
    double quad_scale = 0.0;  // rad/s per V/m^2
};

struct SublevelShifts {
    double plus = 0.0;   // m = +1/2, rad/s
    double minus = 0.0;  // m = -1/2, rad/s

    double larmor_change() const { return plus - minus; }
};

/// Crossed standing waves on the species' S1/2 -> D transition with amplitude
/// e0_prime. The PNC scale is calibrated to the species' tabulated shift at its
/// reference amplitude, so the returned setup scales linearly from there.
/// Throws SpeciesConfigurationError when the species has no calibration target.
LightShiftSetup calibrated_setup(const IonSpecies& species, double e0_prime, double e0_double_prime,
                                 double quad_scale);

/// Same geometry with an explicit PNC scale instead of calibration.
LightShiftSetup uncalibrated_setup(const IonSpecies& species, double e0_prime,
                                   double e0_double_prime, double quad_scale, double pnc_scale);

SublevelShifts pnc_shifts(const IonSpecies& species, const LightShiftSetup& setup,
                          const Eigen::Vector3d& ion_position = Eigen::Vector3d::Zero());

/// Quadrupole shift of each sublevel for the given detuning (equal for +-1/2
/// with the crossed-wave tables).
SublevelShifts quad_shifts(const IonSpecies& species, const LightShiftSetup& setup, double detuning,
                           const Eigen::Vector3d& ion_position = Eigen::Vector3d::Zero());

}  // namespace apv
