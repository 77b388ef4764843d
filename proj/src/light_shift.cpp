#include "apv/light_shift.hpp"

#include <cmath>

#include <fmt/format.h>

#include "apv/constants.hpp"
#include "apv/errors.hpp"

namespace apv {

namespace {

/// Dot product accumulated as if in twice the working precision
/// (error-free products via fma, error-free sums via TwoSum).
struct CompensatedDot {
    double sum = 0.0;
    double err = 0.0;

    void add(double a, double b) {
        const double p = a * b;
        const double p_err = std::fma(a, b, -p);
        const double t = sum + p;
        const double z = t - sum;
        err += (sum - (t - z)) + (p - z) + p_err;
        sum = t;
    }

    double value() const { return sum + err; }
};

}  // namespace

double pnc_light_shift(const CouplingMatrix& pnc, const CouplingMatrix& quad, HalfInt m) {
    if (pnc.entries.rows() != quad.entries.rows() || pnc.entries.cols() != quad.entries.cols())
        throw ValidationError("entries", "PNC and quadrupole matrices have different index ranges");
    const Eigen::Index col = quad.column_of(m);
    // Re[conj(p) q] = p.re q.re + p.im q.im. The sum cancels between sublevels,
    // so it is accumulated with the compensated scheme below.
    CompensatedDot overlap, norm2;
    for (Eigen::Index row = 0; row < quad.entries.rows(); ++row) {
        const std::complex<double> p = pnc.entries(row, col);
        const std::complex<double> q = quad.entries(row, col);
        overlap.add(p.real(), q.real());
        overlap.add(p.imag(), q.imag());
        norm2.add(q.real(), q.real());
        norm2.add(q.imag(), q.imag());
    }
    if (norm2.value() == 0.0) throw NoQuadrupoleCouplingError();
    return -overlap.value() / std::sqrt(norm2.value());
}

double quad_light_shift(const CouplingMatrix& quad, double detuning, HalfInt m) {
    if (detuning == 0.0) throw SingularityError("quadrupole light shift is singular at zero detuning");
    return quad.entries.col(quad.column_of(m)).squaredNorm() / (4.0 * detuning);
}

double calibrate_pnc_scale(const IonSpecies& species, double e0_prime, double target_shift,
                           const CouplingMatrix& quad, const GeometryFactors& pnc_geometry) {
    if (!(target_shift > 0.0)) throw ValidationError("target_shift", "must be strictly positive");
    if (!(e0_prime > 0.0)) throw ValidationError("e0_prime", "must be strictly positive");
    const auto& transition = species.apv_transition(TransitionCharacter::pnc_dipole);
    const auto unit = pnc_rabi_matrix(species, antinode_pnc_field(e0_prime, transition.wavelength), pnc_geometry, 1.0);
    const double unit_shift = pnc_light_shift(unit, quad, kPlusHalf);
    if (unit_shift == 0.0)
        throw SingularityError("the PNC and quadrupole tables do not interfere for m = +1/2");
    return target_shift / unit_shift;
}

double larmor_splitting(double zeeman_splitting, double pnc_shift_plus, double pnc_shift_minus,
                        double /*common_mode*/) {
    return zeeman_splitting + pnc_shift_plus - pnc_shift_minus;
}

LightShiftSetup uncalibrated_setup(const IonSpecies& species, double e0_prime, double e0_double_prime,
                                   double quad_scale, double pnc_scale) {
    LightShiftSetup setup;
    setup.pnc_field =
        antinode_pnc_field(e0_prime, species.apv_transition(TransitionCharacter::pnc_dipole).wavelength);
    setup.quad_field =
        node_quad_field(e0_double_prime, species.apv_transition(TransitionCharacter::quadrupole).wavelength);
    setup.pnc_scale = pnc_scale;
    setup.quad_scale = quad_scale;
    setup.pnc_field.validate();
    setup.quad_field.validate();
    return setup;
}

LightShiftSetup calibrated_setup(const IonSpecies& species, double e0_prime, double e0_double_prime,
                                 double quad_scale) {
    if (!species.pnc_shift_target_hz)
        throw SpeciesConfigurationError(
            fmt::format("species '{}' has no pnc_shift_hz calibration target", species.name));
    LightShiftSetup setup = uncalibrated_setup(species, e0_prime, e0_double_prime, quad_scale, 0.0);
    const auto quad = quad_rabi_matrix(species, setup.quad_field, species.geometry.quad, quad_scale);
    setup.pnc_scale = calibrate_pnc_scale(species, species.pnc_shift_reference_e0,
                                          hz_to_rad_s(*species.pnc_shift_target_hz), quad, species.geometry.pnc);
    return setup;
}

SublevelShifts pnc_shifts(const IonSpecies& species, const LightShiftSetup& setup,
                          const Eigen::Vector3d& ion_position) {
    const auto pnc = pnc_rabi_matrix(species, setup.pnc_field, species.geometry.pnc, setup.pnc_scale, ion_position);
    const auto quad =
        quad_rabi_matrix(species, setup.quad_field, species.geometry.quad, setup.quad_scale, ion_position);
    return {pnc_light_shift(pnc, quad, kPlusHalf), pnc_light_shift(pnc, quad, kMinusHalf)};
}

SublevelShifts quad_shifts(const IonSpecies& species, const LightShiftSetup& setup, double detuning,
                           const Eigen::Vector3d& ion_position) {
    const auto quad =
        quad_rabi_matrix(species, setup.quad_field, species.geometry.quad, setup.quad_scale, ion_position);
    return {quad_light_shift(quad, detuning, kPlusHalf), quad_light_shift(quad, detuning, kMinusHalf)};
}

}  // namespace apv
