#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apv/geometry.hpp"
#include "apv/types.hpp"

namespace apv {

enum class TransitionCharacter { pnc_dipole, quadrupole, cooling_dipole, repump_dipole };

std::string_view to_string(TransitionCharacter c);
TransitionCharacter parse_transition_character(std::string_view text);

struct Transition {
    Manifold lower = Manifold::S1_2;
    Manifold upper = Manifold::P1_2;
    double wavelength = 0.0;  // m
    TransitionCharacter character = TransitionCharacter::cooling_dipole;

    void validate() const;
};

struct QuenchRate {
    ZeemanLevel level;
    double rate = 0.0;  // 1/s (units assumed, see README)
};

/// How `IonSpecies::e1_pnc_coeff` is expressed.
enum class AmplitudeUnit {
    /// i e a0 (-Q_W/N) x 1e-11
    atomic,
    /// Ratio to a reference species' amplitude; no absolute SI value exists.
    relative,
};

std::string_view to_string(AmplitudeUnit u);
AmplitudeUnit parse_amplitude_unit(std::string_view text);

struct IonSpecies {
    std::string name;
    double mass_u = 0.0;
    HalfInt nuclear_spin;
    std::optional<double> half_life_years;  // nullopt: stable
    std::vector<Transition> transitions;
    double e1_pnc_coeff = 0.0;
    AmplitudeUnit e1_pnc_unit = AmplitudeUnit::atomic;
    double qw_over_n = 0.9;
    double coherence_time = 0.0;  // s
    std::vector<QuenchRate> quench_rates;

    /// Upper manifold of the PNC/quadrupole pair (D3/2 or D5/2).
    Manifold apv_manifold = Manifold::D3_2;
    /// Tabulated shift Delta omega / 2pi at field amplitude pnc_shift_reference_e0;
    /// the calibration anchor for the PNC scale.
    std::optional<double> pnc_shift_target_hz;
    double pnc_shift_reference_e0 = 0.0;  // V/m
    GeometryPair geometry;

    void validate() const;

    const Transition* find_transition(TransitionCharacter c, Manifold upper) const;
    /// S1/2 -> apv_manifold transition of the given character.
    /// Throws SpeciesConfigurationError when absent.
    const Transition& apv_transition(TransitionCharacter c) const;
    /// Configured quench rate, 0 when the level is not listed.
    double quench_rate(const ZeemanLevel& level) const;
};

}  // namespace apv
