#include "apv/species.hpp"

#include <cmath>

#include <fmt/format.h>

#include "apv/errors.hpp"

namespace apv {

std::string_view to_string(TransitionCharacter c) {
    switch (c) {
        case TransitionCharacter::pnc_dipole: return "pnc-dipole";
        case TransitionCharacter::quadrupole: return "quadrupole";
        case TransitionCharacter::cooling_dipole: return "cooling-dipole";
        case TransitionCharacter::repump_dipole: return "repump-dipole";
    }
    return "?";
}

TransitionCharacter parse_transition_character(std::string_view text) {
    if (text == "pnc-dipole") return TransitionCharacter::pnc_dipole;
    if (text == "quadrupole") return TransitionCharacter::quadrupole;
    if (text == "cooling-dipole") return TransitionCharacter::cooling_dipole;
    if (text == "repump-dipole") return TransitionCharacter::repump_dipole;
    throw ValidationError("character",
                          fmt::format("unknown transition character '{}' (expected pnc-dipole, quadrupole, "
                                      "cooling-dipole or repump-dipole)",
                                      text));
}

std::string_view to_string(AmplitudeUnit u) { return u == AmplitudeUnit::atomic ? "atomic" : "relative"; }

AmplitudeUnit parse_amplitude_unit(std::string_view text) {
    if (text == "atomic") return AmplitudeUnit::atomic;
    if (text == "relative") return AmplitudeUnit::relative;
    throw ValidationError("e1_pnc_unit", fmt::format("unknown unit '{}' (expected atomic or relative)", text));
}

void Transition::validate() const {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw ValidationError("wavelength", "must be finite and strictly positive");
    const bool apv_character =
        character == TransitionCharacter::pnc_dipole || character == TransitionCharacter::quadrupole;
    if (apv_character && !(lower == Manifold::S1_2 && is_d_manifold(upper)))
        throw ValidationError("character", fmt::format("{} is only allowed on S1/2 -> D transitions, not {} -> {}",
                                                       to_string(character), to_string(lower), to_string(upper)));
}

void IonSpecies::validate() const {
    auto positive = [](const char* field, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be finite and strictly positive");
    };
    if (name.empty()) throw ValidationError("name", "must not be empty");
    positive("mass_u", mass_u);
    if (nuclear_spin.twice() < 0) throw ValidationError("nuclear_spin", "must be >= 0");
    if (half_life_years) positive("half_life_years", *half_life_years);
    positive("e1_pnc_coeff", e1_pnc_coeff);
    if (!(qw_over_n >= 0.0) || !std::isfinite(qw_over_n)) throw ValidationError("qw_over_n", "must be finite and >= 0");
    positive("coherence_time_s", coherence_time);
    for (const auto& t : transitions) t.validate();
    for (std::size_t i = 0; i < quench_rates.size(); ++i) {
        const auto& q = quench_rates[i];
        q.level.validate();
        if (!(q.rate >= 0.0) || !std::isfinite(q.rate)) throw ValidationError("quench_rates", "rates must be >= 0");
        for (std::size_t j = 0; j < i; ++j)
            if (quench_rates[j].level.manifold == q.level.manifold && quench_rates[j].level.m == q.level.m)
                throw ValidationError("quench_rates", fmt::format("duplicate entry for {} m = {}",
                                                                  to_string(q.level.manifold), q.level.m.str()));
    }
    if (!is_d_manifold(apv_manifold)) throw ValidationError("apv_manifold", "must be D3/2 or D5/2");
    if (pnc_shift_target_hz) {
        positive("pnc_shift_hz", *pnc_shift_target_hz);
        positive("pnc_shift_reference_e0", pnc_shift_reference_e0);
    }
    if (e1_pnc_unit == AmplitudeUnit::relative && pnc_shift_target_hz)
        throw ValidationError("pnc_shift_hz", "a relative-unit amplitude cannot carry an absolute calibration target");

    auto check_table = [&](const GeometryFactors& t, CouplingKind kind, const char* field) {
        if (t.kind != kind) throw ValidationError(field, fmt::format("table kind is {}, expected {}", to_string(t.kind), to_string(kind)));
        if (t.upper != apv_manifold)
            throw ValidationError(field, fmt::format("table is for {}, species measures on {}", to_string(t.upper),
                                                     to_string(apv_manifold)));
        try {
            t.validate();
        } catch (const ValidationError& e) {
            throw ValidationError(field, e.detail());
        }
    };
    check_table(geometry.pnc, CouplingKind::pnc, "geometry.pnc");
    check_table(geometry.quad, CouplingKind::quad, "geometry.quad");
}

const Transition* IonSpecies::find_transition(TransitionCharacter c, Manifold upper) const {
    for (const auto& t : transitions)
        if (t.character == c && t.upper == upper) return &t;
    return nullptr;
}

const Transition& IonSpecies::apv_transition(TransitionCharacter c) const {
    if (const auto* t = find_transition(c, apv_manifold); t && t->lower == Manifold::S1_2) return *t;
    throw SpeciesConfigurationError(fmt::format("species '{}' has no S1/2 -> {} {} transition", name,
                                                to_string(apv_manifold), to_string(c)));
}

double IonSpecies::quench_rate(const ZeemanLevel& level) const {
    for (const auto& q : quench_rates)
        if (q.level.manifold == level.manifold && q.level.m == level.m) return q.rate;
    return 0.0;
}

}  // namespace apv
