#include "apv/budget.hpp"

#include <cmath>
#include <limits>

#include "apv/errors.hpp"
#include "apv/light_shift.hpp"

namespace apv {

void BudgetInputs::validate() const {
    auto positive = [](const char* field, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be finite and strictly positive");
    };
    positive("e0_prime", e0_prime);
    positive("efficiency_f", efficiency_f);
    if (efficiency_f > 1.0) throw ValidationError("efficiency_f", "must lie in (0, 1]");
    positive("n_ions", n_ions);
    if (n_ions < 1.0) throw ValidationError("n_ions", "must be >= 1");
    positive("obs_time", obs_time_t);
    positive("coherence_tau", coherence_tau);
    positive("lamb_dicke_extent", lamb_dicke_extent);
}

bool BudgetReport::measurable() const { return std::isfinite(statistical_fraction); }

double e1_pnc_si(const IonSpecies& species, const PhysicalConstants& constants) {
    if (species.e1_pnc_unit == AmplitudeUnit::relative) return 0.0;
    return species.e1_pnc_coeff * kPncAmplitudeUnitScale * species.qw_over_n * constants.elem_charge *
           constants.bohr_radius;
}

double statistical_uncertainty(const BudgetInputs& inputs, const PhysicalConstants& constants) {
    inputs.validate();
    return constants.hbar /
           (inputs.e0_prime * inputs.efficiency_f * std::sqrt(inputs.n_ions * inputs.obs_time_t * inputs.coherence_tau));
}

double antinode_amplitude_error(double wavelength, double lamb_dicke_extent) {
    return 1.0 - std::cos(kTwoPi / wavelength * lamb_dicke_extent);
}

double node_amplitude_error(double wavelength, double lamb_dicke_extent) {
    return std::sin(kTwoPi / wavelength * lamb_dicke_extent);
}

double lamb_dicke_mass_scaling(double ref_extent, double ref_mass, double new_mass) {
    if (!(ref_mass > 0.0) || !(new_mass > 0.0)) throw ValidationError("mass", "masses must be strictly positive");
    return ref_extent * std::sqrt(ref_mass / new_mass);
}

BudgetReport full_budget(const IonSpecies& species, const BudgetInputs& inputs, const PhysicalConstants& constants) {
    inputs.validate();
    constants.validate();

    BudgetReport r;
    r.species = species.name;
    r.e1_pnc_si = e1_pnc_si(species, constants);
    r.delta_e1_si = statistical_uncertainty(inputs, constants);
    r.statistical_fraction =
        r.e1_pnc_si > 0.0 ? r.delta_e1_si / r.e1_pnc_si : std::numeric_limits<double>::infinity();

    const double pnc_wavelength = species.apv_transition(TransitionCharacter::pnc_dipole).wavelength;
    const double quad_wavelength = species.apv_transition(TransitionCharacter::quadrupole).wavelength;
    r.antinode_error_fraction = antinode_amplitude_error(pnc_wavelength, inputs.lamb_dicke_extent);
    r.node_error_fraction = node_amplitude_error(quad_wavelength, inputs.lamb_dicke_extent);
    r.wavelength = pnc_wavelength;
    r.lamb_dicke_extent = inputs.lamb_dicke_extent;
    r.coherence_tau = inputs.coherence_tau;

    if (species.pnc_shift_target_hz) {
        // The interference shift is homogeneous of degree zero in the quadrupole matrix, so any
        // positive E'' amplitude and scale give the same shift.
        const auto setup = calibrated_setup(species, inputs.e0_prime, inputs.e0_prime, 1.0);
        r.pnc_shift_hz = rad_s_to_hz(pnc_shifts(species, setup).plus);
    } else {
        r.pnc_shift_hz = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

}  // namespace apv
