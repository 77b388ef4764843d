#pragma once

#include <string>

#include "apv/constants.hpp"
#include "apv/species.hpp"

namespace apv {

struct BudgetInputs {
    double e0_prime = 0.0;           // V/m
    double efficiency_f = 0.0;
    double n_ions = 0.0;
    double obs_time_t = 0.0;         // s
    double coherence_tau = 0.0;      // s
    double lamb_dicke_extent = 0.0;  // m

    void validate() const;
};

/// One species column of the uncertainty table.
struct BudgetReport {
    std::string species;
    double e1_pnc_si = 0.0;    // C m
    double delta_e1_si = 0.0;  // C m
    /// delta_e1 / e1; +inf when the species has no absolute amplitude.
    double statistical_fraction = 0.0;
    double antinode_error_fraction = 0.0;
    double node_error_fraction = 0.0;
    /// Calibrated interference shift at E0' (Hz); NaN when uncalibrated.
    double pnc_shift_hz = 0.0;
    double wavelength = 0.0;          // m, S-D transition used for k
    double lamb_dicke_extent = 0.0;   // m
    double coherence_tau = 0.0;       // s

    bool measurable() const;
};

/// |E1_PNC| in C m: coeff x 1e-11 x (Q_W/N) x e a0. Zero for relative-unit species.
double e1_pnc_si(const IonSpecies& species, const PhysicalConstants& constants);

/// hbar / (E0' f sqrt(N t tau)).
double statistical_uncertainty(const BudgetInputs& inputs, const PhysicalConstants& constants);

/// Fractional E' error at the antinode for a residual displacement: 1 - cos(k x).
double antinode_amplitude_error(double wavelength, double lamb_dicke_extent);

/// Fractional E'' error at the node: sin(k x).
double node_amplitude_error(double wavelength, double lamb_dicke_extent);

/// Confinement extent scales as 1/sqrt(mass).
double lamb_dicke_mass_scaling(double ref_extent, double ref_mass, double new_mass);

BudgetReport full_budget(const IonSpecies& species, const BudgetInputs& inputs,
                         const PhysicalConstants& constants);

}  // namespace apv
