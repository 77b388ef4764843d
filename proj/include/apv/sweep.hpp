#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apv/config.hpp"
#include "apv/species.hpp"

namespace apv {

/// `name=start:stop:count`, `name=start:stop:count:log` or `name=v1,v2,...`.
struct SweepAxis {
    std::string parameter;
    std::vector<double> values;

    /// Throws ConfigurationError on malformed text or fewer than two points.
    static SweepAxis parse(std::string_view text);
};

/// String cells so mixed label/number rows stay exact and deterministic.
struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void write_csv(std::ostream& out) const;
};

/// Scenario parameters accepted by budget sweeps.
std::span<const std::string_view> budget_sweep_parameters();
/// Plan/noise parameters accepted by Monte Carlo sweeps.
std::span<const std::string_view> plan_sweep_parameters();

/// One row per (value, species), species inner, in input order.
SweepTable sweep_budget(std::span<const IonSpecies> species, const Scenario& scenario,
                        const SweepAxis& axis);

/// One Monte Carlo campaign per value.
SweepTable sweep_plan(const PlanConfig& config, const SweepAxis& axis);

/// obs_time x coherence_tau grid through verify_scaling; the fitted exponent
/// is returned alongside the rows.
SweepTable sweep_scaling(const PlanConfig& config, const SweepAxis& obs_time,
                         const SweepAxis& coherence_tau, double free_time_fraction,
                         double* exponent_out);

}  // namespace apv
