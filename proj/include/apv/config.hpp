#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "apv/budget.hpp"
#include "apv/constants.hpp"
#include "apv/measurement.hpp"
#include "apv/species.hpp"

namespace apv {

/// Every input document is YAML with `schema_version` and `kind` at the top.
inline constexpr int kSchemaVersion = 1;

enum class DocumentKind { species, scenario, plan };

std::string_view to_string(DocumentKind kind);

/// Run-wide physical settings shared by budgets, light-shift reports and plans.
struct Scenario {
    std::string name;
    double e0_prime = 0.0;         // V/m
    double e0_double_prime = 0.0;  // V/m
    double efficiency_f = 0.0;
    double n_ions = 0.0;
    double obs_time = 0.0;           // s
    double lamb_dicke_extent = 0.0;  // m
    double quad_scale = 0.0;         // rad/s per V/m^2
    /// Overrides every species' Q_W/N when set.
    std::optional<double> qw_over_n;
    /// When set, lamb_dicke_extent refers to this mass and is rescaled per species.
    std::optional<double> lamb_dicke_reference_mass;
    PhysicalConstants constants;

    void validate() const;
};

/// Scenario + species -> uncertainty inputs (coherence time from the species, optional
/// mass rescaling of the confinement extent).
BudgetInputs budget_inputs(const Scenario& scenario, const IonSpecies& species);

/// Species with the scenario's Q_W/N override applied.
IonSpecies apply_scenario(IonSpecies species, const Scenario& scenario);

struct PlanConfig {
    std::filesystem::path species_path;
    std::filesystem::path scenario_path;
    Scenario scenario;
    ExperimentPlan plan;
    NoiseModel noise;
};

DocumentKind detect_document_kind(const std::filesystem::path& path);

IonSpecies load_species(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);
PlanConfig load_plan(const std::filesystem::path& path);

/// Text variants; relative file references resolve against base_dir.
IonSpecies parse_species(const std::string& text, const std::string& source,
                         const std::filesystem::path& base_dir);
Scenario parse_scenario(const std::string& text, const std::string& source);
PlanConfig parse_plan(const std::string& text, const std::string& source,
                      const std::filesystem::path& base_dir);

/// Resolved configuration snapshots recorded in run manifests.
nlohmann::json snapshot(const IonSpecies& species);
nlohmann::json snapshot(const Scenario& scenario);
nlohmann::json snapshot(const PlanConfig& config);

}  // namespace apv
