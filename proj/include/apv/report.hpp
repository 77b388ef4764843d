#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "apv/budget.hpp"
#include "apv/config.hpp"
#include "apv/measurement.hpp"

namespace apv {

/// Per-sublevel interference shifts for one species and field configuration.
struct LightShiftReport {
    std::string species;
    double e0_prime = 0.0;
    double e0_double_prime = 0.0;
    double pnc_scale = 0.0;
    double quad_scale = 0.0;
    double shift_plus_hz = 0.0;
    double shift_minus_hz = 0.0;
    double larmor_change_hz = 0.0;
    /// Common-mode quadrupole shift per sublevel, when a detuning was given.
    std::optional<double> quad_shift_plus_hz;
    std::optional<double> quad_shift_minus_hz;
};

/// Throws SpeciesConfigurationError when the species cannot be calibrated and
/// no explicit PNC scale was supplied.
LightShiftReport make_lightshift_report(const IonSpecies& species, const Scenario& scenario,
                                        std::optional<double> quad_detuning = std::nullopt,
                                        std::optional<double> pnc_scale = std::nullopt);

void to_json(nlohmann::json& j, const BudgetReport& r);
void from_json(const nlohmann::json& j, BudgetReport& r);
void to_json(nlohmann::json& j, const LightShiftReport& r);
void from_json(const nlohmann::json& j, LightShiftReport& r);
void to_json(nlohmann::json& j, const Estimate& e);
void from_json(const nlohmann::json& j, Estimate& e);
void to_json(nlohmann::json& j, const EstimatorResult& r);
void from_json(const nlohmann::json& j, EstimatorResult& r);
void to_json(nlohmann::json& j, const ScalingStudy& s);

/// Non-finite doubles are written as the strings "inf", "-inf" and "nan" so
/// the documents stay valid JSON; these read them back.
nlohmann::json json_number(double value);
double number_from_json(const nlohmann::json& j);

/// Shortest round-trip text for a double ("inf"/"nan" for non-finite values).
std::string format_number(double value);

/// Two significant figures, the display style of the summary tables.
std::string format_display(double value);

void write_budget_table(std::ostream& out, std::span<const BudgetReport> reports);
void write_budget_csv(std::ostream& out, std::span<const BudgetReport> reports);
void write_lightshift_table(std::ostream& out, std::span<const LightShiftReport> reports);
void write_lightshift_csv(std::ostream& out, std::span<const LightShiftReport> reports);
void write_estimator_table(std::ostream& out, const EstimatorResult& result);
void write_estimator_csv(std::ostream& out, const EstimatorResult& result);
void write_blocks_csv(std::ostream& out, const EstimatorResult& result);

/// Schema-checked parse of a budget JSON document (array of reports).
std::vector<BudgetReport> parse_budget_json(const std::string& text);
EstimatorResult parse_estimator_json(const std::string& text);

}  // namespace apv
