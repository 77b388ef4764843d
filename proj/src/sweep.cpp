#include "apv/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "apv/budget.hpp"
#include "apv/errors.hpp"
#include "apv/measurement.hpp"
#include "apv/report.hpp"

namespace apv {

namespace {

constexpr std::string_view kBudgetParameters[] = {"e0_prime",      "efficiency_f",      "n_ions",   "obs_time",
                                                  "coherence_tau", "lamb_dicke_extent", "qw_over_n"};
constexpr std::string_view kPlanParameters[] = {"free_time",     "trials_per_block", "blocks",
                                                "position_sigma", "b_field_sigma",    "common_mode_drift",
                                                "larmor_drift",  "decoherence_tau",  "e0_prime",
                                                "contrast",      "on_reference_offset"};

double parse_double(std::string_view text, std::string_view spec) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || p != end || !std::isfinite(v))
        throw ConfigurationError(fmt::format("axis '{}': '{}' is not a number", spec, text));
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

void require_known(const SweepAxis& axis, std::span<const std::string_view> known, std::string_view what) {
    if (std::find(known.begin(), known.end(), axis.parameter) != known.end()) return;
    std::string list;
    for (auto k : known) list += (list.empty() ? "" : ", ") + std::string(k);
    throw ConfigurationError(fmt::format("'{}' is not a {} sweep parameter (expected one of: {})", axis.parameter,
                                         what, list));
}

std::size_t as_count(double v, std::string_view name) {
    if (!(v >= 1.0) || v != std::floor(v))
        throw ConfigurationError(fmt::format("{} must be a positive integer, got {}", name, v));
    return static_cast<std::size_t>(v);
}

}  // namespace

SweepAxis SweepAxis::parse(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigurationError(fmt::format("axis '{}' must look like name=start:stop:count or name=v1,v2,...", text));
    SweepAxis axis;
    axis.parameter = std::string(text.substr(0, eq));
    const auto body = text.substr(eq + 1);
    if (body.find(':') != std::string_view::npos) {
        const auto parts = split(body, ':');
        if (parts.size() != 3 && parts.size() != 4)
            throw ConfigurationError(fmt::format("axis '{}': range needs start:stop:count[:log]", text));
        const double start = parse_double(parts[0], text);
        const double stop = parse_double(parts[1], text);
        const double count_d = parse_double(parts[2], text);
        const bool log = parts.size() == 4;
        if (log && parts[3] != "log") throw ConfigurationError(fmt::format("axis '{}': unknown range mode '{}'", text, parts[3]));
        if (count_d != std::floor(count_d) || count_d < 0)
            throw ConfigurationError(fmt::format("axis '{}': count must be a non-negative integer", text));
        const auto count = static_cast<std::size_t>(count_d);
        if (log && (start <= 0.0 || stop <= 0.0))
            throw ConfigurationError(fmt::format("axis '{}': log ranges need positive endpoints", text));
        for (std::size_t i = 0; i < count; ++i) {
            const double frac = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
            axis.values.push_back(log ? std::exp(std::log(start) + frac * (std::log(stop) - std::log(start)))
                                      : start + frac * (stop - start));
        }
    } else {
        for (auto part : split(body, ',')) axis.values.push_back(parse_double(part, text));
    }
    if (axis.values.size() < 2)
        throw ConfigurationError(fmt::format("axis '{}' needs at least two points", axis.parameter));
    return axis;
}

void SweepTable::write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

std::span<const std::string_view> budget_sweep_parameters() { return kBudgetParameters; }
std::span<const std::string_view> plan_sweep_parameters() { return kPlanParameters; }

SweepTable sweep_budget(std::span<const IonSpecies> species, const Scenario& scenario, const SweepAxis& axis) {
    require_known(axis, kBudgetParameters, "budget");
    if (species.empty()) throw ConfigurationError("budget sweep needs at least one species");
    SweepTable table;
    table.columns = {"parameter",          "value",       "species",          "e1_pnc_si",
                     "delta_e1_si",        "statistical_fraction", "antinode_error_fraction",
                     "node_error_fraction", "pnc_shift_hz"};
    for (const double v : axis.values) {
        Scenario sc = scenario;
        if (axis.parameter == "e0_prime") sc.e0_prime = v;
        else if (axis.parameter == "efficiency_f") sc.efficiency_f = v;
        else if (axis.parameter == "n_ions") sc.n_ions = v;
        else if (axis.parameter == "obs_time") sc.obs_time = v;
        else if (axis.parameter == "lamb_dicke_extent") sc.lamb_dicke_extent = v;
        else if (axis.parameter == "qw_over_n") sc.qw_over_n = v;
        for (const auto& s0 : species) {
            const IonSpecies s = apply_scenario(s0, sc);
            BudgetInputs in = budget_inputs(sc, s);
            if (axis.parameter == "coherence_tau") in.coherence_tau = v;
            const BudgetReport r = full_budget(s, in, sc.constants);
            table.rows.push_back({axis.parameter, format_number(v), s.name, format_number(r.e1_pnc_si),
                                  format_number(r.delta_e1_si), format_number(r.statistical_fraction),
                                  format_number(r.antinode_error_fraction), format_number(r.node_error_fraction),
                                  format_number(r.pnc_shift_hz)});
        }
    }
    return table;
}

SweepTable sweep_plan(const PlanConfig& config, const SweepAxis& axis) {
    require_known(axis, kPlanParameters, "plan");
    SweepTable table;
    table.columns = {"parameter",        "value",         "pnc_shift_estimate_rad_s", "pnc_shift_stderr",
                     "scatter_stderr",   "larmor_shift_rad_s", "expected_pnc_shift_rad_s", "effective_f",
                     "blocks_used",      "blocks_discarded"};
    for (const double v : axis.values) {
        ExperimentPlan plan = config.plan;
        NoiseModel noise = config.noise;
        const auto& p = axis.parameter;
        if (p == "free_time") plan.sequence.free_time = v;
        else if (p == "trials_per_block") plan.trials_per_block = as_count(v, p);
        else if (p == "blocks") plan.blocks = as_count(v, p);
        else if (p == "position_sigma") noise.position_sigma = v;
        else if (p == "b_field_sigma") noise.b_field_sigma = v;
        else if (p == "common_mode_drift") noise.common_mode_drift = v;
        else if (p == "larmor_drift") noise.larmor_drift = v;
        else if (p == "decoherence_tau") noise.decoherence_tau = v;
        else if (p == "e0_prime") plan.setup.pnc_field.amplitude = v;
        else if (p == "contrast") plan.sequence.contrast = v;
        else if (p == "on_reference_offset") plan.on_reference_offset = v;

        std::vector<std::string> row{p, format_number(v)};
        try {
            const auto r = run_experiment(plan, noise);
            for (double x : {r.pnc_shift_estimate.value, r.pnc_shift_estimate.std_error, r.scatter_stderr,
                             r.larmor_shift.value, r.expected_pnc_shift, r.effective_f})
                row.push_back(format_number(x));
            row.push_back(std::to_string(r.blocks_used));
            row.push_back(std::to_string(r.blocks_discarded));
        } catch (const EstimatorError&) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            for (int i = 0; i < 6; ++i) row.push_back(format_number(nan));
            row.push_back("0");
            row.push_back(std::to_string(plan.blocks));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

SweepTable sweep_scaling(const PlanConfig& config, const SweepAxis& obs_time, const SweepAxis& coherence_tau,
                         double free_time_fraction, double* exponent_out) {
    if (obs_time.parameter != "obs_time" || coherence_tau.parameter != "coherence_tau")
        throw ConfigurationError("a two-axis sweep takes obs_time and coherence_tau");
    const auto study =
        verify_scaling(config.plan, config.noise, obs_time.values, coherence_tau.values, free_time_fraction);
    if (exponent_out) *exponent_out = study.exponent;
    SweepTable table;
    table.columns = {"obs_time_s",       "coherence_tau_s",       "free_time_s",    "trials",
                     "stderr_empirical", "stderr_reported",       "predicted_shape"};
    for (const auto& r : study.rows)
        table.rows.push_back({format_number(r.obs_time), format_number(r.coherence_tau), format_number(r.free_time),
                              std::to_string(r.trials), format_number(r.stderr_empirical),
                              format_number(r.stderr_reported), format_number(r.predicted_shape)});
    return table;
}

}  // namespace apv
