#include "apv/report.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "apv/errors.hpp"
#include "apv/light_shift.hpp"

namespace apv {

namespace {

double field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(key, "missing from report");
    return number_from_json(j.at(key));
}

std::string percent(double fraction) {
    if (!std::isfinite(fraction)) return "n/a";
    return format_display(100.0 * fraction) + "%";
}

std::string display_or_na(double v) { return std::isfinite(v) ? format_display(v) : "n/a"; }

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

nlohmann::json json_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return value;
}

double number_from_json(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw ValidationError("value", fmt::format("expected a number, got {}", j.dump()));
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return fmt::format("{}", value);
}

std::string format_display(double value) { return fmt::format("{:.2g}", value); }

LightShiftReport make_lightshift_report(const IonSpecies& species_in, const Scenario& scenario,
                                        std::optional<double> quad_detuning, std::optional<double> pnc_scale) {
    const IonSpecies species = apply_scenario(species_in, scenario);
    const LightShiftSetup setup =
        pnc_scale ? uncalibrated_setup(species, scenario.e0_prime, scenario.e0_double_prime, scenario.quad_scale,
                                       *pnc_scale)
                  : calibrated_setup(species, scenario.e0_prime, scenario.e0_double_prime, scenario.quad_scale);
    const SublevelShifts pnc = pnc_shifts(species, setup);

    LightShiftReport r;
    r.species = species.name;
    r.e0_prime = scenario.e0_prime;
    r.e0_double_prime = scenario.e0_double_prime;
    r.pnc_scale = setup.pnc_scale;
    r.quad_scale = setup.quad_scale;
    r.shift_plus_hz = rad_s_to_hz(pnc.plus);
    r.shift_minus_hz = rad_s_to_hz(pnc.minus);
    double plus = pnc.plus, minus = pnc.minus;
    if (quad_detuning) {
        const SublevelShifts quad = quad_shifts(species, setup, *quad_detuning);
        r.quad_shift_plus_hz = rad_s_to_hz(quad.plus);
        r.quad_shift_minus_hz = rad_s_to_hz(quad.minus);
        plus += quad.plus;
        minus += quad.minus;
    }
    r.larmor_change_hz = rad_s_to_hz(larmor_splitting(0.0, plus, minus, 0.0));
    return r;
}

void to_json(nlohmann::json& j, const BudgetReport& r) {
    j = {{"species", r.species},
         {"e1_pnc_si", json_number(r.e1_pnc_si)},
         {"delta_e1_si", json_number(r.delta_e1_si)},
         {"statistical_fraction", json_number(r.statistical_fraction)},
         {"antinode_error_fraction", json_number(r.antinode_error_fraction)},
         {"node_error_fraction", json_number(r.node_error_fraction)},
         {"pnc_shift_hz", json_number(r.pnc_shift_hz)},
         {"wavelength_m", json_number(r.wavelength)},
         {"lamb_dicke_extent_m", json_number(r.lamb_dicke_extent)},
         {"coherence_tau_s", json_number(r.coherence_tau)},
         {"measurable", r.measurable()}};
}

void from_json(const nlohmann::json& j, BudgetReport& r) {
    if (!j.is_object()) throw ValidationError("report", "expected an object");
    if (!j.contains("species") || !j.at("species").is_string()) throw ValidationError("species", "expected a string");
    r.species = j.at("species").get<std::string>();
    r.e1_pnc_si = field(j, "e1_pnc_si");
    r.delta_e1_si = field(j, "delta_e1_si");
    r.statistical_fraction = field(j, "statistical_fraction");
    r.antinode_error_fraction = field(j, "antinode_error_fraction");
    r.node_error_fraction = field(j, "node_error_fraction");
    r.pnc_shift_hz = field(j, "pnc_shift_hz");
    r.wavelength = field(j, "wavelength_m");
    r.lamb_dicke_extent = field(j, "lamb_dicke_extent_m");
    r.coherence_tau = field(j, "coherence_tau_s");
    if (!j.contains("measurable") || !j.at("measurable").is_boolean())
        throw ValidationError("measurable", "expected a boolean");
    if (j.at("measurable").get<bool>() != r.measurable())
        throw ValidationError("measurable", "inconsistent with statistical_fraction");
}

void to_json(nlohmann::json& j, const LightShiftReport& r) {
    j = {{"species", r.species},
         {"e0_prime_v_per_m", json_number(r.e0_prime)},
         {"e0_double_prime_v_per_m", json_number(r.e0_double_prime)},
         {"pnc_scale_rad_s_per_v_m", json_number(r.pnc_scale)},
         {"quad_scale_rad_s_per_v_m2", json_number(r.quad_scale)},
         {"shift_plus_hz", json_number(r.shift_plus_hz)},
         {"shift_minus_hz", json_number(r.shift_minus_hz)},
         {"larmor_change_hz", json_number(r.larmor_change_hz)}};
    if (r.quad_shift_plus_hz) j["quad_shift_plus_hz"] = json_number(*r.quad_shift_plus_hz);
    if (r.quad_shift_minus_hz) j["quad_shift_minus_hz"] = json_number(*r.quad_shift_minus_hz);
}

void from_json(const nlohmann::json& j, LightShiftReport& r) {
    if (!j.is_object()) throw ValidationError("report", "expected an object");
    r.species = j.at("species").get<std::string>();
    r.e0_prime = field(j, "e0_prime_v_per_m");
    r.e0_double_prime = field(j, "e0_double_prime_v_per_m");
    r.pnc_scale = field(j, "pnc_scale_rad_s_per_v_m");
    r.quad_scale = field(j, "quad_scale_rad_s_per_v_m2");
    r.shift_plus_hz = field(j, "shift_plus_hz");
    r.shift_minus_hz = field(j, "shift_minus_hz");
    r.larmor_change_hz = field(j, "larmor_change_hz");
    if (j.contains("quad_shift_plus_hz")) r.quad_shift_plus_hz = field(j, "quad_shift_plus_hz");
    if (j.contains("quad_shift_minus_hz")) r.quad_shift_minus_hz = field(j, "quad_shift_minus_hz");
}

void to_json(nlohmann::json& j, const Estimate& e) {
    j = {{"value", json_number(e.value)}, {"stderr", json_number(e.std_error)}};
}

void from_json(const nlohmann::json& j, Estimate& e) {
    if (!j.is_object()) throw ValidationError("estimate", "expected an object with value and stderr");
    e.value = field(j, "value");
    e.std_error = field(j, "stderr");
}

void to_json(nlohmann::json& j, const EstimatorResult& r) {
    j = {{"freq_on_rad_s", r.freq_on},
         {"freq_off_rad_s", r.freq_off},
         {"larmor_shift_rad_s", r.larmor_shift},
         {"pnc_shift_estimate_rad_s", r.pnc_shift_estimate},
         {"pnc_shift_estimate_hz",
          Estimate{rad_s_to_hz(r.pnc_shift_estimate.value), rad_s_to_hz(r.pnc_shift_estimate.std_error)}},
         {"expected_pnc_shift_rad_s", json_number(r.expected_pnc_shift)},
         {"scatter_stderr_rad_s", json_number(r.scatter_stderr)},
         {"effective_f", json_number(r.effective_f)},
         {"trials_used", r.trials_used},
         {"blocks_used", r.blocks_used},
         {"blocks_discarded", r.blocks_discarded},
         {"seed", r.seed}};
}

void from_json(const nlohmann::json& j, EstimatorResult& r) {
    if (!j.is_object()) throw ValidationError("result", "expected an object");
    auto count = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_number_unsigned()) throw ValidationError(key, "expected a count");
        return j.at(key).get<std::uint64_t>();
    };
    auto estimate = [&](const char* key) {
        if (!j.contains(key)) throw ValidationError(key, "missing from result");
        return j.at(key).get<Estimate>();
    };
    r.freq_on = estimate("freq_on_rad_s");
    r.freq_off = estimate("freq_off_rad_s");
    r.larmor_shift = estimate("larmor_shift_rad_s");
    r.pnc_shift_estimate = estimate("pnc_shift_estimate_rad_s");
    r.expected_pnc_shift = field(j, "expected_pnc_shift_rad_s");
    r.scatter_stderr = field(j, "scatter_stderr_rad_s");
    r.effective_f = field(j, "effective_f");
    r.trials_used = count("trials_used");
    r.blocks_used = count("blocks_used");
    r.blocks_discarded = count("blocks_discarded");
    r.seed = count("seed");
}

void to_json(nlohmann::json& j, const ScalingStudy& s) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : s.rows)
        rows.push_back({{"obs_time_s", row.obs_time},
                        {"coherence_tau_s", row.coherence_tau},
                        {"free_time_s", row.free_time},
                        {"trials", row.trials},
                        {"stderr_empirical_rad_s", json_number(row.stderr_empirical)},
                        {"stderr_reported_rad_s", json_number(row.stderr_reported)},
                        {"predicted_shape", json_number(row.predicted_shape)}});
    j = {{"rows", rows}, {"exponent", json_number(s.exponent)}};
}

void write_budget_table(std::ostream& out, std::span<const BudgetReport> reports) {
    out << fmt::format("{:<12} {:>11} {:>11} {:>9} {:>9} {:>9} {:>10} {:>8}\n", "species", "E1_PNC[Cm]",
                       "dE1[Cm]", "stat", "E' sys", "E'' sys", "shift[Hz]", "tau[s]");
    for (const auto& r : reports) {
        out << fmt::format("{:<12} {:>11} {:>11} {:>9} {:>9} {:>9} {:>10} {:>8}\n", r.species,
                           r.e1_pnc_si > 0 ? fmt::format("{:.3g}", r.e1_pnc_si) : "n/a",
                           fmt::format("{:.3g}", r.delta_e1_si),
                           r.measurable() ? percent(r.statistical_fraction) : "not meas.",
                           percent(r.antinode_error_fraction), percent(r.node_error_fraction),
                           display_or_na(r.pnc_shift_hz), display_or_na(r.coherence_tau));
    }
}

void write_budget_csv(std::ostream& out, std::span<const BudgetReport> reports) {
    out << "species,e1_pnc_si,delta_e1_si,statistical_fraction,antinode_error_fraction,node_error_fraction,"
           "pnc_shift_hz,wavelength_m,lamb_dicke_extent_m,coherence_tau_s,measurable\n";
    for (const auto& r : reports)
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", csv_cell(r.species), format_number(r.e1_pnc_si),
                           format_number(r.delta_e1_si), format_number(r.statistical_fraction),
                           format_number(r.antinode_error_fraction), format_number(r.node_error_fraction),
                           format_number(r.pnc_shift_hz), format_number(r.wavelength),
                           format_number(r.lamb_dicke_extent), format_number(r.coherence_tau),
                           r.measurable() ? "true" : "false");
}

void write_lightshift_table(std::ostream& out, std::span<const LightShiftReport> reports) {
    out << fmt::format("{:<12} {:>10} {:>14} {:>14} {:>16} {:>14}\n", "species", "E0'[V/m]", "shift(+1/2)[Hz]",
                       "shift(-1/2)[Hz]", "Larmor chg[Hz]", "quad(+-)[Hz]");
    for (const auto& r : reports) {
        out << fmt::format("{:<12} {:>10.3g} {:>14.4g} {:>14.4g} {:>16.4g} {:>14}\n", r.species, r.e0_prime,
                           r.shift_plus_hz, r.shift_minus_hz, r.larmor_change_hz,
                           r.quad_shift_plus_hz ? fmt::format("{:.4g}", *r.quad_shift_plus_hz) : "-");
    }
}

void write_lightshift_csv(std::ostream& out, std::span<const LightShiftReport> reports) {
    out << "species,e0_prime_v_per_m,e0_double_prime_v_per_m,pnc_scale_rad_s_per_v_m,quad_scale_rad_s_per_v_m2,"
           "shift_plus_hz,shift_minus_hz,larmor_change_hz,quad_shift_plus_hz,quad_shift_minus_hz\n";
    for (const auto& r : reports)
        out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", csv_cell(r.species), format_number(r.e0_prime),
                           format_number(r.e0_double_prime), format_number(r.pnc_scale), format_number(r.quad_scale),
                           format_number(r.shift_plus_hz), format_number(r.shift_minus_hz),
                           format_number(r.larmor_change_hz),
                           r.quad_shift_plus_hz ? format_number(*r.quad_shift_plus_hz) : "",
                           r.quad_shift_minus_hz ? format_number(*r.quad_shift_minus_hz) : "");
}

void write_estimator_table(std::ostream& out, const EstimatorResult& r) {
    auto line = [&](const char* label, const Estimate& e) {
        out << fmt::format("{:<22} {:>16.10g} +- {:<12.3g} rad/s\n", label, e.value, e.std_error);
    };
    line("Larmor, lasers on", r.freq_on);
    line("Larmor, lasers off", r.freq_off);
    line("Larmor change", r.larmor_shift);
    line("PNC shift (m=+1/2)", r.pnc_shift_estimate);
    out << fmt::format("{:<22} {:>16.6g} +- {:<12.3g} Hz\n", "PNC shift / 2pi", rad_s_to_hz(r.pnc_shift_estimate.value),
                       rad_s_to_hz(r.pnc_shift_estimate.std_error));
    out << fmt::format("{:<22} {:>16.6g} Hz\n", "expected / 2pi", rad_s_to_hz(r.expected_pnc_shift));
    out << fmt::format("{:<22} {:>16}\n", "effective f", display_or_na(r.effective_f));
    out << fmt::format("{:<22} {:>16}\n", "trials used", r.trials_used);
    out << fmt::format("{:<22} {:>16} ({} discarded)\n", "blocks used", r.blocks_used, r.blocks_discarded);
    out << fmt::format("{:<22} {:>16}\n", "seed", r.seed);
}

void write_estimator_csv(std::ostream& out, const EstimatorResult& r) {
    out << "freq_on_rad_s,freq_on_stderr,freq_off_rad_s,freq_off_stderr,larmor_shift_rad_s,larmor_shift_stderr,"
           "pnc_shift_estimate_rad_s,pnc_shift_stderr,expected_pnc_shift_rad_s,scatter_stderr_rad_s,effective_f,"
           "trials_used,blocks_used,blocks_discarded,seed\n";
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", format_number(r.freq_on.value),
                       format_number(r.freq_on.std_error), format_number(r.freq_off.value),
                       format_number(r.freq_off.std_error), format_number(r.larmor_shift.value),
                       format_number(r.larmor_shift.std_error), format_number(r.pnc_shift_estimate.value),
                       format_number(r.pnc_shift_estimate.std_error), format_number(r.expected_pnc_shift),
                       format_number(r.scatter_stderr), format_number(r.effective_f), r.trials_used, r.blocks_used,
                       r.blocks_discarded, r.seed);
}

void write_blocks_csv(std::ostream& out, const EstimatorResult& r) {
    out << "block,valid,freq_on_rad_s,freq_off_rad_s,larmor_shift_rad_s,variance_on,variance_off\n";
    for (const auto& b : r.blocks)
        out << fmt::format("{},{},{},{},{},{},{}\n", b.block, b.valid ? "true" : "false", format_number(b.freq_on),
                           format_number(b.freq_off), format_number(b.larmor_shift), format_number(b.variance_on),
                           format_number(b.variance_off));
}

std::vector<BudgetReport> parse_budget_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("json", e.what());
    }
    if (!j.is_array()) throw ValidationError("json", "budget document must be an array of reports");
    std::vector<BudgetReport> out;
    for (const auto& item : j) out.push_back(item.get<BudgetReport>());
    return out;
}

EstimatorResult parse_estimator_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("json", e.what());
    }
    return j.get<EstimatorResult>();
}

}  // namespace apv
