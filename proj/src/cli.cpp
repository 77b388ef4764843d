#include "apv/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "apv/budget.hpp"
#include "apv/config.hpp"
#include "apv/errors.hpp"
#include "apv/report.hpp"
#include "apv/sweep.hpp"

#ifndef APV_VERSION
#define APV_VERSION "0.0.0"
#endif

namespace apv::cli {

namespace fs = std::filesystem;

namespace {

enum class Format { table, json, csv };

struct CommonOptions {
    std::vector<std::string> species;
    std::string scenario;
    std::string plan;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    Format format = Format::table;
};

void add_format(CLI::App* cmd, Format& target) {
    cmd->add_option_function<std::string>(
           "--format",
           [&target](const std::string& value) {
               const std::string v = CLI::detail::to_lower(value);
               target = v == "json" ? Format::json : v == "csv" ? Format::csv : Format::table;
           },
           "Output format on standard output")
        ->check(CLI::IsMember({"table", "json", "csv"}, CLI::ignore_case));
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << content;
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void write_manifest(const fs::path& dir, const std::string& command, const std::vector<std::string>& inputs,
                    nlohmann::json config, std::optional<std::uint64_t> seed) {
    nlohmann::json m{{"command", command},
                     {"inputs", inputs},
                     {"config", std::move(config)},
                     {"tool_version", APV_VERSION},
                     {"timestamp", utc_timestamp()}};
    m["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    write_file(dir / "manifest.json", m.dump(2) + "\n");
}

std::vector<IonSpecies> load_all_species(const std::vector<std::string>& paths) {
    std::vector<IonSpecies> out;
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(load_species(p));
    return out;
}

int cmd_budget(const CommonOptions& o, std::ostream& out) {
    if (o.species.empty()) throw ConfigurationError("budget needs at least one --species file");
    const Scenario scenario = load_scenario(o.scenario);
    std::vector<BudgetReport> reports;
    nlohmann::json species_snap = nlohmann::json::array();
    for (const auto& s0 : load_all_species(o.species)) {
        const IonSpecies s = apply_scenario(s0, scenario);
        reports.push_back(full_budget(s, budget_inputs(scenario, s), scenario.constants));
        species_snap.push_back(snapshot(s));
    }
    const std::string json = nlohmann::json(reports).dump(2) + "\n";
    std::ostringstream csv;
    write_budget_csv(csv, reports);

    switch (o.format) {
        case Format::table: write_budget_table(out, reports); break;
        case Format::json: out << json; break;
        case Format::csv: out << csv.str(); break;
    }
    if (!o.out_dir.empty()) {
        const auto dir = prepare_out_dir(o.out_dir);
        write_file(dir / "budget.json", json);
        write_file(dir / "budget.csv", csv.str());
        std::vector<std::string> inputs = o.species;
        inputs.push_back(o.scenario);
        write_manifest(dir, "budget", inputs, {{"scenario", snapshot(scenario)}, {"species", species_snap}}, std::nullopt);
    }
    return kExitOk;
}

int cmd_lightshift(const CommonOptions& o, std::optional<double> e0_prime, std::optional<double> detuning,
                   std::optional<double> pnc_scale, std::ostream& out) {
    if (o.species.empty()) throw ConfigurationError("lightshift needs at least one --species file");
    Scenario scenario = load_scenario(o.scenario);
    if (e0_prime) {
        scenario.e0_prime = *e0_prime;
        if (!(*e0_prime >= 0.0)) throw ValidationError("e0-prime", "must be >= 0");
    }
    std::vector<LightShiftReport> reports;
    for (const auto& s : load_all_species(o.species))
        reports.push_back(make_lightshift_report(s, scenario, detuning, pnc_scale));

    const std::string json = nlohmann::json(reports).dump(2) + "\n";
    std::ostringstream csv;
    write_lightshift_csv(csv, reports);
    switch (o.format) {
        case Format::table: write_lightshift_table(out, reports); break;
        case Format::json: out << json; break;
        case Format::csv: out << csv.str(); break;
    }
    if (!o.out_dir.empty()) {
        const auto dir = prepare_out_dir(o.out_dir);
        write_file(dir / "lightshift.json", json);
        write_file(dir / "lightshift.csv", csv.str());
        std::vector<std::string> inputs = o.species;
        inputs.push_back(o.scenario);
        nlohmann::json cfg{{"scenario", snapshot(scenario)}};
        if (detuning) cfg["quad_detuning_rad_s"] = *detuning;
        if (pnc_scale) cfg["pnc_scale_rad_s_per_v_m"] = *pnc_scale;
        write_manifest(dir, "lightshift", inputs, cfg, std::nullopt);
    }
    return kExitOk;
}

PlanConfig load_plan_with_overrides(const CommonOptions& o, std::optional<unsigned> workers) {
    if (o.plan.empty()) throw ConfigurationError("--plan is required");
    PlanConfig cfg = load_plan(o.plan);
    if (o.seed) cfg.plan.seed = *o.seed;
    if (workers) {
        if (*workers < 1) throw ValidationError("workers", "must be >= 1");
        cfg.plan.workers = *workers;
    }
    return cfg;
}

int cmd_ramsey(const CommonOptions& o, std::optional<unsigned> workers, std::ostream& out) {
    const PlanConfig cfg = load_plan_with_overrides(o, workers);
    const EstimatorResult r = run_experiment(cfg.plan, cfg.noise);
    const std::string json = nlohmann::json(r).dump(2) + "\n";
    std::ostringstream csv;
    write_estimator_csv(csv, r);
    switch (o.format) {
        case Format::table: write_estimator_table(out, r); break;
        case Format::json: out << json; break;
        case Format::csv: out << csv.str(); break;
    }
    if (!o.out_dir.empty()) {
        const auto dir = prepare_out_dir(o.out_dir);
        write_file(dir / "ramsey.json", json);
        std::ostringstream blocks;
        write_blocks_csv(blocks, r);
        write_file(dir / "ramsey_blocks.csv", blocks.str());
        write_manifest(dir, "ramsey", {o.plan, cfg.species_path.string(), cfg.scenario_path.string()}, snapshot(cfg),
                       cfg.plan.seed);
    }
    return kExitOk;
}

int cmd_sweep(const CommonOptions& o, const std::vector<std::string>& axis_specs, double free_time_fraction,
              std::optional<unsigned> workers, std::ostream& out) {
    if (axis_specs.empty() || axis_specs.size() > 2) throw ConfigurationError("sweep takes one or two --axis options");
    std::vector<SweepAxis> axes;
    for (const auto& a : axis_specs) axes.push_back(SweepAxis::parse(a));

    SweepTable table;
    nlohmann::json cfg_snap;
    std::vector<std::string> inputs;
    std::optional<std::uint64_t> seed;
    std::optional<double> exponent;
    if (!o.plan.empty()) {
        const PlanConfig cfg = load_plan_with_overrides(o, workers);
        cfg_snap = snapshot(cfg);
        inputs = {o.plan};
        seed = cfg.plan.seed;
        if (axes.size() == 2) {
            double e = 0.0;
            table = sweep_scaling(cfg, axes[0], axes[1], free_time_fraction, &e);
            exponent = e;
        } else {
            table = sweep_plan(cfg, axes[0]);
        }
    } else {
        if (axes.size() != 1) throw ConfigurationError("budget sweeps take exactly one --axis");
        if (o.species.empty()) throw ConfigurationError("sweep needs --plan or at least one --species file");
        const Scenario scenario = load_scenario(o.scenario);
        const auto species = load_all_species(o.species);
        table = sweep_budget(species, scenario, axes[0]);
        cfg_snap = {{"scenario", snapshot(scenario)}};
        inputs = o.species;
        inputs.push_back(o.scenario);
    }

    std::ostringstream csv;
    table.write_csv(csv);
    if (o.format == Format::json) {
        nlohmann::json j{{"columns", table.columns}, {"rows", table.rows}};
        if (exponent) j["exponent"] = *exponent;
        out << j.dump(2) << "\n";
    } else {
        out << csv.str();
        if (exponent && o.format == Format::table) out << fmt::format("# fitted exponent: {}\n", format_number(*exponent));
    }
    if (!o.out_dir.empty()) {
        const auto dir = prepare_out_dir(o.out_dir);
        write_file(dir / "sweep.csv", csv.str());
        if (exponent) write_file(dir / "scaling.json", nlohmann::json{{"exponent", *exponent}}.dump(2) + "\n");
        cfg_snap["axes"] = axis_specs;
        write_manifest(dir, "sweep", inputs, cfg_snap, seed);
    }
    return kExitOk;
}

int cmd_validate(const CommonOptions& o, const std::vector<std::string>& files, std::ostream& out) {
    std::vector<std::pair<std::string, std::optional<DocumentKind>>> todo;
    for (const auto& s : o.species) todo.emplace_back(s, DocumentKind::species);
    if (!o.scenario.empty()) todo.emplace_back(o.scenario, DocumentKind::scenario);
    if (!o.plan.empty()) todo.emplace_back(o.plan, DocumentKind::plan);
    for (const auto& f : files) todo.emplace_back(f, std::nullopt);
    if (todo.empty()) throw ConfigurationError("validate needs at least one file");

    for (const auto& [path, declared] : todo) {
        const DocumentKind kind = declared ? *declared : detect_document_kind(path);
        switch (kind) {
            case DocumentKind::species: load_species(path); break;
            case DocumentKind::scenario: load_scenario(path); break;
            case DocumentKind::plan: load_plan(path); break;
        }
        out << fmt::format("ok: {} ({})\n", path, to_string(kind));
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Light-shift parity-violation measurement: budgets, shifts and Monte Carlo campaigns", "apvsim"};
    app.set_version_flag("--version", APV_VERSION);
    app.require_subcommand(1);

    CommonOptions o;
    std::optional<double> e0_prime, detuning, pnc_scale;
    std::optional<unsigned> workers;
    std::vector<std::string> axes;
    std::vector<std::string> files;
    double free_time_fraction = 0.5;

    auto add_species = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--species", o.species, "Species file(s)");
        if (required) opt->required();
    };
    auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out_dir, "Directory for machine-readable outputs"); };

    auto* budget = app.add_subcommand("budget", "Statistical and systematic uncertainty per species");
    add_species(budget, true);
    budget->add_option("--scenario", o.scenario, "Scenario file")->required();
    add_out(budget);
    add_format(budget, o.format);

    auto* lightshift = app.add_subcommand("lightshift", "Per-sublevel interference shifts and Larmor change");
    add_species(lightshift, true);
    lightshift->add_option("--scenario", o.scenario, "Scenario file")->required();
    lightshift->add_option("--e0-prime", e0_prime, "Override E0' (V/m)");
    lightshift->add_option("--quad-detuning", detuning, "E'' detuning (rad/s) for the common-mode shift");
    lightshift->add_option("--pnc-scale", pnc_scale, "Explicit PNC scale (rad/s per V/m) instead of calibration");
    add_out(lightshift);
    add_format(lightshift, o.format);

    auto* ramsey = app.add_subcommand("ramsey", "Monte Carlo Ramsey campaign with lasers on/off");
    ramsey->add_option("--plan", o.plan, "Plan file")->required();
    ramsey->add_option("--seed", o.seed, "Override the plan seed");
    ramsey->add_option("--workers", workers, "Worker threads (results do not depend on this)");
    add_out(ramsey);
    add_format(ramsey, o.format);

    auto* sweep = app.add_subcommand("sweep", "Parameter sweep emitting CSV rows");
    add_species(sweep, false);
    sweep->add_option("--scenario", o.scenario, "Scenario file (budget sweeps)");
    sweep->add_option("--plan", o.plan, "Plan file (Monte Carlo sweeps)");
    sweep->add_option("--axis", axes, "name=start:stop:count[:log] or name=v1,v2,...")->required();
    sweep->add_option("--free-time-fraction", free_time_fraction, "Ramsey time / tau for obs_time x coherence_tau grids");
    sweep->add_option("--seed", o.seed, "Override the plan seed");
    sweep->add_option("--workers", workers, "Worker threads");
    add_out(sweep);
    o.format = Format::csv;
    add_format(sweep, o.format);

    auto* validate = app.add_subcommand("validate", "Check species, scenario and plan files");
    add_species(validate, false);
    validate->add_option("--scenario", o.scenario, "Scenario file");
    validate->add_option("--plan", o.plan, "Plan file");
    validate->add_option("files", files, "Files of any kind (detected from their 'kind' field)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << APV_VERSION << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (app.get_subcommands().empty()) err << app.help();
        return kExitValidation;
    }
    if (!sweep->parsed() && o.format == Format::csv && !budget->count("--format") && !lightshift->count("--format") &&
        !ramsey->count("--format"))
        o.format = Format::table;

    try {
        if (budget->parsed()) return cmd_budget(o, out);
        if (lightshift->parsed()) return cmd_lightshift(o, e0_prime, detuning, pnc_scale, out);
        if (ramsey->parsed()) return cmd_ramsey(o, workers, out);
        if (sweep->parsed()) return cmd_sweep(o, axes, free_time_fraction, workers, out);
        if (validate->parsed()) return cmd_validate(o, files, out);
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConfigurationError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const SpeciesConfigurationError& e) {
        err << "species error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const EstimatorError& e) {
        err << "estimator error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitValidation;
}

}  // namespace apv::cli
