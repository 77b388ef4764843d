#include "apv/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "apv/angular.hpp"
#include "apv/errors.hpp"
#include "apv/light_shift.hpp"

namespace apv {

namespace {

/// Strict view of a YAML mapping: every key must be consumed, and failures
/// carry the source line of the offending node.
class MappingReader {
public:
    MappingReader(YAML::Node node, std::string source, std::string prefix = {})
        : node_(std::move(node)), source_(std::move(source)), prefix_(std::move(prefix)) {
        if (!node_.IsMap()) fail_at(node_, prefix_.empty() ? "document" : prefix_, "expected a mapping");
    }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        const YAML::Node child = node_[key];
        fail_at(child ? child : node_, qualified(key), message);
    }

    [[noreturn]] void fail_at(const YAML::Node& at, const std::string& field, const std::string& message) const {
        const auto mark = at.Mark();
        std::optional<int> line;
        if (mark.line >= 0) line = mark.line + 1;
        throw ValidationError(field, message, line, source_);
    }

    bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

    YAML::Node take(const std::string& key) {
        used_.insert(key);
        const YAML::Node child = node_[key];
        if (!child) fail_at(node_, qualified(key), "missing required field");
        return child;
    }

    std::optional<YAML::Node> take_optional(const std::string& key) {
        used_.insert(key);
        const YAML::Node child = node_[key];
        if (!child || child.IsNull()) return std::nullopt;
        return child;
    }

    double number(const std::string& key) { return as_number(take(key), key); }

    std::optional<double> optional_number(const std::string& key) {
        if (auto n = take_optional(key)) return as_number(*n, key);
        return std::nullopt;
    }

    std::string string(const std::string& key) { return as_string(take(key), key); }

    std::optional<std::string> optional_string(const std::string& key) {
        if (auto n = take_optional(key)) return as_string(*n, key);
        return std::nullopt;
    }

    bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt) {
        auto n = take_optional(key);
        if (!n) {
            if (fallback) return *fallback;
            fail_at(node_, qualified(key), "missing required field");
        }
        try {
            return n->as<bool>();
        } catch (const YAML::Exception&) {
            fail_at(*n, qualified(key), "expected true or false");
        }
    }

    std::uint64_t unsigned_integer(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) {
        auto n = take_optional(key);
        if (!n) {
            if (fallback) return *fallback;
            fail_at(node_, qualified(key), "missing required field");
        }
        const std::string text = n->IsScalar() ? n->Scalar() : std::string{};
        if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
            fail_at(*n, qualified(key), fmt::format("'{}' is not a non-negative integer", text));
        try {
            return n->as<std::uint64_t>();
        } catch (const YAML::Exception&) {
            fail_at(*n, qualified(key), fmt::format("'{}' is out of range", text));
        }
    }

    MappingReader child(const std::string& key) {
        const YAML::Node n = take(key);
        return MappingReader(n, source_, qualified(key));
    }

    /// Runs `fn` and rethrows validation failures with this key and its line.
    template <typename Fn>
    auto at_key(const std::string& key, Fn&& fn) -> decltype(fn()) {
        try {
            return fn();
        } catch (const ValidationError& e) {
            if (!e.source().empty()) throw;
            fail(key, e.detail());
        }
    }

    void finish() const {
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!used_.count(key)) fail_at(kv.first, qualified(key), "unknown field");
        }
    }

    const std::string& source() const { return source_; }
    const YAML::Node& node() const { return node_; }
    std::string qualified(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

private:
    double as_number(const YAML::Node& n, const std::string& key) const {
        if (!n.IsScalar()) fail_at(n, qualified(key), "expected a number");
        try {
            const double v = n.as<double>();
            if (!std::isfinite(v)) fail_at(n, qualified(key), "must be finite");
            return v;
        } catch (const YAML::Exception&) {
            fail_at(n, qualified(key), fmt::format("'{}' is not a number", n.Scalar()));
        }
    }

    std::string as_string(const YAML::Node& n, const std::string& key) const {
        if (!n.IsScalar()) fail_at(n, qualified(key), "expected a string");
        return n.Scalar();
    }

    YAML::Node node_;
    std::string source_;
    std::string prefix_;
    std::set<std::string> used_;
};

YAML::Node parse_yaml(const std::string& text, const std::string& source) {
    try {
        return YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ValidationError("yaml", e.msg, e.mark.line >= 0 ? std::optional<int>(e.mark.line + 1) : std::nullopt,
                              source);
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("file", "cannot open file", std::nullopt, path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void check_header(MappingReader& r, DocumentKind expected) {
    const auto version = r.unsigned_integer("schema_version");
    if (version != kSchemaVersion)
        r.fail("schema_version", fmt::format("unsupported schema version {} (expected {})", version, kSchemaVersion));
    const auto kind = r.string("kind");
    if (kind != to_string(expected))
        r.fail("kind", fmt::format("document kind is '{}', expected '{}'", kind, to_string(expected)));
}

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& ref) {
    const std::filesystem::path p(ref);
    return p.is_absolute() ? p : base_dir / p;
}

std::vector<QuenchRate> read_quench_rates(MappingReader& parent, const std::string& key) {
    std::vector<QuenchRate> out;
    const YAML::Node list = parent.take(key);
    if (!list.IsSequence()) parent.fail(key, "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
        MappingReader item(list[i], parent.source(), fmt::format("{}[{}]", parent.qualified(key), i));
        QuenchRate q;
        q.level.manifold = item.at_key("manifold", [&] { return parse_manifold(item.string("manifold")); });
        q.level.m = item.at_key("m", [&] { return HalfInt::parse(item.string("m")); });
        item.at_key("m", [&] { q.level.validate(); return 0; });
        q.rate = item.number("rate_per_s");
        if (q.rate < 0.0) item.fail("rate_per_s", "must be >= 0");
        item.finish();
        out.push_back(q);
    }
    return out;
}

PhysicalConstants read_constants(MappingReader& parent) {
    PhysicalConstants c;
    if (!parent.has("constants")) {
        parent.take_optional("constants");
        return c;
    }
    MappingReader r = parent.child("constants");
    if (auto v = r.optional_number("hbar_j_s")) c.hbar = *v;
    if (auto v = r.optional_number("elem_charge_c")) c.elem_charge = *v;
    if (auto v = r.optional_number("bohr_radius_m")) c.bohr_radius = *v;
    if (auto v = r.optional_number("bohr_magneton_j_per_t")) c.bohr_magneton = *v;
    r.finish();
    try {
        c.validate();
    } catch (const ValidationError& e) {
        r.fail(e.field(), e.detail());
    }
    return c;
}

/// Maps an invariant failure raised by validate() onto the document key that
/// holds the value.
[[noreturn]] void rethrow_on_key(MappingReader& r, const ValidationError& e,
                                 std::initializer_list<std::pair<std::string_view, std::string_view>> keys) {
    for (const auto& [field, key] : keys)
        if (e.field() == field) r.fail(std::string(key), e.detail());
    throw ValidationError(e.field(), e.detail(), std::nullopt, r.source());
}

}  // namespace

std::string_view to_string(DocumentKind kind) {
    switch (kind) {
        case DocumentKind::species: return "species";
        case DocumentKind::scenario: return "scenario";
        case DocumentKind::plan: return "plan";
    }
    return "?";
}

void Scenario::validate() const {
    BudgetInputs probe{e0_prime, efficiency_f, n_ions, obs_time, 1.0, lamb_dicke_extent};
    probe.validate();
    if (!(e0_double_prime > 0.0)) throw ValidationError("e0_double_prime", "must be strictly positive");
    if (!(quad_scale > 0.0)) throw ValidationError("quad_scale", "must be strictly positive");
    if (qw_over_n && !(*qw_over_n >= 0.0)) throw ValidationError("qw_over_n", "must be >= 0");
    if (lamb_dicke_reference_mass && !(*lamb_dicke_reference_mass > 0.0))
        throw ValidationError("lamb_dicke_reference_mass", "must be strictly positive");
    constants.validate();
}

BudgetInputs budget_inputs(const Scenario& scenario, const IonSpecies& species) {
    BudgetInputs in;
    in.e0_prime = scenario.e0_prime;
    in.efficiency_f = scenario.efficiency_f;
    in.n_ions = scenario.n_ions;
    in.obs_time_t = scenario.obs_time;
    in.coherence_tau = species.coherence_time;
    in.lamb_dicke_extent = scenario.lamb_dicke_extent;
    if (scenario.lamb_dicke_reference_mass)
        in.lamb_dicke_extent =
            lamb_dicke_mass_scaling(scenario.lamb_dicke_extent, *scenario.lamb_dicke_reference_mass, species.mass_u);
    return in;
}

IonSpecies apply_scenario(IonSpecies species, const Scenario& scenario) {
    if (scenario.qw_over_n) species.qw_over_n = *scenario.qw_over_n;
    return species;
}

IonSpecies parse_species(const std::string& text, const std::string& source, const std::filesystem::path& base_dir) {
    MappingReader r(parse_yaml(text, source), source);
    check_header(r, DocumentKind::species);

    IonSpecies s;
    s.name = r.string("name");
    s.mass_u = r.number("mass_u");
    s.nuclear_spin = r.at_key("nuclear_spin", [&] { return HalfInt::parse(r.string("nuclear_spin")); });
    {
        const YAML::Node hl = r.take("half_life_years");
        if (hl.IsScalar() && hl.Scalar() == "stable")
            s.half_life_years.reset();
        else
            s.half_life_years = r.at_key("half_life_years", [&] {
                try {
                    return hl.as<double>();
                } catch (const YAML::Exception&) {
                    throw ValidationError("half_life_years", "expected a number of years or 'stable'");
                }
            });
    }
    s.e1_pnc_coeff = r.number("e1_pnc_coeff");
    if (auto unit = r.optional_string("e1_pnc_unit"))
        s.e1_pnc_unit = r.at_key("e1_pnc_unit", [&] { return parse_amplitude_unit(*unit); });
    s.qw_over_n = r.number("qw_over_n");
    s.coherence_time = r.number("coherence_time_s");
    s.apv_manifold = r.at_key("apv_manifold", [&] { return parse_manifold(r.string("apv_manifold")); });
    s.pnc_shift_target_hz = r.optional_number("pnc_shift_hz");
    if (s.pnc_shift_target_hz) s.pnc_shift_reference_e0 = r.number("pnc_shift_reference_e0_v_per_m");
    else if (r.has("pnc_shift_reference_e0_v_per_m"))
        r.fail("pnc_shift_reference_e0_v_per_m", "only meaningful together with pnc_shift_hz");

    {
        const YAML::Node list = r.take("transitions");
        if (!list.IsSequence() || list.size() == 0) r.fail("transitions", "expected a non-empty list");
        for (std::size_t i = 0; i < list.size(); ++i) {
            MappingReader item(list[i], source, fmt::format("transitions[{}]", i));
            Transition t;
            t.lower = item.at_key("lower", [&] { return parse_manifold(item.string("lower")); });
            t.upper = item.at_key("upper", [&] { return parse_manifold(item.string("upper")); });
            t.wavelength = item.number("wavelength_nm") * 1e-9;
            t.character = item.at_key("character", [&] { return parse_transition_character(item.string("character")); });
            item.finish();
            try {
                t.validate();
            } catch (const ValidationError& e) {
                rethrow_on_key(item, e, {{"wavelength", "wavelength_nm"}, {"character", "character"}});
            }
            s.transitions.push_back(t);
        }
    }
    if (r.has("quench_rates")) s.quench_rates = read_quench_rates(r, "quench_rates");
    else r.take_optional("quench_rates");

    if (r.has("geometry")) {
        MappingReader g = r.child("geometry");
        // Errors inside a table keep the table's own line; an unreadable table is reported here.
        auto table = [&](const char* key) {
            const auto path = resolve(base_dir, g.string(key));
            try {
                return read_geometry_table(path);
            } catch (const ValidationError& e) {
                if (e.line()) throw;
                g.fail(key, fmt::format("{} ({})", e.detail(), path.string()));
            }
        };
        s.geometry.pnc = table("pnc");
        s.geometry.quad = table("quad");
        g.finish();
    } else {
        r.take_optional("geometry");
        s.geometry = crossed_wave_geometry_pair(s.apv_manifold);
    }
    r.finish();

    try {
        s.validate();
    } catch (const ValidationError& e) {
        rethrow_on_key(r, e,
                       {{"name", "name"},
                        {"mass_u", "mass_u"},
                        {"nuclear_spin", "nuclear_spin"},
                        {"half_life_years", "half_life_years"},
                        {"e1_pnc_coeff", "e1_pnc_coeff"},
                        {"qw_over_n", "qw_over_n"},
                        {"coherence_time_s", "coherence_time_s"},
                        {"quench_rates", "quench_rates"},
                        {"apv_manifold", "apv_manifold"},
                        {"pnc_shift_hz", "pnc_shift_hz"},
                        {"pnc_shift_reference_e0", "pnc_shift_reference_e0_v_per_m"},
                        {"geometry.pnc", "geometry"},
                        {"geometry.quad", "geometry"}});
    }
    return s;
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
    MappingReader r(parse_yaml(text, source), source);
    check_header(r, DocumentKind::scenario);
    Scenario sc;
    sc.name = r.string("name");
    sc.e0_prime = r.number("e0_prime_v_per_m");
    sc.e0_double_prime = r.number("e0_double_prime_v_per_m");
    sc.efficiency_f = r.number("efficiency_f");
    sc.n_ions = r.number("n_ions");
    sc.obs_time = r.number("obs_time_s");
    sc.lamb_dicke_extent = r.number("lamb_dicke_extent_m");
    sc.quad_scale = r.number("quad_scale_rad_s_per_v_m2");
    sc.qw_over_n = r.optional_number("qw_over_n");
    sc.lamb_dicke_reference_mass = r.optional_number("lamb_dicke_reference_mass_u");
    sc.constants = read_constants(r);
    r.finish();
    try {
        sc.validate();
    } catch (const ValidationError& e) {
        rethrow_on_key(r, e,
                       {{"e0_prime", "e0_prime_v_per_m"},
                        {"e0_double_prime", "e0_double_prime_v_per_m"},
                        {"efficiency_f", "efficiency_f"},
                        {"n_ions", "n_ions"},
                        {"obs_time", "obs_time_s"},
                        {"lamb_dicke_extent", "lamb_dicke_extent_m"},
                        {"quad_scale", "quad_scale_rad_s_per_v_m2"},
                        {"qw_over_n", "qw_over_n"},
                        {"lamb_dicke_reference_mass", "lamb_dicke_reference_mass_u"}});
    }
    return sc;
}

PlanConfig parse_plan(const std::string& text, const std::string& source, const std::filesystem::path& base_dir) {
    MappingReader r(parse_yaml(text, source), source);
    check_header(r, DocumentKind::plan);

    PlanConfig cfg;
    cfg.species_path = resolve(base_dir, r.string("species"));
    cfg.scenario_path = resolve(base_dir, r.string("scenario"));
    IonSpecies species;
    try {
        species = load_species(cfg.species_path);
    } catch (const ValidationError& e) {
        if (e.field() == "file") r.fail("species", fmt::format("cannot open species file '{}'", cfg.species_path.string()));
        throw;
    }
    try {
        cfg.scenario = load_scenario(cfg.scenario_path);
    } catch (const ValidationError& e) {
        if (e.field() == "file")
            r.fail("scenario", fmt::format("cannot open scenario file '{}'", cfg.scenario_path.string()));
        throw;
    }
    species = apply_scenario(std::move(species), cfg.scenario);

    auto& plan = cfg.plan;
    plan.constants = cfg.scenario.constants;
    plan.zeeman_splitting = r.number("zeeman_splitting_rad_s");
    {
        MappingReader seq = r.child("sequence");
        plan.sequence.free_time = seq.number("free_time_s");
        plan.sequence.phase_reference = seq.optional_number("phase_reference_rad_s").value_or(plan.zeeman_splitting);
        plan.sequence.contrast = seq.number("contrast");
        seq.finish();
        try {
            plan.sequence.validate();
        } catch (const ValidationError& e) {
            rethrow_on_key(seq, e, {{"free_time", "free_time_s"}, {"contrast", "contrast"}});
        }
    }
    plan.on_reference_offset = r.optional_number("on_reference_offset_rad_s").value_or(0.0);
    plan.quad_detuning = r.optional_number("quad_detuning_rad_s");
    if (plan.quad_detuning && *plan.quad_detuning == 0.0) r.fail("quad_detuning_rad_s", "must be nonzero");
    plan.trials_per_block = r.unsigned_integer("trials_per_block");
    if (plan.trials_per_block < 1) r.fail("trials_per_block", "must be >= 1");
    plan.blocks = r.unsigned_integer("blocks");
    if (plan.blocks < 1) r.fail("blocks", "must be >= 1");
    plan.interleave = r.boolean("interleave", true);
    plan.seed = r.unsigned_integer("seed");
    plan.workers = static_cast<unsigned>(r.unsigned_integer("workers", 1));
    if (plan.workers < 1) r.fail("workers", "must be >= 1");
    const auto pnc_scale = r.optional_number("pnc_scale_rad_s_per_v_m");

    auto& noise = cfg.noise;
    noise.decoherence_tau = species.coherence_time;
    noise.quench_rates = species.quench_rates;
    if (r.has("noise")) {
        MappingReader n = r.child("noise");
        noise.b_field_sigma = n.optional_number("b_field_sigma_rad_s").value_or(0.0);
        noise.position_sigma = n.optional_number("position_sigma_m").value_or(0.0);
        if (n.has("decoherence_tau_s") && n.optional_string("decoherence_tau_s") == "none")
            noise.decoherence_tau = std::numeric_limits<double>::infinity();
        else if (auto tau = n.optional_number("decoherence_tau_s"))
            noise.decoherence_tau = *tau;
        if (n.has("quench_rates")) noise.quench_rates = read_quench_rates(n, "quench_rates");
        else n.take_optional("quench_rates");
        noise.common_mode_drift = n.optional_number("common_mode_drift_rad_s").value_or(0.0);
        noise.larmor_drift = n.optional_number("larmor_drift_rad_s2").value_or(0.0);
        noise.projection_noise = n.boolean("projection_noise", true);
        n.finish();
        try {
            noise.validate();
        } catch (const ValidationError& e) {
            rethrow_on_key(n, e,
                           {{"b_field_sigma", "b_field_sigma_rad_s"},
                            {"position_sigma", "position_sigma_m"},
                            {"decoherence_tau", "decoherence_tau_s"},
                            {"quench_rates", "quench_rates"}});
        }
    } else {
        r.take_optional("noise");
    }
    r.finish();

    try {
        plan.setup = pnc_scale ? uncalibrated_setup(species, cfg.scenario.e0_prime, cfg.scenario.e0_double_prime,
                                                    cfg.scenario.quad_scale, *pnc_scale)
                               : calibrated_setup(species, cfg.scenario.e0_prime, cfg.scenario.e0_double_prime,
                                                  cfg.scenario.quad_scale);
    } catch (const SpeciesConfigurationError& e) {
        r.fail("species", e.what());
    }
    plan.species = std::move(species);
    try {
        plan.validate();
    } catch (const ValidationError& e) {
        rethrow_on_key(r, e, {{"zeeman_splitting", "zeeman_splitting_rad_s"}});
    }
    return cfg;
}

DocumentKind detect_document_kind(const std::filesystem::path& path) {
    const std::string source = path.string();
    MappingReader r(parse_yaml(read_file(path), source), source);
    const auto kind = r.string("kind");
    if (kind == "species") return DocumentKind::species;
    if (kind == "scenario") return DocumentKind::scenario;
    if (kind == "plan") return DocumentKind::plan;
    r.fail("kind", fmt::format("unknown document kind '{}' (expected species, scenario or plan)", kind));
}

IonSpecies load_species(const std::filesystem::path& path) {
    return parse_species(read_file(path), path.string(), path.parent_path());
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path), path.string()); }

PlanConfig load_plan(const std::filesystem::path& path) {
    return parse_plan(read_file(path), path.string(), path.parent_path());
}

nlohmann::json snapshot(const IonSpecies& s) {
    nlohmann::json j;
    j["name"] = s.name;
    j["mass_u"] = s.mass_u;
    j["nuclear_spin"] = s.nuclear_spin.str();
    j["half_life_years"] = s.half_life_years ? nlohmann::json(*s.half_life_years) : nlohmann::json("stable");
    j["e1_pnc_coeff"] = s.e1_pnc_coeff;
    j["e1_pnc_unit"] = to_string(s.e1_pnc_unit);
    j["qw_over_n"] = s.qw_over_n;
    j["coherence_time_s"] = s.coherence_time;
    j["apv_manifold"] = to_string(s.apv_manifold);
    if (s.pnc_shift_target_hz) {
        j["pnc_shift_hz"] = *s.pnc_shift_target_hz;
        j["pnc_shift_reference_e0_v_per_m"] = s.pnc_shift_reference_e0;
    }
    auto& transitions = j["transitions"] = nlohmann::json::array();
    for (const auto& t : s.transitions)
        transitions.push_back({{"lower", to_string(t.lower)},
                               {"upper", to_string(t.upper)},
                               {"wavelength_nm", t.wavelength * 1e9},
                               {"character", to_string(t.character)}});
    auto& quench = j["quench_rates"] = nlohmann::json::array();
    for (const auto& q : s.quench_rates)
        quench.push_back({{"manifold", to_string(q.level.manifold)}, {"m", q.level.m.str()}, {"rate_per_s", q.rate}});
    auto table = [](const GeometryFactors& t) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < t.g.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < t.g.cols(); ++c) row.push_back({t.g(r, c).real(), t.g(r, c).imag()});
            rows.push_back(row);
        }
        return nlohmann::json{{"kind", to_string(t.kind)}, {"geometry", t.geometry}, {"g", rows}};
    };
    j["geometry"] = {{"pnc", table(s.geometry.pnc)}, {"quad", table(s.geometry.quad)}};
    return j;
}

nlohmann::json snapshot(const Scenario& sc) {
    nlohmann::json j{{"name", sc.name},
                     {"e0_prime_v_per_m", sc.e0_prime},
                     {"e0_double_prime_v_per_m", sc.e0_double_prime},
                     {"efficiency_f", sc.efficiency_f},
                     {"n_ions", sc.n_ions},
                     {"obs_time_s", sc.obs_time},
                     {"lamb_dicke_extent_m", sc.lamb_dicke_extent},
                     {"quad_scale_rad_s_per_v_m2", sc.quad_scale},
                     {"constants",
                      {{"hbar_j_s", sc.constants.hbar},
                       {"elem_charge_c", sc.constants.elem_charge},
                       {"bohr_radius_m", sc.constants.bohr_radius},
                       {"bohr_magneton_j_per_t", sc.constants.bohr_magneton}}}};
    if (sc.qw_over_n) j["qw_over_n"] = *sc.qw_over_n;
    if (sc.lamb_dicke_reference_mass) j["lamb_dicke_reference_mass_u"] = *sc.lamb_dicke_reference_mass;
    return j;
}

nlohmann::json snapshot(const PlanConfig& cfg) {
    const auto& p = cfg.plan;
    const auto& n = cfg.noise;
    nlohmann::json quench = nlohmann::json::array();
    for (const auto& q : n.quench_rates)
        quench.push_back({{"manifold", to_string(q.level.manifold)}, {"m", q.level.m.str()}, {"rate_per_s", q.rate}});
    nlohmann::json j{
        {"species", snapshot(p.species)},
        {"scenario", snapshot(cfg.scenario)},
        {"sequence",
         {{"free_time_s", p.sequence.free_time},
          {"phase_reference_rad_s", p.sequence.phase_reference},
          {"contrast", p.sequence.contrast}}},
        {"zeeman_splitting_rad_s", p.zeeman_splitting},
        {"on_reference_offset_rad_s", p.on_reference_offset},
        {"pnc_scale_rad_s_per_v_m", p.setup.pnc_scale},
        {"trials_per_block", p.trials_per_block},
        {"blocks", p.blocks},
        {"interleave", p.interleave},
        {"seed", p.seed},
        {"noise",
         {{"b_field_sigma_rad_s", n.b_field_sigma},
          {"position_sigma_m", n.position_sigma},
          {"decoherence_tau_s", std::isinf(n.decoherence_tau) ? nlohmann::json("none") : nlohmann::json(n.decoherence_tau)},
          {"quench_rates", quench},
          {"common_mode_drift_rad_s", n.common_mode_drift},
          {"larmor_drift_rad_s2", n.larmor_drift},
          {"projection_noise", n.projection_noise}}}};
    if (p.quad_detuning) j["quad_detuning_rad_s"] = *p.quad_detuning;
    return j;
}

}  // namespace apv
