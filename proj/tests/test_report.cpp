#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "apv/budget.hpp"
#include "apv/errors.hpp"
#include "apv/report.hpp"
#include "apv/sweep.hpp"
#include "support.hpp"

using namespace apv;

namespace {

std::vector<BudgetReport> reference_reports() {
    const auto sc = testing::reference_scenario();
    std::vector<BudgetReport> out;
    for (const auto& s0 : {testing::ba138(), testing::ra226(), testing::ra227()}) {
        const auto s = apply_scenario(s0, sc);
        out.push_back(full_budget(s, budget_inputs(sc, s), sc.constants));
    }
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

TEST_CASE("budget JSON round trip is exact, including non-finite values") {
    const auto reports = reference_reports();
    const std::string text = nlohmann::json(reports).dump(2);
    const auto back = parse_budget_json(text);
    REQUIRE(back.size() == reports.size());
    for (std::size_t i = 0; i < reports.size(); ++i) {
        CHECK(back[i].species == reports[i].species);
        CHECK(same(back[i].e1_pnc_si, reports[i].e1_pnc_si));
        CHECK(same(back[i].statistical_fraction, reports[i].statistical_fraction));
        CHECK(same(back[i].node_error_fraction, reports[i].node_error_fraction));
        CHECK(same(back[i].pnc_shift_hz, reports[i].pnc_shift_hz));
        CHECK(back[i].measurable() == reports[i].measurable());
    }
    CHECK(nlohmann::json(back).dump(2) == text);
    CHECK(text.find("\"inf\"") != std::string::npos);
}

TEST_CASE("malformed reports are rejected with a named field") {
    CHECK_THROWS_AS(parse_budget_json("{"), ValidationError);
    CHECK_THROWS_AS(parse_budget_json("{}"), ValidationError);
    try {
        parse_budget_json(R"([{"species": "x", "e1_pnc_si": "lots"}])");
        FAIL("expected an error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("lots") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_estimator_json(R"({"freq_on_rad_s": 1})"), ValidationError);
}

TEST_CASE("estimator JSON round trip") {
    auto cfg = load_plan(testing::data_path("plans/ra226_noisy.yaml"));
    cfg.plan.blocks = 5;
    const auto r = run_experiment(cfg.plan, cfg.noise);
    const std::string text = nlohmann::json(r).dump(2);
    const auto back = parse_estimator_json(text);
    CHECK(back.pnc_shift_estimate.value == r.pnc_shift_estimate.value);
    CHECK(back.pnc_shift_estimate.std_error == r.pnc_shift_estimate.std_error);
    CHECK(back.freq_off.value == r.freq_off.value);
    CHECK(back.trials_used == r.trials_used);
    CHECK(back.seed == r.seed);
    CHECK(back.effective_f == r.effective_f);
    CHECK(nlohmann::json(back).dump(2) == text);
}

TEST_CASE("budget CSV has one parseable row per species") {
    const auto reports = reference_reports();
    std::ostringstream out;
    write_budget_csv(out, reports);
    std::istringstream in(out.str());
    std::string header, line;
    std::getline(in, header);
    const auto cols = split(header);
    CHECK(cols.front() == "species");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const auto cells = split(line);
        REQUIRE(cells.size() == cols.size());
        CHECK(cells[0] == reports[rows].species);
        CHECK(same(std::stod(cells[1]), reports[rows].e1_pnc_si));
        ++rows;
    }
    CHECK(rows == reports.size());
}

TEST_CASE("display rounding uses two significant figures") {
    CHECK(format_display(0.07106) == "0.071");
    CHECK(format_display(37.04) == "37");
    CHECK(format_display(1.0539e-3) == "0.0011");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(std::nan("")) == "nan");
    std::ostringstream out;
    write_budget_table(out, reference_reports());
    CHECK(out.str().find("7.1%") != std::string::npos);
    CHECK(out.str().find("37%") != std::string::npos);
    CHECK(out.str().find("not meas.") != std::string::npos);
}

TEST_CASE("light-shift report") {
    const auto sc = testing::reference_scenario();
    const auto r = make_lightshift_report(testing::ra226(), sc, 1e5);
    CHECK(r.shift_plus_hz == doctest::Approx(5.3).epsilon(1e-9));
    CHECK(r.shift_minus_hz == doctest::Approx(-5.3).epsilon(1e-9));
    CHECK(r.larmor_change_hz == doctest::Approx(10.6).epsilon(1e-9));
    REQUIRE(r.quad_shift_plus_hz);
    CHECK(*r.quad_shift_plus_hz == doctest::Approx(*r.quad_shift_minus_hz).epsilon(1e-12));

    auto zero = sc;
    zero.e0_prime = 0.0;
    const auto z = make_lightshift_report(testing::ra226(), zero, std::nullopt, r.pnc_scale);
    CHECK(z.shift_plus_hz == 0.0);
    auto twice = sc;
    twice.e0_prime = 4e6;
    CHECK(make_lightshift_report(testing::ra226(), twice).shift_plus_hz == doctest::Approx(10.6).epsilon(1e-9));

    const auto j = nlohmann::json(r);
    CHECK(j.get<LightShiftReport>().larmor_change_hz == r.larmor_change_hz);
}

TEST_CASE("sweep axes") {
    const auto lin = SweepAxis::parse("lamb_dicke_extent=0:100e-9:5");
    CHECK(lin.parameter == "lamb_dicke_extent");
    REQUIRE(lin.values.size() == 5);
    CHECK(lin.values[1] == doctest::Approx(25e-9));
    const auto lg = SweepAxis::parse("obs_time=100:10000:3:log");
    CHECK(lg.values[1] == doctest::Approx(1000.0));
    const auto list = SweepAxis::parse("coherence_tau=0.1,0.2,0.4");
    CHECK(list.values.size() == 3);
    CHECK_THROWS_AS(SweepAxis::parse("obs_time=5"), ConfigurationError);
    CHECK_THROWS_AS(SweepAxis::parse("obs_time=1:2:1"), ConfigurationError);
    CHECK_THROWS_AS(SweepAxis::parse("obs_time"), ConfigurationError);
    CHECK_THROWS_AS(SweepAxis::parse("obs_time=a,b"), ConfigurationError);
}

TEST_CASE("lambda_de sweep traces the placement-error curves") {
    const auto sc = testing::reference_scenario();
    const std::vector<IonSpecies> species{testing::ra226()};
    const auto table = sweep_budget(species, sc, SweepAxis::parse("lamb_dicke_extent=10e-9:100e-9:10"));
    REQUIRE(table.rows.size() == 10);
    const auto col = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(table.columns.begin(), table.columns.end(), name) - table.columns.begin());
    };
    const auto x = col("value");
    CHECK(table.rows[0][col("parameter")] == "lamb_dicke_extent");
    const auto a = col("antinode_error_fraction");
    REQUIRE(x < table.columns.size());
    REQUIRE(a < table.columns.size());
    for (const auto& row : table.rows)
        CHECK(std::stod(row[a]) == doctest::Approx(antinode_amplitude_error(828e-9, std::stod(row[x]))).epsilon(1e-15));
    CHECK_THROWS_AS(sweep_budget(species, sc, SweepAxis::parse("mass=1,2")), ConfigurationError);
}
