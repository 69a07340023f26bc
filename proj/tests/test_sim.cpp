#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "disc/sim.hpp"

using namespace disc;

namespace {

const char* kDampedScenario = R"(# damped squaring cycle
[maps]
sq = power(2)
damp = affine(0.5+0i, 0)

[schedule]
generator = cycle sq sq damp
marked = auto
margin = 0.1

[experiment]
samples = 200
steps = 60
seed = 3
eps_interior = 0.5
eps_converged = 1e-6

[quadrature]
boundary_nodes = 1024
)";

const char* kInnerScenario = R"(
[maps]
sq = power(2)
[schedule]
generator = cycle sq
[experiment]
samples = 150
steps = 40
seed = 5
)";

std::string count_lines(const std::string& text) {
    return std::to_string(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("scenario parsing resolves maps and hashes the canonical form") {
    const Scenario sc = parse_scenario(kDampedScenario);
    REQUIRE(sc.maps.size() == 2);
    CHECK(sc.maps.count("sq") == 1);
    CHECK(sc.schedule.kind == ScheduleSpec::Kind::Cycle);
    CHECK(sc.schedule.map_names == std::vector<std::string>{"sq", "sq", "damp"});
    CHECK(sc.experiment.samples == 200);
    CHECK(sc.experiment.seed == 3);
    CHECK(sc.boundary_nodes == 1024);
    CHECK(sc.config_hash != 0);
}

TEST_CASE("canonical re-emission round-trips to the same hash") {
    const Scenario sc = parse_scenario(kDampedScenario);
    const Scenario again = parse_scenario(sc.canonical_text);
    CHECK(again.canonical_text == sc.canonical_text);
    CHECK(again.config_hash == sc.config_hash);
    for (const auto& [name, f] : sc.maps) {
        CHECK(structurally_equal(*f, *again.maps.at(name)));
    }
    // a different seed changes the hash
    Scenario other = parse_scenario(kInnerScenario);
    CHECK(other.config_hash != sc.config_hash);
}

TEST_CASE("scenario errors carry line numbers") {
    // invalid map expression on line 3 (unit-modulus blaschke zero)
    const char* bad_map = "[maps]\nok = power(2)\nbad = blaschke(0; 1.5+0i)\n";
    try {
        parse_scenario(bad_map);
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(std::string(e.what()).find("bad") != std::string::npos);
    }
    // unknown keys and sections are rejected, also with positions
    CHECK_THROWS_WITH_AS(parse_scenario("[experiment]\nsampels = 10\n"),
                         doctest::Contains("unknown experiment field"), ScenarioError);
    CHECK_THROWS_WITH_AS(parse_scenario("[frobs]\nx = 1\n"),
                         doctest::Contains("unknown section"), ScenarioError);
    CHECK_THROWS_WITH_AS(parse_scenario("x = 1\n"),
                         doctest::Contains("before any section"), ScenarioError);
    // semantic validation after parsing
    CHECK_THROWS_WITH_AS(
        parse_scenario("[maps]\nsq = power(2)\n[schedule]\ngenerator = cycle missing\n"),
        doctest::Contains("unknown map"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        parse_scenario("[experiment]\neps_interior = 0.1\neps_converged = 0.2\n"),
        doctest::Contains("eps_converged < eps_interior"), ScenarioError);
}

TEST_CASE("explicit marking builds the requested subsequence") {
    const char* text =
        "[maps]\nsq = power(2)\ndamp = affine(0.5+0i, 0)\n"
        "[schedule]\ngenerator = cycle sq sq damp\nmarked = 3 6\nmarked_arc = full\n";
    const Scenario sc = parse_scenario(text);
    const IFSSchedule s = build_schedule(sc);
    REQUIRE(s.marked().size() == 2);
    CHECK(s.marked()[0].index == 3);
    CHECK(s.marked()[1].index == 6);
    CHECK(s.marked()[0].delta == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(s.c() == doctest::Approx(0.9).epsilon(1e-12));
    // marking an inner step is rejected
    const char* bad =
        "[maps]\nsq = power(2)\ndamp = affine(0.5+0i, 0)\n"
        "[schedule]\ngenerator = cycle sq sq damp\nmarked = 1\n";
    CHECK_THROWS_WITH_AS(build_schedule(parse_scenario(bad)),
                         doctest::Contains("not bounded away"), ScenarioError);
}

TEST_CASE("boundary experiment on the damped cycle converges everywhere") {
    const ExperimentReport rep = run_boundary_experiment(parse_scenario(kDampedScenario));
    REQUIRE(rep.records.size() == 200);
    CHECK(rep.converged_fraction == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rep.z0) < 1e-9);
    CHECK(rep.median_final_distance < 1e-8);
    for (const auto& rec : rep.records) {
        CHECK(rec.first_entry_step > 0);
        CHECK(!rec.on_boundary);
    }
}

TEST_CASE("boundary experiment on an inner schedule stays on the circle") {
    const ExperimentReport rep = run_boundary_experiment(parse_scenario(kInnerScenario));
    CHECK(rep.converged_fraction == 0.0);
    for (const auto& rec : rep.records) {
        CHECK(rec.on_boundary);
        CHECK(rec.first_entry_step == -1);
    }
    bool found = false;
    for (const auto& inv : rep.invariants) {
        if (inv.name == "inner-schedule-exactness") {
            found = true;
            CHECK(inv.pass);
        }
    }
    CHECK(found);
}

TEST_CASE("experiment refuses a schedule without an interior limit") {
    const char* rotation = "[maps]\nrot = auto(1.0, 0)\n[schedule]\ngenerator = cycle rot\n";
    CHECK_THROWS_AS(run_boundary_experiment(parse_scenario(rotation)), ScenarioError);
}

TEST_CASE("reports are deterministic per seed and format") {
    const Scenario sc = parse_scenario(kDampedScenario);
    const std::string a = emit_report(run_boundary_experiment(sc), ReportFormat::Csv);
    const std::string b = emit_report(run_boundary_experiment(sc), ReportFormat::Csv);
    CHECK(a == b);
    CHECK(a.find("# summary") != std::string::npos);
    CHECK(count_lines(a) == std::to_string(200 + 2));  // header + records + summary

    const std::string j = emit_report(run_boundary_experiment(sc), ReportFormat::JsonLines);
    CHECK(count_lines(j) == std::to_string(200 + 1));  // records + summary object
    CHECK(j.find("\"converged_fraction\"") != std::string::npos);

    const std::string t = emit_report(run_boundary_experiment(sc), ReportFormat::TableText);
    CHECK(t.find("converged fraction") != std::string::npos);
}

TEST_CASE("format names parse and unknown ones do not") {
    CHECK(parse_format("csv") == ReportFormat::Csv);
    CHECK(parse_format("json-lines") == ReportFormat::JsonLines);
    CHECK(parse_format("table-text") == ReportFormat::TableText);
    CHECK(!parse_format("yaml").has_value());
}

TEST_CASE("empty report emits a bare header and summary") {
    ExperimentReport empty;
    const std::string csv = emit_report(empty, ReportFormat::Csv);
    CHECK(csv.find("sample_index,") == 0);
    CHECK(count_lines(csv) == "2");
}

TEST_CASE("endgame recentered orbits shrink in norm along the blocks") {
    IFSSchedule s = IFSSchedule::cycle(
        {make_power(2), make_power(2), make_affine({0.4, 0}, {0.1, 0.05})});
    s.mark_auto();
    const SparseSelection sel = select_sparse_blocks(s, 0.05, 3);
    const PerturbationTrace trace = build_perturbation(s, sel);

    std::vector<Cx> zetas;
    for (int j = 0; j < 64; ++j) zetas.push_back(std::polar(1.0, 2.0 * M_PI * j / 64.0));
    const SummabilityReport rep = summability_diagnostic(s, trace, zetas);

    REQUIRE(rep.points.size() == 3);
    CHECK(rep.nu < 1.0);
    CHECK(rep.cf_bound >= 1.0);
    CHECK(rep.envelope_ok);
    for (size_t i = 0; i < rep.points.size(); ++i) {
        CHECK(rep.points[i].k == static_cast<int>(i + 1));
        CHECK(rep.points[i].norm <= rep.points[i].envelope + 1e-9);
    }
    // medians of |g_m o F_m| over the boundary samples decrease with m
    for (size_t i = 0; i + 1 < rep.sample_medians.size(); ++i) {
        CHECK(rep.sample_medians[i + 1] <= rep.sample_medians[i] + 1e-12);
    }
}

TEST_CASE("invariant suites pass on the damped scenario") {
    Scenario sc = parse_scenario(kDampedScenario);
    const auto results = run_invariant_suites(sc);
    CHECK(results.size() >= 10);  // all six suites by default
    for (const auto& r : results) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
    // restricting the suites restricts the output
    sc.invariants = {"geometry"};
    const auto geo = run_invariant_suites(sc);
    for (const auto& r : geo) CHECK(r.name.rfind("geometry.", 0) == 0);
}
