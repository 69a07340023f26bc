#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>

#include "disc/hardy.hpp"
#include "disc/ifs.hpp"
#include "disc/measure.hpp"
#include "disc/rng.hpp"
#include "disc/sim.hpp"

using namespace disc;

namespace {

Cx rand_pt(uint64_t seed, uint64_t ctr, double rmax = 0.95) {
    const double r = rmax * std::sqrt(uniform01(seed, 2 * ctr));
    return std::polar(r, 2.0 * M_PI * uniform01(seed, 2 * ctr + 1));
}

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report(int idx, const char* name, bool pass, double elapsed, double budget) {
    std::printf("%s criterion %2d: %s (%.2fs, budget %.0fs)\n", pass ? "PASS" : "FAIL", idx, name,
                elapsed, budget);
    std::fflush(stdout);
    CHECK(pass);
    CHECK(elapsed < budget);
}

const char* kMixedScenario = R"(
[maps]
sq = power(2)
damp = affine(0.5+0i, 0)
[schedule]
generator = cycle sq sq damp
[experiment]
samples = 10000
steps = 60
seed = 11
)";

const char* kInnerScenario = R"(
[maps]
sq = power(2)
[schedule]
generator = cycle sq
[experiment]
samples = 10000
steps = 60
seed = 11
)";

}  // namespace

TEST_CASE("1: norm estimator concordance") {
    Timer timer;
    bool ok = true;
    for (int t = 0; t < 50 && ok; ++t) {
        Polynomial p;
        const int deg = 1 + static_cast<int>(uniform01(301, 64 * t) * 20.0);
        for (int j = 0; j <= deg; ++j) p.coeffs.push_back(rand_pt(301, 64 * t + j + 1, 1.0));
        const HardyFunction f(p);
        const double a = p.coefficient_norm();
        const double b = hardy_norm_boundary(f, 4096);
        const double c = hardy_norm_littlewood_paley(f, {128, 1024});
        if (std::abs(a - b) > 1e-6 || std::abs(a - c) > 1e-6 || std::abs(b - c) > 1e-6) ok = false;
    }
    report(1, "coefficient, boundary and area norms agree within 1e-6", ok, timer.seconds(), 10);
}

TEST_CASE("2: exact counting function for monomials") {
    Timer timer;
    bool ok = true;
    for (int d : {2, 3, 5}) {
        for (int t = 0; t < 100; ++t) {
            const Cx w = rand_pt(307, 100 * d + t, 0.95);
            const NevanlinnaEstimate est = nevanlinna(make_power(d), w);
            if (std::abs(est.value - std::log(1.0 / std::abs(w))) > 1e-10) ok = false;
        }
    }
    report(2, "N(w) = log(1/|w|) for z^d within 1e-10", ok, timer.seconds(), 1);
}

TEST_CASE("3: counting function upper bounds") {
    Timer timer;
    int violations = 0;
    for (int k = 0; k < 20; ++k) {
        const int deg = 1 + static_cast<int>(uniform01(311, 32 * k) * 5.0);
        std::vector<std::pair<Cx, int>> zeros;
        for (int j = 0; j < deg; ++j) zeros.emplace_back(rand_pt(311, 32 * k + j + 1, 0.8), 1);
        const MapPtr f = make_blaschke(2.0 * M_PI * uniform01(311, 32 * k + 31), std::move(zeros));
        for (int t = 0; t < 200; ++t) {
            const Cx w = rand_pt(313, 200 * k + t, 0.9);
            const NevanlinnaEstimate est = nevanlinna(f, w);
            if (est.near_singular) continue;
            if (est.value > est.bound_littlewood + 1e-9) ++violations;
            if (est.value > est.bound_fatou + 1e-7) ++violations;
        }
    }
    report(3, "Littlewood and Fatou bounds hold with zero violations", violations == 0,
           timer.seconds(), 60);
}

TEST_CASE("4: change of variables identity") {
    Timer timer;
    bool ok = true;
    std::vector<MapPtr> fs = {
        make_power(1),
        make_power(2),
        make_power(3),
        make_affine({0.5, 0}, {0.2, 0}),
        make_compose(make_affine({0.5, 0}, {0, 0}), make_power(2)),
        make_blaschke(0.3, {{{0.4, 0.1}, 1}, {{-0.2, 0.3}, 1}}),
        make_automorphism(0.7, {0.3, -0.2}),
        make_compose(make_power(2), make_automorphism(0.2, {0.25, 0.1})),
        make_blaschke(0.0, {{{0.5, 0.0}, 2}}),
        make_affine({0.3, 0.2}, {0.1, -0.2}),
    };
    for (size_t i = 0; i < fs.size(); ++i) {
        Polynomial g;
        const int deg = 2 + static_cast<int>(i) % 5;
        for (int j = 0; j <= deg; ++j) g.coeffs.push_back(rand_pt(317, 16 * i + j, 0.9));
        const ChangeOfVariables cv = change_of_variables_check(*fs[i], HardyFunction(g));
        if (std::abs(cv.lhs - cv.rhs) >= 1e-4) ok = false;
    }
    report(4, "|lhs - rhs| < 1e-4 on 10 (f, g) pairs", ok, timer.seconds(), 60);
}

TEST_CASE("5: invariant boundary measure") {
    Timer timer;
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
        const Involution e = involution_swapping(rand_pt(331, t, 0.79));
        if (std::abs(e.w) >= 0.5) {
            ok = false;
            break;
        }
        const double a0 = 2.0 * M_PI * uniform01(331, 1000 + 2 * t);
        const double len = 0.1 + 4.0 * uniform01(331, 1000 + 2 * t + 1);
        const BoundaryArcSet E({{a0, a0 + len}});
        const InvarianceCheck inv = invariance_check(e, E);
        if (std::abs(inv.lhs - inv.rhs) >= 1e-8) ok = false;
        const PushforwardBound pb = pushforward_lower_bound(e, E);
        if (pb.actual < pb.bound) ok = false;
        if (pb.density_min < 1.0 / 3.0 - 1e-12 || pb.density_max > 4.0 + 1e-12) ok = false;
    }
    report(5, "invariance within 1e-8, density in [1/3,4], mass ratio >= 1/12", ok,
           timer.seconds(), 5);
}

TEST_CASE("6: perturbation pipeline on the mixed cycle") {
    Timer timer;
    bool ok = true;
    IFSSchedule s =
        IFSSchedule::cycle({make_power(2), make_power(2), make_affine({0.5, 0}, {0, 0})});
    s.mark_auto();
    const SparseSelection sel = select_sparse_blocks(s, 0.1, 12);
    const PerturbationTrace trace = build_perturbation(s, sel);
    for (const auto& blk : trace.blocks) {
        if (blk.fixed_origin_residual > 1e-10) ok = false;
    }
    int m_count = 0;
    for (int m = sel.indices[1]; m_count < 10; m += 3, ++m_count) {
        for (int t = 0; t < 100; ++t) {
            const Cx z = rand_pt(337, 128 * m + t, 0.95);
            const Cx direct = left_orbit(s, z, m).back();
            if (std::abs(factorized_F(s, trace, m, z) - direct) > 1e-10) ok = false;
        }
    }
    const double delta = claim1_delta(trace.c, trace.r0);
    const Claim1Report c1 = claim1_verify(*trace.blocks[0].phi_tilde,
                                          s.marked()[0].arcs, trace.r0, default_r1(), delta);
    if (!c1.pass || !c1.precondition_failures.empty()) ok = false;
    report(6, "origin fixing, factorized orbits and the discrepancy certificate", ok,
           timer.seconds(), 30);
}

TEST_CASE("7: composition operator norm brackets") {
    Timer timer;
    bool ok = true;
    for (Cx lambda : {Cx{0.3, 0.0}, Cx{0.5, 0.2}}) {
        const OpNormEstimate est = opnorm_H20(make_affine(lambda, {0, 0}), 200, 24, 13);
        if (std::abs(est.lower - std::abs(lambda)) > 1e-3) ok = false;
        if (est.upper < est.lower) ok = false;
    }
    const OpNormEstimate contraction =
        opnorm_H20(make_compose(make_affine({0.5, 0}, {0, 0}), make_power(2)), 200, 24, 13);
    if (contraction.upper >= 1.0) ok = false;
    if (contraction.upper < contraction.lower) ok = false;
    report(7, "lower bound recovers |lambda| within 1e-3; strict contraction has upper < 1", ok,
           timer.seconds(), 60);
}

TEST_CASE("8: boundary convergence at desk scale") {
    Timer timer;
    bool ok = true;
    const ExperimentReport mixed = run_boundary_experiment(parse_scenario(kMixedScenario));
    if (mixed.converged_fraction != 1.0) ok = false;

    const ExperimentReport inner = run_boundary_experiment(parse_scenario(kInnerScenario));
    if (inner.converged_fraction != 0.0) ok = false;
    bool exactness_seen = false;
    for (const auto& inv : inner.invariants) {
        if (inv.name == "inner-schedule-exactness") {
            exactness_seen = true;
            if (!inv.pass) ok = false;
        }
    }
    for (const auto& rec : inner.records) {
        if (!rec.on_boundary) ok = false;
    }
    if (!exactness_seen) ok = false;
    report(8, "mixed cycle fraction 1.0; inner schedule fraction 0.0 on the circle", ok,
           timer.seconds(), 30);
}

TEST_CASE("9: summability envelope over three blocks") {
    Timer timer;
    bool ok = true;
    IFSSchedule s = IFSSchedule::cycle(
        {make_power(2), make_power(2), make_affine({0.4, 0}, {0.1, 0.05})});
    s.mark_auto();
    const SparseSelection sel = select_sparse_blocks(s, 0.05, 3);
    const PerturbationTrace trace = build_perturbation(s, sel);
    std::vector<Cx> zetas;
    for (int j = 0; j < 128; ++j) zetas.push_back(std::polar(1.0, 2.0 * M_PI * j / 128.0));
    const SummabilityReport rep = summability_diagnostic(s, trace, zetas);
    if (!rep.envelope_ok || rep.nu >= 1.0) ok = false;
    if (rep.points.size() != 3) ok = false;
    for (size_t i = 0; i + 1 < rep.sample_medians.size(); ++i) {
        if (rep.sample_medians[i + 1] > rep.sample_medians[i]) ok = false;
    }
    report(9, "norms stay under the geometric envelope; sample medians decrease", ok,
           timer.seconds(), 120);
}

TEST_CASE("10: deterministic simulation output") {
    Timer timer;
    const Scenario sc = parse_scenario(kMixedScenario);
    const std::string first = emit_report(run_boundary_experiment(sc), ReportFormat::Csv);
    const std::string second = emit_report(run_boundary_experiment(sc), ReportFormat::Csv);
    report(10, "two runs with the same seed emit byte-identical CSV",
           !first.empty() && first == second, timer.seconds(), 10);
}
