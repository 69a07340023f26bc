#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "disc/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariantFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitInconclusive = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw disc::ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw disc::ScenarioError("cannot open output file '" + out_path + "'");
    out << text;
}

int cmd_verify(const std::string& scenario_path, const std::string& out_path) {
    const disc::Scenario sc = disc::parse_scenario(read_file(scenario_path));
    const auto results = disc::run_invariant_suites(sc);
    std::ostringstream out;
    bool all_pass = true;
    for (const auto& r : results) {
        out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        all_pass = all_pass && r.pass;
    }
    out << (all_pass ? "all invariants pass" : "invariant failures present") << "\n";
    write_output(out.str(), out_path);
    return all_pass ? kExitOk : kExitInvariantFailure;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path, int samples,
                 int steps, long seed, const std::string& format_name) {
    disc::Scenario sc = disc::parse_scenario(read_file(scenario_path));
    if (samples > 0) sc.experiment.samples = samples;
    if (steps > 0) sc.experiment.steps = steps;
    if (seed >= 0) sc.experiment.seed = static_cast<uint64_t>(seed);
    const auto format = disc::parse_format(format_name);
    if (!format) {
        std::cerr << "unknown format '" << format_name << "'\n";
        return kExitConfigError;
    }
    const disc::ExperimentReport report = disc::run_boundary_experiment(sc);
    write_output(disc::emit_report(report, *format), out_path);
    for (const auto& inv : report.invariants) {
        if (!inv.pass) return kExitInvariantFailure;
    }
    return kExitOk;
}

int cmd_norms(const std::string& scenario_path, const std::string& out_path) {
    const disc::Scenario sc = disc::parse_scenario(read_file(scenario_path));
    std::ostringstream out;
    for (const auto& [name, f] : sc.maps) {
        const disc::HardyFunction hf(f);
        out << name << ":\n";
        out << "  boundary norm:        " << disc::hardy_norm_boundary(hf, 4096) << "\n";
        out << "  littlewood-paley:     "
            << disc::hardy_norm_littlewood_paley(hf, sc.quadrature) << "\n";
        if (std::abs(disc::eval(f, disc::Cx{0.0, 0.0})) < 1e-10) {
            const auto est = disc::opnorm_H20(f, 100, 24, sc.experiment.seed);
            out << "  opnorm H2_0 bracket:  [" << est.lower << ", " << est.upper << "]"
                << (est.grid_edge ? "  (grid edge; refine)" : "") << "\n";
        } else {
            out << "  opnorm H2_0 bracket:  n/a (map does not fix 0)\n";
        }
    }
    write_output(out.str(), out_path);
    return kExitOk;
}

int cmd_perturb(const std::string& scenario_path, const std::string& out_path) {
    const disc::Scenario sc = disc::parse_scenario(read_file(scenario_path));
    const disc::IFSSchedule s = disc::build_schedule(sc);
    const disc::SparseSelection sel = disc::select_sparse_blocks(s, sc.schedule.margin);
    const disc::PerturbationTrace trace = disc::build_perturbation(s, sel);

    nlohmann::json j;
    j["r0"] = trace.r0;
    j["c"] = trace.c;
    j["selected_indices"] = sel.indices;
    for (const auto& cert : sel.certificates) {
        j["certificates"].push_back({{"start", cert.start},
                                     {"end", cert.end},
                                     {"sup_half_disc", cert.sup_half_disc},
                                     {"sup_on_arc", cert.sup_on_arc},
                                     {"grid_points", cert.grid_points},
                                     {"margin", cert.margin}});
    }
    for (const auto& blk : trace.blocks) {
        j["blocks"].push_back(
            {{"k", blk.k},
             {"start", blk.start},
             {"end", blk.end},
             {"phi", disc::format_map(blk.phi)},
             {"phi_tilde", disc::format_map(blk.phi_tilde)},
             {"swap_point", {blk.e.b.real(), blk.e.b.imag()}},
             {"fixed_point", {blk.e.w.real(), blk.e.w.imag()}},
             {"half_disc_contraction", blk.half_disc_contraction},
             {"boundary_smallness", blk.boundary_smallness},
             {"fixed_origin_residual", blk.fixed_origin_residual}});
    }
    write_output(j.dump(2) + "\n", out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"disc-dynamics simulator: boundary convergence of left iterated function systems"};
    app.require_subcommand(1);

    std::string scenario_path, out_path;
    int samples = 0, steps = 0;
    long seed = -1;
    std::string format_name = "csv";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", scenario_path, "scenario file")->required();
        cmd->add_option("--out", out_path, "output path (default stdout)");
    };

    auto* verify = app.add_subcommand("verify", "run the invariant suites for a scenario");
    add_common(verify);
    auto* simulate = app.add_subcommand("simulate", "boundary Monte Carlo experiment");
    add_common(simulate);
    simulate->add_option("--samples", samples, "override sample count");
    simulate->add_option("--steps", steps, "override step count");
    simulate->add_option("--seed", seed, "override seed");
    simulate->add_option("--format", format_name, "table-text | csv | json-lines");
    auto* norms = app.add_subcommand("norms", "Hardy and operator norm report for declared maps");
    add_common(norms);
    auto* perturb = app.add_subcommand("perturb", "emit the perturbation trace with certificates");
    add_common(perturb);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(scenario_path, out_path);
        if (simulate->parsed()) {
            return cmd_simulate(scenario_path, out_path, samples, steps, seed, format_name);
        }
        if (norms->parsed()) return cmd_norms(scenario_path, out_path);
        if (perturb->parsed()) return cmd_perturb(scenario_path, out_path);
    } catch (const disc::ScenarioError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const disc::ScheduleError& e) {
        std::cerr << "schedule error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const disc::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    }
    return kExitConfigError;
}
