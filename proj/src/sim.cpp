#include "disc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "disc/rng.hpp"

namespace disc {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

uint64_t fnv1a(const std::string& text) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct Line {
    int number;
    std::string key;
    std::string value;
};

[[noreturn]] void scenario_fail(int line, const std::string& msg) {
    throw ScenarioError("scenario line " + std::to_string(line) + ": " + msg);
}

double parse_double_or_fail(const std::string& v, int line, const std::string& key) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (...) {
        scenario_fail(line, "field '" + key + "': expected a number, got '" + v + "'");
    }
}

long parse_int_or_fail(const std::string& v, int line, const std::string& key) {
    const double x = parse_double_or_fail(v, line, key);
    const long n = std::lround(x);
    if (x != static_cast<double>(n)) scenario_fail(line, "field '" + key + "': expected an integer");
    return n;
}

std::vector<std::string> split_ws(const std::string& v) {
    std::vector<std::string> out;
    std::istringstream ss(v);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

// Arc pairs "a:b" in radians, or "a:bdeg" in degrees; "full" = whole circle.
BoundaryArcSet parse_arcs(const std::string& v, int line) {
    if (v == "full") return BoundaryArcSet::full_circle();
    std::vector<std::pair<double, double>> intervals;
    for (const std::string& tok : split_ws(v)) {
        const size_t colon = tok.find(':');
        if (colon == std::string::npos) scenario_fail(line, "arc must be 'start:end', got '" + tok + "'");
        std::string a = tok.substr(0, colon), b = tok.substr(colon + 1);
        double scale = 1.0;
        if (b.size() > 3 && b.substr(b.size() - 3) == "deg") {
            scale = M_PI / 180.0;
            b = b.substr(0, b.size() - 3);
        }
        intervals.emplace_back(scale * parse_double_or_fail(a, line, "arc"),
                               scale * parse_double_or_fail(b, line, "arc"));
    }
    return BoundaryArcSet(std::move(intervals));
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    std::vector<std::string> map_order;

    std::istringstream input(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(input, raw)) {
        ++lineno;
        std::string line = raw;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const size_t last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        if (line.front() == '[') {
            if (line.back() != ']') scenario_fail(lineno, "unterminated section header");
            section = line.substr(1, line.size() - 2);
            if (section != "maps" && section != "schedule" && section != "experiment" &&
                section != "quadrature" && section != "invariants") {
                scenario_fail(lineno, "unknown section '" + section + "'");
            }
            continue;
        }
        if (section.empty()) scenario_fail(lineno, "content before any section header");

        if (section == "invariants") {
            static const std::vector<std::string> known = {"geometry", "holomap", "measure",
                                                           "schedule", "perturbation", "hardy"};
            if (std::find(known.begin(), known.end(), line) == known.end()) {
                scenario_fail(lineno, "unknown invariant suite '" + line + "'");
            }
            sc.invariants.push_back(line);
            continue;
        }

        const size_t eq = line.find('=');
        if (eq == std::string::npos) scenario_fail(lineno, "expected 'key = value'");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key = key.substr(0, key.find_last_not_of(" \t") + 1);
        const size_t vfirst = value.find_first_not_of(" \t");
        value = vfirst == std::string::npos ? "" : value.substr(vfirst);
        if (value.empty()) scenario_fail(lineno, "field '" + key + "' has no value");

        if (section == "maps") {
            if (sc.maps.count(key)) scenario_fail(lineno, "duplicate map name '" + key + "'");
            try {
                sc.maps[key] = parse_map(value);
            } catch (const ParseError& e) {
                scenario_fail(lineno, std::string("map '") + key + "': " + e.what());
            }
            map_order.push_back(key);
        } else if (section == "schedule") {
            auto& sch = sc.schedule;
            if (key == "generator") {
                const auto toks = split_ws(value);
                if (toks.empty()) scenario_fail(lineno, "empty generator clause");
                if (toks[0] == "cycle" || toks[0] == "list") {
                    sch.kind = toks[0] == "cycle" ? ScheduleSpec::Kind::Cycle
                                                  : ScheduleSpec::Kind::List;
                    sch.map_names.assign(toks.begin() + 1, toks.end());
                    if (sch.map_names.empty()) scenario_fail(lineno, "generator needs map names");
                } else if (toks[0] == "random") {
                    if (toks.size() != 4) {
                        scenario_fail(lineno, "random generator needs: random <seed> <family> <horizon>");
                    }
                    sch.kind = ScheduleSpec::Kind::Random;
                    sch.seed = parse_int_or_fail(toks[1], lineno, key);
                    sch.family = toks[2];
                    sch.horizon = parse_int_or_fail(toks[3], lineno, key);
                } else {
                    scenario_fail(lineno, "unknown generator '" + toks[0] + "'");
                }
            } else if (key == "marked") {
                if (value == "auto") {
                    sch.marked_auto = true;
                } else {
                    sch.marked_auto = false;
                    for (const auto& tok : split_ws(value)) {
                        sch.marked_indices.push_back(
                            static_cast<int>(parse_int_or_fail(tok, lineno, key)));
                    }
                }
            } else if (key == "marked_arc") {
                sch.marked_arc = parse_arcs(value, lineno);
            } else if (key == "marked_delta") {
                sch.marked_delta = parse_double_or_fail(value, lineno, key);
                if (sch.marked_delta <= 0.0 || sch.marked_delta >= 1.0) {
                    scenario_fail(lineno, "schedule.marked_delta must lie in (0,1)");
                }
            } else if (key == "c") {
                sch.c = parse_double_or_fail(value, lineno, key);
                if (sch.c <= 0.0 || sch.c >= 1.0) scenario_fail(lineno, "schedule.c must lie in (0,1)");
            } else if (key == "margin") {
                sch.margin = parse_double_or_fail(value, lineno, key);
                if (sch.margin <= 0.0 || sch.margin >= 0.5) {
                    scenario_fail(lineno, "schedule.margin must lie in (0, 1/2)");
                }
            } else if (key == "horizon") {
                sch.horizon = parse_int_or_fail(value, lineno, key);
                if (sch.horizon < 1) scenario_fail(lineno, "schedule.horizon must be >= 1");
            } else {
                scenario_fail(lineno, "unknown schedule field '" + key + "'");
            }
        } else if (section == "experiment") {
            auto& ex = sc.experiment;
            if (key == "samples") {
                ex.samples = parse_int_or_fail(value, lineno, key);
                if (ex.samples < 1) scenario_fail(lineno, "experiment.samples must be >= 1");
            } else if (key == "steps") {
                ex.steps = parse_int_or_fail(value, lineno, key);
                if (ex.steps < 1) scenario_fail(lineno, "experiment.steps must be >= 1");
            } else if (key == "seed") {
                ex.seed = parse_int_or_fail(value, lineno, key);
            } else if (key == "eps_interior") {
                ex.eps_interior = parse_double_or_fail(value, lineno, key);
            } else if (key == "eps_converged") {
                ex.eps_converged = parse_double_or_fail(value, lineno, key);
            } else if (key == "radial_probe") {
                ex.radial_probe = parse_int_or_fail(value, lineno, key);
            } else {
                scenario_fail(lineno, "unknown experiment field '" + key + "'");
            }
        } else {  // quadrature
            if (key == "boundary_nodes") {
                sc.boundary_nodes = parse_int_or_fail(value, lineno, key);
            } else if (key == "radial_nodes") {
                sc.quadrature.radial = parse_int_or_fail(value, lineno, key);
            } else if (key == "angular_nodes") {
                sc.quadrature.angular = parse_int_or_fail(value, lineno, key);
            } else {
                scenario_fail(lineno, "unknown quadrature field '" + key + "'");
            }
        }
    }

    const auto& ex = sc.experiment;
    if (!(0.0 < ex.eps_converged && ex.eps_converged < ex.eps_interior && ex.eps_interior < 1.0)) {
        throw ScenarioError("experiment: need 0 < eps_converged < eps_interior < 1");
    }
    if (sc.schedule.kind != ScheduleSpec::Kind::Random) {
        for (const auto& name : sc.schedule.map_names) {
            if (!sc.maps.count(name)) {
                throw ScenarioError("schedule references unknown map '" + name + "'");
            }
        }
    }

    // Canonical re-emission; hashing it pins the provenance of a run.
    std::ostringstream canon;
    canon << "[maps]\n";
    for (const auto& name : map_order) canon << name << " = " << format_map(sc.maps[name]) << "\n";
    canon << "[schedule]\n";
    const auto& sch = sc.schedule;
    canon << "generator =";
    if (sch.kind == ScheduleSpec::Kind::Random) {
        canon << " random " << sch.seed << " " << sch.family << " " << sch.horizon;
    } else {
        canon << (sch.kind == ScheduleSpec::Kind::Cycle ? " cycle" : " list");
        for (const auto& n : sch.map_names) canon << " " << n;
    }
    canon << "\n";
    if (sch.marked_auto) {
        canon << "marked = auto\n";
    } else {
        canon << "marked =";
        for (int i : sch.marked_indices) canon << " " << i;
        canon << "\n";
        canon << "marked_arc =";
        if (sch.marked_arc.empty()) {
            canon << " full";
        } else {
            for (auto [a, b] : sch.marked_arc.intervals()) canon << " " << fmt17(a) << ":" << fmt17(b);
        }
        canon << "\n";
        if (sch.marked_delta > 0.0) canon << "marked_delta = " << fmt17(sch.marked_delta) << "\n";
    }
    if (sch.c > 0.0) canon << "c = " << fmt17(sch.c) << "\n";
    canon << "margin = " << fmt17(sch.margin) << "\n";
    canon << "[experiment]\n";
    canon << "samples = " << ex.samples << "\nsteps = " << ex.steps << "\nseed = " << ex.seed
          << "\neps_interior = " << fmt17(ex.eps_interior)
          << "\neps_converged = " << fmt17(ex.eps_converged) << "\n";
    if (ex.radial_probe > 0) canon << "radial_probe = " << ex.radial_probe << "\n";
    canon << "[quadrature]\nboundary_nodes = " << sc.boundary_nodes
          << "\nradial_nodes = " << sc.quadrature.radial
          << "\nangular_nodes = " << sc.quadrature.angular << "\n";
    if (!sc.invariants.empty()) {
        canon << "[invariants]\n";
        for (const auto& suite : sc.invariants) canon << suite << "\n";
    }
    sc.canonical_text = canon.str();
    sc.config_hash = fnv1a(sc.canonical_text);
    return sc;
}

IFSSchedule build_schedule(const Scenario& sc) {
    const auto& sch = sc.schedule;
    IFSSchedule s = [&] {
        if (sch.kind == ScheduleSpec::Kind::Random) {
            return IFSSchedule::random(sch.seed, sch.family, sch.horizon);
        }
        std::vector<MapPtr> maps;
        for (const auto& name : sch.map_names) maps.push_back(sc.maps.at(name));
        return sch.kind == ScheduleSpec::Kind::Cycle ? IFSSchedule::cycle(std::move(maps))
                                                     : IFSSchedule::from_list(std::move(maps));
    }();

    if (sch.marked_auto) {
        s.mark_auto();
    } else {
        std::vector<MarkedIndex> marks;
        const BoundaryArcSet arc =
            sch.marked_arc.empty() ? BoundaryArcSet::full_circle() : sch.marked_arc;
        for (int idx : sch.marked_indices) {
            MarkedIndex m;
            m.index = idx;
            m.arcs = arc;
            if (sch.marked_delta > 0.0) {
                m.delta = sch.marked_delta;
            } else {
                double sup = 0.0;
                for (double t : arc.sample_angles(256)) {
                    sup = std::max(sup, std::abs(eval(s.map_at(idx), std::polar(1.0, t))));
                }
                if (sup >= 1.0 - 1e-9) {
                    throw ScenarioError("marked index " + std::to_string(idx) +
                                        " is not bounded away from the circle on its arc");
                }
                m.delta = sup + 1e-9;
            }
            marks.push_back(std::move(m));
        }
        const double c = sch.c > 0.0 ? sch.c : 0.9 * arc.lebesgue();
        s.set_marked(std::move(marks), c);
    }
    return s;
}

namespace {

bool schedule_all_inner(const IFSSchedule& s, int probe) {
    const int limit = std::min(s.horizon(), probe);
    for (int n = 1; n <= limit; ++n) {
        if (is_inner_on(*s.map_at(n), BoundaryArcSet::full_circle(), 256).status !=
            InnerStatus::Inner) {
            return false;
        }
    }
    return true;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile_of(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t idx = std::min(v.size() - 1, static_cast<size_t>(q * v.size()));
    return v[idx];
}

}  // namespace

ExperimentReport run_boundary_experiment(const Scenario& sc) {
    const IFSSchedule s = build_schedule(sc);
    const auto& ex = sc.experiment;

    const LimitResult limit = locally_uniform_limit(s, 0.5, ex.steps, 1e-6);
    if (limit.status == LimitStatus::Diverging) {
        throw ScenarioError("interior orbit diverges; no limit to test against");
    }
    if (limit.status == LimitStatus::Undecided) {
        throw ScenarioError("interior limit undecided at the requested step budget");
    }

    const bool all_inner = schedule_all_inner(s, 64);

    ExperimentReport report;
    report.z0 = limit.z0;
    report.seed = ex.seed;
    report.config_hash = sc.config_hash;
    report.records.reserve(ex.samples);

    bool inner_exact = true;
    double probe_deviation = 0.0;
    std::vector<double> finals;
    int converged_count = 0;

    for (int i = 0; i < ex.samples; ++i) {
        SampleRecord rec;
        rec.sample_index = i;
        rec.zeta_angle = 2.0 * M_PI * uniform01(ex.seed, i);
        const Cx zeta = std::polar(1.0, rec.zeta_angle);

        Cx cur = zeta;
        int tail_converged = 0;
        for (int n = 1; n <= ex.steps; ++n) {
            cur = eval(s.map_at(n), cur);
            if (rec.first_entry_step < 0 && std::abs(cur) < 1.0 - ex.eps_interior) {
                rec.first_entry_step = n;
            }
            if (std::abs(cur - limit.z0) < ex.eps_converged) {
                ++tail_converged;
            } else {
                tail_converged = 0;
            }
            if (all_inner) {
                // Inner maps send the circle to itself, so each step may only
                // drift by roundoff; reproject so the drift cannot compound
                // through high-degree factors.
                if (std::abs(std::abs(cur) - 1.0) > 1e-12) inner_exact = false;
                cur /= std::abs(cur);
            }
        }
        rec.final_distance = std::abs(cur - limit.z0);
        rec.converged = tail_converged >= std::min(5, ex.steps);
        rec.on_boundary = std::abs(std::abs(cur) - 1.0) < 1e-12;

        if (ex.radial_probe > 0 && i < 64) {
            const double r = 1.0 - std::pow(2.0, -ex.radial_probe);
            Cx probe = r * zeta;
            for (int n = 1; n <= ex.steps; ++n) probe = eval(s.map_at(n), probe);
            probe_deviation = std::max(probe_deviation, std::abs(probe - cur));
        }

        finals.push_back(rec.final_distance);
        if (rec.converged) ++converged_count;
        report.records.push_back(rec);
    }

    report.converged_fraction = static_cast<double>(converged_count) / ex.samples;
    report.median_final_distance = median_of(finals);
    report.q90_final_distance = quantile_of(finals, 0.9);

    if (all_inner) {
        report.invariants.push_back({"inner-schedule-exactness", inner_exact,
                                     "all boundary orbits stay on the circle within 1e-12"});
    }
    if (ex.radial_probe > 0) {
        report.invariants.push_back({"radial-probe-deviation", true,
                                     "max |F_n(r zeta) - F_n(zeta)| = " + fmt17(probe_deviation) +
                                         " at r = 1 - 2^-" + std::to_string(ex.radial_probe)});
    }
    return report;
}

std::optional<ReportFormat> parse_format(const std::string& name) {
    if (name == "table-text") return ReportFormat::TableText;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json-lines") return ReportFormat::JsonLines;
    return std::nullopt;
}

std::string emit_report(const ExperimentReport& r, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        out << "sample_index,zeta_angle_rad,first_entry_step,final_distance,converged\n";
        for (const auto& rec : r.records) {
            out << rec.sample_index << "," << fmt17(rec.zeta_angle) << "," << rec.first_entry_step
                << "," << fmt17(rec.final_distance) << "," << (rec.converged ? 1 : 0) << "\n";
        }
        out << "# summary converged_fraction=" << fmt17(r.converged_fraction)
            << " median_final_distance=" << fmt17(r.median_final_distance)
            << " q90_final_distance=" << fmt17(r.q90_final_distance) << " z0=" << fmt17(r.z0.real())
            << (r.z0.imag() >= 0 ? "+" : "-") << fmt17(std::abs(r.z0.imag())) << "i"
            << " seed=" << r.seed << " config_hash=" << r.config_hash << "\n";
        return out.str();
    }
    if (format == ReportFormat::JsonLines) {
        for (const auto& rec : r.records) {
            nlohmann::json j{{"sample_index", rec.sample_index},
                             {"zeta_angle_rad", rec.zeta_angle},
                             {"first_entry_step", rec.first_entry_step},
                             {"final_distance", rec.final_distance},
                             {"converged", rec.converged}};
            out << j.dump() << "\n";
        }
        nlohmann::json summary{{"record", "summary"},
                               {"converged_fraction", r.converged_fraction},
                               {"median_final_distance", r.median_final_distance},
                               {"q90_final_distance", r.q90_final_distance},
                               {"z0_re", r.z0.real()},
                               {"z0_im", r.z0.imag()},
                               {"seed", r.seed},
                               {"config_hash", r.config_hash}};
        for (const auto& inv : r.invariants) summary["invariants"][inv.name] = inv.pass;
        out << summary.dump() << "\n";
        return out.str();
    }
    out << "samples:             " << r.records.size() << "\n";
    out << "converged fraction:  " << fmt17(r.converged_fraction) << "\n";
    out << "median final dist:   " << fmt17(r.median_final_distance) << "\n";
    out << "q90 final dist:      " << fmt17(r.q90_final_distance) << "\n";
    out << "z0:                  " << fmt17(r.z0.real()) << (r.z0.imag() >= 0 ? "+" : "-")
        << fmt17(std::abs(r.z0.imag())) << "i\n";
    out << "seed / config hash:  " << r.seed << " / " << r.config_hash << "\n";
    for (const auto& inv : r.invariants) {
        out << (inv.pass ? "PASS " : "FAIL ") << inv.name << ": " << inv.detail << "\n";
    }
    return out.str();
}

SummabilityReport summability_diagnostic(const IFSSchedule& s, const PerturbationTrace& trace,
                                         const std::vector<Cx>& zetas, int quad_nodes) {
    if (trace.blocks.empty()) throw ScheduleError("summability_diagnostic: empty trace");
    SummabilityReport report;

    for (const auto& blk : trace.blocks) {
        const OpNormEstimate est =
            opnorm_H20(blk.phi_tilde, /*trials=*/32, /*maxdeg=*/16, /*seed=*/7, {128, 256, 1.0 - 1e-3});
        report.nu = std::max(report.nu, est.upper);
    }

    const int head_end = trace.blocks.front().start;
    Cx head0{0.0, 0.0};
    for (int n = 1; n < head_end; ++n) head0 = eval(s.map_at(n), head0);
    report.cf_bound = std::sqrt((1.0 + std::abs(head0)) / (1.0 - std::abs(head0)));

    std::vector<int> sampled_m;
    for (const auto& blk : trace.blocks) sampled_m.push_back(blk.end);

    report.envelope_ok = true;
    for (int m : sampled_m) {
        SummabilityPoint pt;
        pt.m = m;
        for (const auto& blk : trace.blocks) {
            if (blk.end <= m) pt.k = blk.k;
        }
        const Involution gm = endgame_automorphism(s, trace, m);
        double acc = 0.0;
        for (int j = 0; j < quad_nodes; ++j) {
            Cx cur = std::polar(1.0, 2.0 * M_PI * j / quad_nodes);
            for (int n = 1; n <= m; ++n) cur = eval(s.map_at(n), cur);
            acc += std::norm(gm(cur));
        }
        pt.norm = std::sqrt(acc / quad_nodes);
        pt.envelope = report.cf_bound * std::pow(report.nu, pt.k);
        if (pt.norm > pt.envelope + 1e-9) report.envelope_ok = false;
        report.points.push_back(pt);

        std::vector<double> vals;
        for (Cx zeta : zetas) {
            Cx cur = zeta;
            for (int n = 1; n <= m; ++n) cur = eval(s.map_at(n), cur);
            vals.push_back(std::abs(gm(cur)));
        }
        report.sample_medians.push_back(median_of(vals));
    }
    return report;
}

// --- invariant suites -------------------------------------------------------

namespace {

Cx random_interior(uint64_t seed, uint64_t ctr, double rmax = 0.95) {
    const double r = rmax * std::sqrt(uniform01(seed, 2 * ctr));
    return std::polar(r, 2.0 * M_PI * uniform01(seed, 2 * ctr + 1));
}

void check(std::vector<InvariantResult>& out, const std::string& name, bool pass,
           const std::string& detail) {
    out.push_back({name, pass, detail});
}

void suite_geometry(std::vector<InvariantResult>& out, uint64_t seed) {
    bool metric_ok = true, closure_ok = true, involution_ok = true, isometry_ok = true;
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const Cx z = random_interior(seed, 3 * t), w = random_interior(seed, 3 * t + 1),
                 u = random_interior(seed, 3 * t + 2);
        const double dzw = hyperbolic_distance(z, w);
        if (dzw < 0.0) metric_ok = false;
        if (std::abs(dzw - hyperbolic_distance(w, z)) > 1e-10) metric_ok = false;
        if (dzw > hyperbolic_distance(z, u) + hyperbolic_distance(u, w) + 1e-10) metric_ok = false;

        const DiscAutomorphism f(2.0 * M_PI * uniform01(seed, 1000 + t), random_interior(seed, 2000 + t, 0.9));
        const DiscAutomorphism g(2.0 * M_PI * uniform01(seed, 3000 + t), random_interior(seed, 4000 + t, 0.9));
        const DiscAutomorphism fg = compose(f, g);
        for (int j = 0; j < 64; ++j) {
            const Cx p = std::polar(0.97 * (j + 1) / 64.0, 2.0 * M_PI * j / 7.0);
            const double dev = std::abs(fg(p) - f(g(p)));
            worst = std::max(worst, dev);
            if (dev > 1e-12) closure_ok = false;
        }
        if (std::abs(hyperbolic_distance(f(z), f(w)) - dzw) > 1e-10) isometry_ok = false;

        const Involution e = involution_swapping(random_interior(seed, 5000 + t, 0.9));
        if (std::abs(e(e(z)) - z) > 1e-12) involution_ok = false;
        if (std::abs(e(Cx{0.0, 0.0}) - e.b) > 1e-12) involution_ok = false;
        if (std::abs(e(e.w) - e.w) > 1e-12) involution_ok = false;
    }
    check(out, "geometry.metric-axioms", metric_ok, "200 random triples");
    check(out, "geometry.automorphism-closure", closure_ok,
          "max pointwise deviation " + fmt17(worst));
    check(out, "geometry.involution-properties", involution_ok, "e o e = id, e(0) = b, e(w) = w");
    check(out, "geometry.isometry", isometry_ok, "automorphisms preserve the hyperbolic metric");
}

void suite_holomap(std::vector<InvariantResult>& out, const Scenario& sc, uint64_t seed) {
    bool selfmap_ok = true, deriv_ok = true;
    for (const auto& [name, f] : sc.maps) {
        for (int t = 0; t < 500; ++t) {
            const Cx z = random_interior(seed, 7000 + t);
            if (std::abs(eval(f, z)) >= 1.0) selfmap_ok = false;
            const double h = 1e-5;
            const Cx fd = (eval(f, z + h) - eval(f, z - h)) / (2.0 * h);
            const Cx ex = derivative(f, z);
            if (std::abs(fd - ex) > 1e-6 * std::max(1.0, std::abs(ex))) deriv_ok = false;
        }
    }
    check(out, "holomap.self-map", selfmap_ok, "all scenario maps send interior points inside");
    check(out, "holomap.derivative-fd", deriv_ok, "central differences at step 1e-5");
}

void suite_measure(std::vector<InvariantResult>& out, uint64_t seed) {
    bool invariance_ok = true, bound_ok = true;
    for (int t = 0; t < 100; ++t) {
        // fixed point |w| < 1/2 corresponds to swap point |b| < 0.8
        const Cx b = random_interior(seed, 9000 + t, 0.79);
        const Involution e = involution_swapping(b);
        const double a0 = 2.0 * M_PI * uniform01(seed, 9500 + 2 * t);
        const double len = 0.2 + 5.0 * uniform01(seed, 9500 + 2 * t + 1);
        const BoundaryArcSet E({{a0, a0 + len}});
        const auto inv = invariance_check(e, E);
        if (std::abs(inv.lhs - inv.rhs) > 1e-8) invariance_ok = false;
        const auto push = pushforward_lower_bound(e, E);
        if (push.actual < push.bound) bound_ok = false;
        if (push.density_min < 1.0 / 3.0 - 1e-12 || push.density_max > 4.0 + 1e-12) bound_ok = false;
    }
    check(out, "measure.invariance", invariance_ok, "|lambda(e(E)) - lambda(E)| < 1e-8, 100 draws");
    check(out, "measure.pushforward-bound", bound_ok, "l(e(E)) >= l(E)/12, density in [1/3, 4]");
}

void suite_schedule(std::vector<InvariantResult>& out, const Scenario& sc, uint64_t seed) {
    const IFSSchedule s = build_schedule(sc);
    bool pick_ok = true;
    const int n = std::min(sc.experiment.steps, 40);
    for (int t = 0; t < 20; ++t) {
        const Cx z = random_interior(seed, 11000 + 2 * t, 0.8);
        const Cx w = random_interior(seed, 11000 + 2 * t + 1, 0.8);
        Cx cz = z, cw = w;
        double prev = hyperbolic_distance(cz, cw);
        for (int i = 1; i <= n; ++i) {
            cz = eval(s.map_at(i), cz);
            cw = eval(s.map_at(i), cw);
            const double d = hyperbolic_distance(cz, cw);
            if (d > prev + 1e-10) pick_ok = false;
            prev = d;
        }
    }
    check(out, "schedule.schwarz-pick-monotone", pick_ok,
          "d(F_n(z), F_n(w)) non-increasing along the orbit");
}

void suite_perturbation(std::vector<InvariantResult>& out, const Scenario& sc, uint64_t seed) {
    const IFSSchedule s = build_schedule(sc);
    SparseSelection sel;
    try {
        sel = select_sparse_blocks(s, sc.schedule.margin);
    } catch (const ScheduleError& e) {
        check(out, "perturbation.block-selection", false, e.what());
        return;
    }
    const PerturbationTrace trace = build_perturbation(s, sel);

    bool origin_ok = true, telescope_ok = true, midpoint_ok = true, factor_ok = true;
    Cx phi_chain{0.0, 0.0};
    for (const auto& blk : trace.blocks) {
        if (blk.fixed_origin_residual > 1e-10) origin_ok = false;
        phi_chain = eval(blk.phi, phi_chain);
        if (std::abs(blk.e(Cx{0.0, 0.0}) - phi_chain) > 1e-10) telescope_ok = false;
        if (std::abs(blk.e.w) >= 0.5) midpoint_ok = false;
    }
    const int m = trace.blocks.back().end + 1;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const Cx zeta = std::polar(1.0, 2.0 * M_PI * uniform01(seed, 13000 + t));
        const Cx direct = left_orbit(s, zeta, m).back();
        worst = std::max(worst, std::abs(factorized_F(s, trace, m, zeta) - direct));
    }
    if (worst > 1e-10) factor_ok = false;
    check(out, "perturbation.origin-fixing", origin_ok, "|phi_tilde_k(0)| < 1e-10 for all blocks");
    check(out, "perturbation.telescoping", telescope_ok, "e_k(0) = Phi_k(0) within 1e-10");
    check(out, "perturbation.midpoint-regime", midpoint_ok, "|w_k| < 1/2 for all blocks");
    check(out, "perturbation.factorization", factor_ok,
          "max |factorized - direct| = " + fmt17(worst) + " on 100 boundary points");
}

void suite_hardy(std::vector<InvariantResult>& out, uint64_t seed) {
    bool agree_ok = true, subord_ok = true;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        Polynomial p = random_h20_polynomial(10, seed, 20000 + t);
        p.coeffs[0] = Cx{0.3 * uniform01(seed, 21000 + t), 0.0};
        const HardyFunction f(p);
        const double coeff = p.coefficient_norm();
        const double bnd = hardy_norm_boundary(f, 4096);
        const double lp = hardy_norm_littlewood_paley(f, {128, 1024});
        worst = std::max({worst, std::abs(bnd - coeff), std::abs(lp - coeff)});
        if (std::abs(bnd - coeff) > 1e-6 || std::abs(lp - coeff) > 1e-6) agree_ok = false;

        // Subordination: composition with an origin-fixing self-map contracts.
        const MapPtr m = make_compose(make_affine(Cx{0.5, 0.0}, Cx{0.0, 0.0}), make_power(2));
        double acc = 0.0;
        const int M = 2048;
        for (int j = 0; j < M; ++j) {
            acc += std::norm(p(eval(m, std::polar(1.0, 2.0 * M_PI * j / M))));
        }
        if (std::sqrt(acc / M) > coeff + 1e-9) subord_ok = false;
    }
    check(out, "hardy.estimator-agreement", agree_ok, "max deviation " + fmt17(worst));
    check(out, "hardy.subordination", subord_ok, "||g o f|| <= ||g|| for f fixing 0");
}

}  // namespace

std::vector<InvariantResult> run_invariant_suites(const Scenario& sc) {
    std::vector<std::string> suites = sc.invariants;
    if (suites.empty()) {
        suites = {"geometry", "holomap", "measure", "schedule", "perturbation", "hardy"};
    }
    const uint64_t seed = sc.experiment.seed;
    std::vector<InvariantResult> out;
    for (const auto& suite : suites) {
        if (suite == "geometry") suite_geometry(out, seed);
        else if (suite == "holomap") suite_holomap(out, sc, seed);
        else if (suite == "measure") suite_measure(out, seed);
        else if (suite == "schedule") suite_schedule(out, sc, seed);
        else if (suite == "perturbation") suite_perturbation(out, sc, seed);
        else if (suite == "hardy") suite_hardy(out, seed);
    }
    return out;
}

}  // namespace disc
