#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "disc/hardy.hpp"
#include "disc/ifs.hpp"

namespace disc {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
    int samples = 1000;
    int steps = 60;
    double eps_interior = 0.5;
    double eps_converged = 1e-6;
    uint64_t seed = 1;
    int radial_probe = 0;  // 0 = direct boundary evaluation
};

struct ScheduleSpec {
    enum class Kind { List, Cycle, Random } kind = Kind::Cycle;
    std::vector<std::string> map_names;
    uint64_t seed = 0;       // random generator
    std::string family;      // random generator
    int horizon = 1 << 20;   // random generator
    bool marked_auto = true;
    std::vector<int> marked_indices;
    BoundaryArcSet marked_arc;  // shared E for explicit marks; empty = full
    double marked_delta = 0.0;  // 0 = measure on the samples
    double c = 0.0;             // 0 = auto
    double margin = 0.1;
};

// Parsed, validated scenario file.  Sections: maps, schedule, experiment,
// quadrature, invariants.  Unknown keys are rejected at parse time.
struct Scenario {
    std::map<std::string, MapPtr> maps;
    ScheduleSpec schedule;
    ExperimentSpec experiment;
    QuadSpec quadrature;
    int boundary_nodes = 4096;
    std::vector<std::string> invariants;  // requested suites for `verify`
    std::string canonical_text;           // re-emitted canonical form
    uint64_t config_hash = 0;
};

Scenario parse_scenario(const std::string& text);

// Builds the schedule described by the scenario (maps resolved, marks set).
IFSSchedule build_schedule(const Scenario& sc);

struct SampleRecord {
    int sample_index = 0;
    double zeta_angle = 0.0;
    int first_entry_step = -1;  // -1 if the orbit never enters the interior disc
    double final_distance = 0.0;
    bool converged = false;
    bool on_boundary = false;  // final modulus within 1e-12 of 1
};

struct InvariantResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentReport {
    std::vector<SampleRecord> records;
    double converged_fraction = 0.0;
    double median_final_distance = 0.0;
    double q90_final_distance = 0.0;
    Cx z0{0.0, 0.0};
    std::vector<InvariantResult> invariants;
    uint64_t seed = 0;
    uint64_t config_hash = 0;
};

// Boundary Monte Carlo: uniform circle samples, counter-based seeding,
// direct boundary evaluation of each orbit.  Throws ScenarioError when the
// interior limit cannot be established.
ExperimentReport run_boundary_experiment(const Scenario& sc);

enum class ReportFormat { TableText, Csv, JsonLines };

std::string emit_report(const ExperimentReport& r, ReportFormat format);
std::optional<ReportFormat> parse_format(const std::string& name);

struct SummabilityPoint {
    int m = 0;
    int k = 0;              // block count at m
    double norm = 0.0;      // ||g_m o F_m||_2 by boundary quadrature
    double envelope = 0.0;  // ||C_f|| nu^k
};

struct SummabilityReport {
    std::vector<SummabilityPoint> points;
    double nu = 0.0;       // max blockwise certified upper bound
    double cf_bound = 0.0; // sqrt((1+|f(0)|)/(1-|f(0)|)) for the head
    bool envelope_ok = false;
    // Median of |g_m o F_m(zeta)| over the zeta samples, per sampled m.
    std::vector<double> sample_medians;
};

SummabilityReport summability_diagnostic(const IFSSchedule& s, const PerturbationTrace& trace,
                                         const std::vector<Cx>& zetas, int quad_nodes = 1024);

// `verify` support: runs the invariant suites referenced by the scenario
// and returns one result per check.
std::vector<InvariantResult> run_invariant_suites(const Scenario& sc);

}  // namespace disc
