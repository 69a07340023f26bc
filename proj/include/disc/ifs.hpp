#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "disc/holomap.hpp"
#include "disc/measure.hpp"

namespace disc {

// A distinguished index n_k together with the witness set E_k and bound
// delta_k: |f_{n_k}| < delta_k on E_k.
struct MarkedIndex {
    int index = 0;  // 1-based position in the schedule
    BoundaryArcSet arcs;
    double delta = 0.0;
};

struct ScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Generator of the sequence (f_n) plus its marked non-inner subsequence.
class IFSSchedule {
public:
    static IFSSchedule from_list(std::vector<MapPtr> maps);
    static IFSSchedule cycle(std::vector<MapPtr> maps);
    // Seeded draws from a named family ("affine" or "blaschke").
    static IFSSchedule random(uint64_t seed, const std::string& family, int horizon);

    // 1-based; throws ScheduleError past the end of a finite schedule.
    MapPtr map_at(int n) const;
    // Horizon for finite schedules; cycles and random schedules report their
    // declared horizon (extendable on request).
    int horizon() const { return horizon_; }
    bool is_cyclic() const { return kind_ == Kind::Cycle; }

    const std::vector<MarkedIndex>& marked() const { return marked_; }
    double c() const { return c_; }

    void set_marked(std::vector<MarkedIndex> marked, double c);
    // Scans [1, horizon] and marks every index whose map is bounded away
    // from the circle on the full boundary (sampled); sets c from the arcs.
    void mark_auto(int boundary_samples = 256);

private:
    enum class Kind { List, Cycle, Random };
    Kind kind_ = Kind::List;
    std::vector<MapPtr> maps_;
    int horizon_ = 0;
    uint64_t seed_ = 0;
    std::string family_;
    std::vector<MarkedIndex> marked_;
    double c_ = 0.0;
};

// F_1(z), ..., F_n(z) with F_j = f_j o ... o f_1.
std::vector<Cx> left_orbit(const IFSSchedule& s, Cx z, int n);

enum class LimitStatus { Converged, Undecided, Diverging };

struct LimitResult {
    LimitStatus status = LimitStatus::Undecided;
    Cx z0{0.0, 0.0};
    double spread = 0.0;  // final sup over the grid of |F_n(z) - F_n(0)|
};

// Tests locally uniform convergence to a constant on a 32x32 polar grid
// over D(0, rho); Cauchy increments of F_n(0) must also fall below tol.
LimitResult locally_uniform_limit(const IFSSchedule& s, double rho, int n, double tol);

// phi_k = f_{n_{k+1}-1} o ... o f_{n_k} for consecutive pairs of indices.
std::vector<MapPtr> block_decompose(const IFSSchedule& s, const std::vector<int>& indices);

struct BlockCertificate {
    int start = 0;  // n_k
    int end = 0;    // n_{k+1}
    double sup_half_disc = 0.0;  // sup |phi_k| over a grid on |z| = 1/2
    double sup_on_arc = 0.0;     // sup |phi_k| over samples of E_k
    int grid_points = 0;
    double margin = 0.0;
};

struct SparseSelection {
    std::vector<int> indices;  // selected n_1 < n_2 < ...
    std::vector<BlockCertificate> certificates;
};

// Greedy extension of each block until the half-disc contraction and the
// arc smallness conditions certify on 256-point grids.  Throws
// ScheduleError on exhaustion.
SparseSelection select_sparse_blocks(const IFSSchedule& s, double margin,
                                     int max_blocks = 64);

struct PerturbationBlock {
    int k = 0;
    int start = 0;  // n_k
    int end = 0;    // n_{k+1}
    MapPtr phi;
    Involution e;
    MapPtr phi_tilde;
    bool half_disc_contraction = false;
    bool boundary_smallness = false;
    double fixed_origin_residual = 0.0;  // |phi_tilde(0)|
};

struct PerturbationTrace {
    std::vector<PerturbationBlock> blocks;
    double r0 = 0.0;  // certified image-radius constant used for smallness
    double c = 0.0;   // lower bound on l(E_k)
};

struct AssumptionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Certified constant: involutions with fixed point in D(0, 1/2) map
// D(0, 1/2) into D(0, r0).
double r0_certified();

// e_1 swaps 0 and phi_1(0); e_k swaps 0 and phi_k(e_{k-1}(0)); the
// perturbed blocks phi_tilde fix the origin.  Throws AssumptionError
// naming the failing inequality and block.
PerturbationTrace build_perturbation(const IFSSchedule& s, const SparseSelection& sel);

// Evaluates F_m through the rewritten composition
// tail o e_k o phi_tilde_k o ... o phi_tilde_1 o head; agrees with
// left_orbit within roundoff since the involutions cancel in pairs.
Cx factorized_F(const IFSSchedule& s, const PerturbationTrace& trace, int m, Cx z);

// g_m swaps 0 with f_m o ... o f_{n_{k+1}} o e_k(0).
Involution endgame_automorphism(const IFSSchedule& s, const PerturbationTrace& trace, int m);

}  // namespace disc
