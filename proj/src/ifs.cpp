#include "disc/ifs.hpp"

#include <algorithm>
#include <cmath>

#include "disc/rng.hpp"

namespace disc {

IFSSchedule IFSSchedule::from_list(std::vector<MapPtr> maps) {
    if (maps.empty()) throw ScheduleError("schedule list must be nonempty");
    IFSSchedule s;
    s.kind_ = Kind::List;
    s.horizon_ = static_cast<int>(maps.size());
    s.maps_ = std::move(maps);
    return s;
}

IFSSchedule IFSSchedule::cycle(std::vector<MapPtr> maps) {
    if (maps.empty()) throw ScheduleError("schedule cycle must be nonempty");
    IFSSchedule s;
    s.kind_ = Kind::Cycle;
    s.maps_ = std::move(maps);
    s.horizon_ = 1 << 20;
    return s;
}

IFSSchedule IFSSchedule::random(uint64_t seed, const std::string& family, int horizon) {
    if (family != "affine" && family != "blaschke") {
        throw ScheduleError("unknown random family '" + family + "'");
    }
    IFSSchedule s;
    s.kind_ = Kind::Random;
    s.seed_ = seed;
    s.family_ = family;
    s.horizon_ = horizon;
    return s;
}

MapPtr IFSSchedule::map_at(int n) const {
    if (n < 1) throw ScheduleError("schedule index must be >= 1");
    switch (kind_) {
        case Kind::List:
            if (n > static_cast<int>(maps_.size())) {
                throw ScheduleError("index past the end of a finite schedule");
            }
            return maps_[n - 1];
        case Kind::Cycle:
            return maps_[(n - 1) % maps_.size()];
        case Kind::Random: {
            if (family_ == "affine") {
                const double u1 = uniform01(seed_, 4 * n);
                const double u2 = uniform01(seed_, 4 * n + 1);
                const double u3 = uniform01(seed_, 4 * n + 2);
                const double u4 = uniform01(seed_, 4 * n + 3);
                const Cx lambda = std::polar(0.1 + 0.5 * u1, 2.0 * M_PI * u2);
                const Cx c = std::polar((0.9 - std::abs(lambda)) * u3, 2.0 * M_PI * u4);
                return make_affine(lambda, c);
            }
            // blaschke: one to three zeros in D(0, 0.8)
            const int deg = 1 + static_cast<int>(uniform01(seed_, 8 * n) * 3.0);
            std::vector<std::pair<Cx, int>> zeros;
            for (int j = 0; j < deg; ++j) {
                const double r = 0.8 * std::sqrt(uniform01(seed_, 8 * n + 2 * j + 1));
                const double phi = 2.0 * M_PI * uniform01(seed_, 8 * n + 2 * j + 2);
                zeros.emplace_back(std::polar(r, phi), 1);
            }
            return make_blaschke(2.0 * M_PI * uniform01(seed_, 8 * n + 7), std::move(zeros));
        }
    }
    throw ScheduleError("unreachable");
}

void IFSSchedule::set_marked(std::vector<MarkedIndex> marked, double c) {
    for (size_t i = 0; i < marked.size(); ++i) {
        if (marked[i].index < 1 || (i > 0 && marked[i].index <= marked[i - 1].index)) {
            throw ScheduleError("marked indices must be strictly increasing and >= 1");
        }
        if (marked[i].arcs.lebesgue() <= c) {
            throw ScheduleError("marked arc measure must exceed c");
        }
    }
    marked_ = std::move(marked);
    c_ = c;
}

void IFSSchedule::mark_auto(int boundary_samples) {
    marked_.clear();
    const int limit = std::min(horizon_, 4096);
    double min_measure = 1.0;
    for (int n = 1; n <= limit; ++n) {
        const MapPtr f = map_at(n);
        double sup = 0.0;
        for (int j = 0; j < boundary_samples; ++j) {
            sup = std::max(sup, std::abs(eval(f, std::polar(1.0, 2.0 * M_PI * j / boundary_samples))));
        }
        if (sup < 1.0 - 1e-6) {
            MarkedIndex m;
            m.index = n;
            m.arcs = BoundaryArcSet::full_circle();
            m.delta = std::min(1.0 - 1e-9, sup + 1e-9);
            marked_.push_back(std::move(m));
            min_measure = std::min(min_measure, 1.0);
        }
        if (is_cyclic() && n >= static_cast<int>(maps_.size()) && !marked_.empty()) {
            // One full period scanned; extend periodically instead of rescanning.
            const int period = static_cast<int>(maps_.size());
            std::vector<MarkedIndex> base = marked_;
            for (int rep = 1; rep * period < horizon_ && marked_.size() < 4096; ++rep) {
                for (const auto& b : base) {
                    if (b.index + rep * period > horizon_) break;
                    MarkedIndex m = b;
                    m.index = b.index + rep * period;
                    marked_.push_back(std::move(m));
                }
            }
            break;
        }
    }
    c_ = marked_.empty() ? 0.0 : 0.5 * min_measure;
}

std::vector<Cx> left_orbit(const IFSSchedule& s, Cx z, int n) {
    if (n < 1) throw ScheduleError("left_orbit: n must be >= 1");
    std::vector<Cx> orbit;
    orbit.reserve(n);
    Cx cur = z;
    for (int i = 1; i <= n; ++i) {
        cur = eval(s.map_at(i), cur);
        orbit.push_back(cur);
    }
    return orbit;
}

LimitResult locally_uniform_limit(const IFSSchedule& s, double rho, int n, double tol) {
    if (rho <= 0.0 || rho >= 1.0) throw DomainError("locally_uniform_limit: rho in (0,1)");
    std::vector<Cx> grid;
    for (int i = 1; i <= 32; ++i) {
        for (int j = 0; j < 32; ++j) {
            grid.push_back(std::polar(rho * i / 32.0, 2.0 * M_PI * j / 32.0));
        }
    }
    Cx origin{0.0, 0.0};
    Cx prev_origin = origin;
    double mid_spread = 0.0;
    std::vector<Cx> cur = grid;
    double increment = std::numeric_limits<double>::infinity();
    for (int step = 1; step <= n; ++step) {
        const MapPtr f = s.map_at(step);
        prev_origin = origin;
        origin = eval(f, origin);
        for (auto& z : cur) z = eval(f, z);
        increment = std::abs(origin - prev_origin);
        if (step == n / 2) {
            for (const Cx& z : cur) mid_spread = std::max(mid_spread, std::abs(z - origin));
        }
    }
    LimitResult res;
    for (const Cx& z : cur) res.spread = std::max(res.spread, std::abs(z - origin));
    res.z0 = origin;
    if (res.spread < tol && increment < tol) {
        res.status = LimitStatus::Converged;
    } else if (res.spread > 2.0 * mid_spread && res.spread > tol) {
        res.status = LimitStatus::Diverging;
    } else {
        res.status = LimitStatus::Undecided;
    }
    return res;
}

std::vector<MapPtr> block_decompose(const IFSSchedule& s, const std::vector<int>& indices) {
    if (indices.size() < 2) throw ScheduleError("block_decompose: need at least two indices");
    for (size_t i = 0; i + 1 < indices.size(); ++i) {
        if (indices[i] < 1 || indices[i] >= indices[i + 1]) {
            throw ScheduleError("block_decompose: indices must be strictly increasing");
        }
    }
    if (indices.back() - 1 > s.horizon()) {
        throw ScheduleError("block_decompose: index past schedule horizon");
    }
    std::vector<MapPtr> blocks;
    for (size_t i = 0; i + 1 < indices.size(); ++i) {
        std::vector<MapPtr> chain;  // outermost first
        for (int n = indices[i + 1] - 1; n >= indices[i]; --n) chain.push_back(s.map_at(n));
        blocks.push_back(make_compose(chain));
    }
    return blocks;
}

SparseSelection select_sparse_blocks(const IFSSchedule& s, double margin, int max_blocks) {
    if (margin <= 0.0 || margin >= 0.5) throw DomainError("margin must lie in (0, 1/2)");
    const auto& marked = s.marked();
    if (marked.empty()) throw ScheduleError("schedule has no marked subsequence");

    constexpr int kGrid = 256;
    SparseSelection sel;
    size_t cur = 0;
    sel.indices.push_back(marked[0].index);
    while (static_cast<int>(sel.certificates.size()) < max_blocks) {
        bool extended = false;
        for (size_t cand = cur + 1; cand < marked.size(); ++cand) {
            const int start = marked[cur].index;
            const int end = marked[cand].index;
            std::vector<MapPtr> chain;
            for (int n = end - 1; n >= start; --n) chain.push_back(s.map_at(n));
            const MapPtr phi = make_compose(chain);

            BlockCertificate cert;
            cert.start = start;
            cert.end = end;
            cert.grid_points = kGrid;
            cert.margin = margin;
            for (int j = 0; j < kGrid; ++j) {
                cert.sup_half_disc = std::max(
                    cert.sup_half_disc, std::abs(eval(phi, std::polar(0.5, 2.0 * M_PI * j / kGrid))));
            }
            for (double t : marked[cur].arcs.sample_angles(kGrid)) {
                cert.sup_on_arc = std::max(cert.sup_on_arc, std::abs(eval(phi, std::polar(1.0, t))));
            }
            if (cert.sup_half_disc < 0.5 - margin && cert.sup_on_arc < 0.5) {
                sel.indices.push_back(end);
                sel.certificates.push_back(cert);
                cur = cand;
                extended = true;
                break;
            }
        }
        if (!extended) break;
    }
    if (sel.certificates.empty()) {
        throw ScheduleError("select_sparse_blocks: schedule exhausted before any block certified");
    }
    return sel;
}

double r0_certified() {
    static const double cached = [] {
        // Involutions with fixed point modulus < 1/2 have swap point
        // modulus < 0.8; scan the closed parameter range for the image
        // radius of D(0, 1/2).
        double sup = 0.0;
        const int nb = 2048, nphi = 512;
        for (int i = 0; i <= nb; ++i) {
            const double b = 0.8 * i / nb;
            for (int j = 0; j < nphi; ++j) {
                const Cx z = std::polar(0.5, 2.0 * M_PI * j / nphi);
                sup = std::max(sup, std::abs((b - z) / (1.0 - b * z)));
            }
        }
        return sup + 1e-6;
    }();
    return cached;
}

PerturbationTrace build_perturbation(const IFSSchedule& s, const SparseSelection& sel) {
    PerturbationTrace trace;
    trace.r0 = r0_certified();
    trace.c = s.c();
    const std::vector<MapPtr> phis = block_decompose(s, sel.indices);

    // Arc sets E_k keyed by block start index.
    std::vector<const BoundaryArcSet*> arcs;
    for (size_t k = 0; k < phis.size(); ++k) {
        const BoundaryArcSet* arc = nullptr;
        for (const auto& m : s.marked()) {
            if (m.index == sel.indices[k]) arc = &m.arcs;
        }
        arcs.push_back(arc);
    }

    Cx prev_e0{0.0, 0.0};  // e_0 = identity evaluated at 0
    Involution prev_e = involution_swapping(Cx{0.0, 0.0});
    for (size_t k = 0; k < phis.size(); ++k) {
        PerturbationBlock blk;
        blk.k = static_cast<int>(k + 1);
        blk.start = sel.indices[k];
        blk.end = sel.indices[k + 1];
        blk.phi = phis[k];

        const Cx b = eval(blk.phi, prev_e0);
        if (std::abs(b) >= 0.5) {
            throw AssumptionError("block " + std::to_string(blk.k) +
                                  ": phi_k(e_{k-1}(0)) escaped D(0, 1/2)");
        }
        blk.e = involution_swapping(b);
        if (std::abs(blk.e.w) >= 0.5) {
            throw AssumptionError("block " + std::to_string(blk.k) +
                                  ": fixed point w_k escaped D(0, 1/2)");
        }
        const MapPtr e_map = make_involution(blk.e);
        blk.phi_tilde = (k == 0) ? make_compose(e_map, blk.phi)
                                 : make_compose({e_map, blk.phi, make_involution(prev_e)});

        blk.fixed_origin_residual = std::abs(eval(blk.phi_tilde, Cx{0.0, 0.0}));
        if (blk.fixed_origin_residual > 1e-10) {
            throw AssumptionError("block " + std::to_string(blk.k) +
                                  ": phi_tilde does not fix the origin");
        }

        blk.half_disc_contraction = true;
        for (int j = 0; j < 256; ++j) {
            if (std::abs(eval(blk.phi, std::polar(0.5, 2.0 * M_PI * j / 256))) >= 0.5) {
                blk.half_disc_contraction = false;
            }
        }

        blk.boundary_smallness = true;
        if (arcs[k] != nullptr) {
            const BoundaryArcSet image_arc =
                (k == 0) ? *arcs[k] : arc_image(prev_e, *arcs[k]);
            for (double t : image_arc.sample_angles(256)) {
                if (std::abs(eval(blk.phi_tilde, std::polar(1.0, t))) >= trace.r0) {
                    blk.boundary_smallness = false;
                }
            }
            if (!blk.boundary_smallness) {
                throw AssumptionError("block " + std::to_string(blk.k) +
                                      ": |phi_tilde| >= r0 on e_{k-1}(E_k)");
            }
        }

        prev_e0 = b;  // e_k(0) = phi_k(e_{k-1}(0))
        prev_e = blk.e;
        trace.blocks.push_back(std::move(blk));
    }
    return trace;
}

namespace {

// Largest k with n_{k+1} <= m; requires m to reach past the first block.
int block_count_for(const PerturbationTrace& trace, int m) {
    int k = 0;
    for (const auto& blk : trace.blocks) {
        if (blk.end <= m) k = blk.k;
    }
    if (k == 0) throw ScheduleError("m must lie beyond the first selected block");
    return k;
}

}  // namespace

Cx factorized_F(const IFSSchedule& s, const PerturbationTrace& trace, int m, Cx z) {
    const int k = block_count_for(trace, m);
    const int head_end = trace.blocks.front().start;  // n_1
    Cx cur = z;
    for (int n = 1; n < head_end; ++n) cur = eval(s.map_at(n), cur);
    for (int i = 0; i < k; ++i) cur = eval(trace.blocks[i].phi_tilde, cur);
    cur = trace.blocks[k - 1].e(cur);
    for (int n = trace.blocks[k - 1].end; n <= m; ++n) cur = eval(s.map_at(n), cur);
    return cur;
}

Involution endgame_automorphism(const IFSSchedule& s, const PerturbationTrace& trace, int m) {
    const int k = block_count_for(trace, m);
    Cx b = trace.blocks[k - 1].e(Cx{0.0, 0.0});
    for (int n = trace.blocks[k - 1].end; n <= m; ++n) b = eval(s.map_at(n), b);
    return involution_swapping(b);
}

}  // namespace disc
