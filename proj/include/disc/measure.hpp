#pragma once

#include <utility>
#include <vector>

#include "disc/geometry.hpp"

namespace disc {

// Finite union of open arcs of the unit circle, stored as angle intervals
// in [0, 2pi), normalized to disjoint and sorted.  An interval crossing the
// cut at angle 0 is split on construction.
class BoundaryArcSet {
public:
    BoundaryArcSet() = default;
    explicit BoundaryArcSet(std::vector<std::pair<double, double>> intervals);

    static BoundaryArcSet full_circle();

    const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }

    // Normalized angular length, in [0, 1].
    double lebesgue() const;

    bool contains(double angle, double tol = 0.0) const;

    // Equidistributed sample angles, n per interval proportional to length
    // (at least one per interval), n_total >= 1.
    std::vector<double> sample_angles(int n_total) const;

private:
    std::vector<std::pair<double, double>> intervals_;
};

// Doering-Mane boundary measure with density (1-|w|^2)/|zeta-w|^2 at base
// point w; invariant under the involution fixing w.
struct HarmonicMeasure {
    Cx w{0.0, 0.0};
};

// Closed-form mass via the boundary action of z -> (z-w)/(1 - conj(w) z).
double harmonic_mass(const HarmonicMeasure& lambda, const BoundaryArcSet& E);

// Same mass by direct quadrature of the density (cross-check path).
double harmonic_mass_quadrature(const HarmonicMeasure& lambda, const BoundaryArcSet& E,
                                int nodes_per_interval = 4096);

// Image of an arc set under the boundary action of an automorphism.
// Orientation is resolved by a midpoint sample.
BoundaryArcSet arc_image(const DiscAutomorphism& f, const BoundaryArcSet& E);
BoundaryArcSet arc_image(const Involution& e, const BoundaryArcSet& E);

struct InvarianceCheck {
    double lhs;  // lambda(e(E))
    double rhs;  // lambda(E)
};

// lambda built on e's fixed point; lhs and rhs should agree within 1e-8.
InvarianceCheck invariance_check(const Involution& e, const BoundaryArcSet& E);

struct PushforwardBound {
    double actual;       // l(e(E))
    double bound;        // l(E)/12
    double density_min;  // over a 1024-point boundary grid
    double density_max;
};

// Requires |fixed point of e| < 1/2; throws DomainError otherwise.
// Asserts actual >= bound and density within [1/3, 4].
PushforwardBound pushforward_lower_bound(const Involution& e, const BoundaryArcSet& E);

}  // namespace disc
