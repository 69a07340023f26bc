#pragma once

#include <complex>
#include <stdexcept>

namespace disc {

using Cx = std::complex<double>;

constexpr double kBoundaryTol = 1e-12;

inline bool is_interior(Cx z, double tol = kBoundaryTol) {
    return std::abs(z) < 1.0 - tol;
}
inline bool is_boundary(Cx z, double tol = kBoundaryTol) {
    return std::abs(std::abs(z) - 1.0) < tol;
}

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Pseudo-hyperbolic distance |(z-w)/(1-conj(w)z)|.
double pseudo_distance(Cx z, Cx w);

// d(z,w) = 1/2 log((1+p)/(1-p)) = artanh(p) with p the pseudo-distance.
// Throws DomainError if either point is outside the open disc.
double hyperbolic_distance(Cx z, Cx w);

// The unique point m with d(z,m) = d(w,m) = d(z,w)/2, by conjugating z to
// the origin, halving in artanh-radius and conjugating back.
// Returns z when z == w (degenerate by convention).
Cx hyperbolic_midpoint(Cx z, Cx w);

// z -> e^{i theta} (z - a) / (1 - conj(a) z), |a| < 1.  Maps the disc onto
// itself and the circle onto itself.
struct DiscAutomorphism {
    double theta = 0.0;
    Cx a{0.0, 0.0};

    DiscAutomorphism() = default;
    DiscAutomorphism(double theta_, Cx a_);

    Cx operator()(Cx z) const;
    // Derivative e^{i theta} (1 - |a|^2) / (1 - conj(a) z)^2.
    Cx derivative(Cx z) const;

    DiscAutomorphism inverse() const;
};

// Composition f after g, renormalized to canonical (theta, a) form.
DiscAutomorphism compose(const DiscAutomorphism& f, const DiscAutomorphism& g);

// Self-inverse automorphism e(z) = (b - z)/(1 - conj(b) z); swaps 0 and b.
// Its fixed point w is the hyperbolic midpoint of 0 and b.  For b = 0 this
// is z -> -z with fixed point 0.
struct Involution {
    Cx b{0.0, 0.0};
    Cx w{0.0, 0.0};  // fixed point, derived from b

    Cx operator()(Cx z) const;
    Cx derivative(Cx z) const;
    DiscAutomorphism as_automorphism() const;
};

Involution involution_swapping(Cx b);

// d(z, w) - d(f(z), f(w)); nonnegative for holomorphic self-maps, zero for
// automorphisms (the isometry case).
template <typename F>
double schwarz_pick_defect(F&& f, Cx z, Cx w) {
    return hyperbolic_distance(z, w) - hyperbolic_distance(f(z), f(w));
}

}  // namespace disc
