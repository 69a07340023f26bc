#include "disc/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace disc {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

}  // namespace

BoundaryArcSet::BoundaryArcSet(std::vector<std::pair<double, double>> intervals) {
    std::vector<std::pair<double, double>> split;
    for (auto [s, e] : intervals) {
        double len = e - s;
        if (len <= 0.0) continue;
        if (len >= kTwoPi) {
            split.emplace_back(0.0, kTwoPi);
            continue;
        }
        s = wrap_angle(s);
        e = s + len;
        if (e > kTwoPi) {
            split.emplace_back(s, kTwoPi);
            split.emplace_back(0.0, e - kTwoPi);
        } else {
            split.emplace_back(s, e);
        }
    }
    std::sort(split.begin(), split.end());
    for (auto& iv : split) {
        if (!intervals_.empty() && iv.first <= intervals_.back().second) {
            intervals_.back().second = std::max(intervals_.back().second, iv.second);
        } else {
            intervals_.push_back(iv);
        }
    }
}

BoundaryArcSet BoundaryArcSet::full_circle() {
    return BoundaryArcSet({{0.0, kTwoPi}});
}

double BoundaryArcSet::lebesgue() const {
    double total = 0.0;
    for (auto [s, e] : intervals_) total += e - s;
    return total / kTwoPi;
}

bool BoundaryArcSet::contains(double angle, double tol) const {
    const double t = wrap_angle(angle);
    for (auto [s, e] : intervals_) {
        if (t >= s - tol && t <= e + tol) return true;
        // wrap-adjacent check for angles near 0 / 2pi
        if (t + kTwoPi >= s - tol && t + kTwoPi <= e + tol) return true;
    }
    return false;
}

std::vector<double> BoundaryArcSet::sample_angles(int n_total) const {
    std::vector<double> out;
    if (intervals_.empty() || n_total < 1) return out;
    const double total = lebesgue() * kTwoPi;
    for (auto [s, e] : intervals_) {
        const double len = e - s;
        int n = std::max(1, static_cast<int>(std::lround(n_total * len / total)));
        for (int i = 0; i < n; ++i) {
            out.push_back(s + (i + 0.5) * len / n);
        }
    }
    return out;
}

double harmonic_mass(const HarmonicMeasure& lambda, const BoundaryArcSet& E) {
    if (!is_interior(lambda.w, 0.0)) {
        throw DomainError("harmonic_mass: base point outside the disc");
    }
    if (lambda.w == Cx{0.0, 0.0}) return E.lebesgue();
    // The density is the boundary Jacobian of z -> (z-w)/(1 - conj(w) z),
    // so lambda(E) = l(image of E under that automorphism).
    const DiscAutomorphism mw(0.0, lambda.w);
    return arc_image(mw, E).lebesgue();
}

double harmonic_mass_quadrature(const HarmonicMeasure& lambda, const BoundaryArcSet& E,
                                int nodes_per_interval) {
    const Cx w = lambda.w;
    double total = 0.0;
    for (auto [s, e] : E.intervals()) {
        const double len = e - s;
        double acc = 0.0;
        for (int i = 0; i < nodes_per_interval; ++i) {
            const double t = s + (i + 0.5) * len / nodes_per_interval;
            const Cx zeta = std::polar(1.0, t);
            acc += (1.0 - std::norm(w)) / std::norm(zeta - w);
        }
        total += acc * len / nodes_per_interval;
    }
    return total / (2.0 * M_PI);
}

BoundaryArcSet arc_image(const DiscAutomorphism& f, const BoundaryArcSet& E) {
    std::vector<std::pair<double, double>> images;
    for (auto [s, e] : E.intervals()) {
        if (e - s >= kTwoPi - 1e-15) {
            images.emplace_back(0.0, kTwoPi);
            continue;
        }
        double a1 = std::arg(f(std::polar(1.0, s)));
        double a2 = std::arg(f(std::polar(1.0, e)));
        a1 = wrap_angle(a1);
        a2 = wrap_angle(a2);
        double len = wrap_angle(a2 - a1);  // candidate: ccw arc a1 -> a2
        // Midpoint sample decides which of the two candidate arcs is the image.
        const double mid_src = 0.5 * (s + e);
        const double mid_img = wrap_angle(std::arg(f(std::polar(1.0, mid_src))));
        const double off = wrap_angle(mid_img - a1);
        if (off > len) {
            // Image runs ccw from a2 to a1 instead.
            std::swap(a1, a2);
            len = kTwoPi - len;
        }
        images.emplace_back(a1, a1 + len);
    }
    return BoundaryArcSet(std::move(images));
}

BoundaryArcSet arc_image(const Involution& e, const BoundaryArcSet& E) {
    return arc_image(e.as_automorphism(), E);
}

InvarianceCheck invariance_check(const Involution& e, const BoundaryArcSet& E) {
    const HarmonicMeasure lambda{e.w};
    return {harmonic_mass(lambda, arc_image(e, E)), harmonic_mass(lambda, E)};
}

PushforwardBound pushforward_lower_bound(const Involution& e, const BoundaryArcSet& E) {
    if (std::abs(e.w) >= 0.5) {
        throw DomainError("pushforward_lower_bound: fixed point modulus must be < 1/2");
    }
    PushforwardBound out;
    out.actual = arc_image(e, E).lebesgue();
    out.bound = E.lebesgue() / 12.0;
    out.density_min = std::numeric_limits<double>::infinity();
    out.density_max = 0.0;
    const int grid = 1024;
    for (int i = 0; i < grid; ++i) {
        const Cx zeta = std::polar(1.0, kTwoPi * i / grid);
        const double dens = (1.0 - std::norm(e.w)) / std::norm(zeta - e.w);
        out.density_min = std::min(out.density_min, dens);
        out.density_max = std::max(out.density_max, dens);
    }
    return out;
}

}  // namespace disc
