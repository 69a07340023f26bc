#include "disc/geometry.hpp"

#include <cmath>

namespace disc {

double pseudo_distance(Cx z, Cx w) {
    return std::abs((z - w) / (1.0 - std::conj(w) * z));
}

double hyperbolic_distance(Cx z, Cx w) {
    if (!is_interior(z, 0.0) || !is_interior(w, 0.0)) {
        throw DomainError("hyperbolic_distance: point outside the open disc");
    }
    const double p = pseudo_distance(z, w);
    return std::atanh(p);
}

Cx hyperbolic_midpoint(Cx z, Cx w) {
    if (!is_interior(z, 0.0) || !is_interior(w, 0.0)) {
        throw DomainError("hyperbolic_midpoint: point outside the open disc");
    }
    if (z == w) return z;
    // Send z to 0; w goes to u = (w - z)/(1 - conj(z) w).
    const Cx u = (w - z) / (1.0 - std::conj(z) * w);
    const double r = std::abs(u);
    if (r == 0.0) return z;
    const double half = std::tanh(0.5 * std::atanh(r));
    const Cx m0 = u * (half / r);
    // Conjugate back: inverse of v -> (v - z)/(1 - conj(z) v).
    return (m0 + z) / (1.0 + std::conj(z) * m0);
}

DiscAutomorphism::DiscAutomorphism(double theta_, Cx a_) : theta(theta_), a(a_) {
    if (!is_interior(a, 0.0)) {
        throw DomainError("DiscAutomorphism: |a| must be < 1");
    }
}

Cx DiscAutomorphism::operator()(Cx z) const {
    return std::polar(1.0, theta) * (z - a) / (1.0 - std::conj(a) * z);
}

Cx DiscAutomorphism::derivative(Cx z) const {
    const Cx denom = 1.0 - std::conj(a) * z;
    return std::polar(1.0, theta) * (1.0 - std::norm(a)) / (denom * denom);
}

DiscAutomorphism DiscAutomorphism::inverse() const {
    // f^{-1}(z) = e^{-i theta}(z + e^{i theta} a) / (1 + conj(a) e^{-i theta} z)
    //           = e^{-i theta}(z - a') / (1 - conj(a') z) with a' = -e^{i theta} a.
    return DiscAutomorphism(-theta, -std::polar(1.0, theta) * a);
}

DiscAutomorphism compose(const DiscAutomorphism& f, const DiscAutomorphism& g) {
    // Matrix form: [[e^{i theta}, -e^{i theta} a], [-conj(a), 1]].
    const Cx ef = std::polar(1.0, f.theta), eg = std::polar(1.0, g.theta);
    const Cx A = ef * eg + (-ef * f.a) * (-std::conj(g.a));
    const Cx C = -std::conj(f.a) * eg + (-std::conj(g.a));
    const Cx D = -std::conj(f.a) * (-eg * g.a) + 1.0;
    // Canonical form: divide by D so the lower row is (-conj(a), 1).
    const Cx rot = A / D;
    return DiscAutomorphism(std::arg(rot), -std::conj(C / D));
}

Cx Involution::operator()(Cx z) const {
    return (b - z) / (1.0 - std::conj(b) * z);
}

Cx Involution::derivative(Cx z) const {
    const Cx denom = 1.0 - std::conj(b) * z;
    return -(1.0 - std::norm(b)) / (denom * denom);
}

DiscAutomorphism Involution::as_automorphism() const {
    // (b - z)/(1 - conj(b) z) = e^{i pi}(z - b)/(1 - conj(b) z).
    return DiscAutomorphism(M_PI, b);
}

Involution involution_swapping(Cx b) {
    if (!is_interior(b, 0.0)) {
        throw DomainError("involution_swapping: |b| must be < 1");
    }
    Involution e;
    e.b = b;
    e.w = (b == Cx{0.0, 0.0}) ? Cx{0.0, 0.0} : hyperbolic_midpoint(Cx{0.0, 0.0}, b);
    return e;
}

}  // namespace disc
