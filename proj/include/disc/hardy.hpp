#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "disc/holomap.hpp"

namespace disc {

// Polynomial c0 + c1 z + ... + cN z^N; its H^2 norm is sqrt(sum |c_n|^2).
struct Polynomial {
    std::vector<Cx> coeffs;

    Cx operator()(Cx z) const;
    Cx derivative_at(Cx z) const;
    double coefficient_norm() const;
};

// Either a self-map expression or a polynomial; both lie in H^2.
class HardyFunction {
public:
    HardyFunction(MapPtr f) : rep_(std::move(f)) {}
    HardyFunction(Polynomial p) : rep_(std::move(p)) {}

    Cx operator()(Cx z) const;
    Cx derivative_at(Cx z) const;
    Cx value_at_origin() const { return (*this)(Cx{0.0, 0.0}); }

    const Polynomial* as_polynomial() const { return std::get_if<Polynomial>(&rep_); }

private:
    std::variant<MapPtr, Polynomial> rep_;
};

struct QuadSpec {
    int radial = 128;    // Gauss-Legendre nodes on [0,1]
    int angular = 1024;  // trapezoid nodes on the circle
};

struct GridSpec {
    int radial = 256;  // geometrically spaced toward the boundary
    int angular = 512;
    double r_max = 1.0 - 1e-3;
};

// Boundary-integral norm: trapezoid over M circle nodes of |f|^2.  l is the
// probability measure on the circle, so no explicit 2pi factor appears.
double hardy_norm_boundary(const HardyFunction& f, int M = 4096);

// sqrt(|f(0)|^2 + 2 int_D |f'|^2 log(1/|z|) dA), A the probability measure.
double hardy_norm_littlewood_paley(const HardyFunction& f, const QuadSpec& quad = {});

struct NevanlinnaEstimate {
    Cx w;
    double value = 0.0;
    int preimage_count = 0;
    double bound_littlewood = 0.0;
    double bound_fatou = 0.0;
    bool near_singular = false;  // |w - f(0)| < 1e-6, Littlewood bound blows up
};

// N_f(w) = sum of m(z) log(1/|z|) over preimages, plus the Fatou and
// Littlewood upper bounds.  The Fatou bound uses a midpoint boundary rule
// with exclusion of singular cells (exclusion only raises the bound).
NevanlinnaEstimate nevanlinna(const MapExpr& f, Cx w, int fatou_nodes = 8192);
inline NevanlinnaEstimate nevanlinna(const MapPtr& f, Cx w, int nodes = 8192) {
    return nevanlinna(*f, w, nodes);
}

struct ChangeOfVariables {
    double lhs;  // ||g o f||_2^2 by boundary quadrature
    double rhs;  // |g(f(0))|^2 + 2 int |g'|^2 N_f dA
};

ChangeOfVariables change_of_variables_check(const MapExpr& f, const HardyFunction& g,
                                            const QuadSpec& quad = {96, 256});

// delta = 1 - c (1 - r0) / (24 (1 + r0)); c in (0,1], r0 in (0,1).
double claim1_delta(double c, double r0);

struct Claim1Report {
    bool pass = false;
    double max_ratio = 0.0;  // max of N(w) / log(1/|w|) over the grid
    Cx argmax{0.0, 0.0};
    double delta = 0.0;
    std::vector<std::string> precondition_failures;
};

// Checks N_{phi_tilde}(w) <= delta log(1/|w|) + 1e-9 on a polar grid over
// r1 <= |w| <= r_max.  Preconditions: phi_tilde(0) = 0 and |phi_tilde| < r0
// on the arc samples; failures are listed rather than thrown.
Claim1Report claim1_verify(const MapExpr& phi_tilde, const BoundaryArcSet& arc, double r0,
                           double r1, double delta, const GridSpec& grid = {});

// gamma = sup_{s in [0,r)} mu([s,r)) / mu([s,1)) for d mu(t) = 2 t log(1/t) dt,
// via the closed-form antiderivative t^2/2 - t^2 log t.
double shapiro_gamma(double r);

// Root of log(1/x) = 2(1-x) in (0,1); the default radius split is sqrt of it.
double log_linear_crossover();
double default_r1();

struct OpNormEstimate {
    double lower = 0.0;  // Monte Carlo over random polynomials in H^2_0
    double upper = 1.0;  // min over r1 of sqrt(gamma (1-delta) + delta)
    double r1 = 0.0;
    double delta = 1.0;
    double gamma = 1.0;
    bool grid_edge = false;  // sup of N/log attained at the annulus edge
};

// Norm brackets for C_f restricted to H^2_0; requires f(0) = 0.
OpNormEstimate opnorm_H20(const MapExpr& f, int trials = 200, int maxdeg = 32,
                          uint64_t seed = 1, const GridSpec& grid = {});
inline OpNormEstimate opnorm_H20(const MapPtr& f, int trials = 200, int maxdeg = 32,
                                 uint64_t seed = 1, const GridSpec& grid = {}) {
    return opnorm_H20(*f, trials, maxdeg, seed, grid);
}

// Random polynomial with g(0) = 0, coefficients uniform on the unit disc,
// then normalized; deterministic in (seed, index).
Polynomial random_h20_polynomial(int maxdeg, uint64_t seed, uint64_t index);

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace disc
