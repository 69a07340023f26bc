#include "disc/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "disc/rng.hpp"

namespace disc {

Cx Polynomial::operator()(Cx z) const {
    Cx acc{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Cx Polynomial::derivative_at(Cx z) const {
    Cx acc{0.0, 0.0};
    for (size_t n = coeffs.size(); n-- > 1;) {
        acc = acc * z + static_cast<double>(n) * coeffs[n];
    }
    return acc;
}

double Polynomial::coefficient_norm() const {
    double s = 0.0;
    for (Cx c : coeffs) s += std::norm(c);
    return std::sqrt(s);
}

Cx HardyFunction::operator()(Cx z) const {
    if (auto* p = std::get_if<Polynomial>(&rep_)) return (*p)(z);
    return eval(*std::get<MapPtr>(rep_), z);
}

Cx HardyFunction::derivative_at(Cx z) const {
    if (auto* p = std::get_if<Polynomial>(&rep_)) return p->derivative_at(z);
    return derivative(*std::get<MapPtr>(rep_), z);
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration from the Chebyshev-angle initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1,1] -> [0,1].
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 0.5 * w;
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[n - 1 - i] = 0.5 * w;
    }
}

double hardy_norm_boundary(const HardyFunction& f, int M) {
    double acc = 0.0;
    for (int j = 0; j < M; ++j) {
        acc += std::norm(f(std::polar(1.0, 2.0 * M_PI * j / M)));
    }
    return std::sqrt(acc / M);
}

double hardy_norm_littlewood_paley(const HardyFunction& f, const QuadSpec& quad) {
    std::vector<double> r, wr;
    gauss_legendre_01(quad.radial, r, wr);
    double area = 0.0;
    for (int i = 0; i < quad.radial; ++i) {
        double ring = 0.0;
        for (int j = 0; j < quad.angular; ++j) {
            ring += std::norm(f.derivative_at(std::polar(r[i], 2.0 * M_PI * j / quad.angular)));
        }
        ring /= quad.angular;
        // int_D g dA = 2 int_0^1 r * (angular mean of g) dr for probability A.
        area += wr[i] * 2.0 * r[i] * std::log(1.0 / r[i]) * ring;
    }
    return std::sqrt(std::norm(f.value_at_origin()) + 2.0 * area);
}

namespace {

double nevanlinna_value(const MapExpr& f, Cx w, long degree_cap = 4096) {
    const PreimageSet pre = preimages(f, w, degree_cap);
    double value = 0.0;
    for (auto& [z, m] : pre.points) {
        const double az = std::abs(z);
        if (az < 1e-300) return std::numeric_limits<double>::infinity();
        value += m * std::log(1.0 / az);
    }
    return value;
}

}  // namespace

NevanlinnaEstimate nevanlinna(const MapExpr& f, Cx w, int fatou_nodes) {
    if (!is_interior(w, 0.0)) throw DomainError("nevanlinna: |w| must be < 1");
    NevanlinnaEstimate est;
    est.w = w;
    const Cx f0 = eval(f, Cx{0.0, 0.0});
    est.near_singular = std::abs(w - f0) < 1e-6;

    const PreimageSet pre = preimages(f, w);
    if (w != f0) {
        for (auto& [z, m] : pre.points) {
            est.value += m * std::log(1.0 / std::abs(z));
            est.preimage_count += m;
        }
        const double base = std::log(std::abs((1.0 - std::conj(w) * f0) / (w - f0)));
        est.bound_littlewood = base;
        double integral = 0.0;
        for (int j = 0; j < fatou_nodes; ++j) {
            const Cx fz = eval(f, std::polar(1.0, 2.0 * M_PI * (j + 0.5) / fatou_nodes));
            const double num = std::abs(w - fz);
            if (num < 1e-10) continue;  // singular cell: excluding it raises the bound
            integral += std::log(num / std::abs(1.0 - std::conj(w) * fz));
        }
        est.bound_fatou = integral / fatou_nodes + base;
    }
    return est;
}

ChangeOfVariables change_of_variables_check(const MapExpr& f, const HardyFunction& g,
                                            const QuadSpec& quad) {
    ChangeOfVariables out{};
    // lhs: boundary quadrature of |g(f(zeta))|^2.
    const int M = 4096;
    double acc = 0.0;
    for (int j = 0; j < M; ++j) {
        acc += std::norm(g(eval(f, std::polar(1.0, 2.0 * M_PI * j / M))));
    }
    out.lhs = acc / M;

    const Cx f0 = eval(f, Cx{0.0, 0.0});
    std::vector<double> r, wr;
    gauss_legendre_01(quad.radial, r, wr);
    double area = 0.0;
    for (int i = 0; i < quad.radial; ++i) {
        double ring = 0.0;
        for (int j = 0; j < quad.angular; ++j) {
            const Cx w = std::polar(r[i], 2.0 * M_PI * (j + 0.5) / quad.angular);
            if (std::abs(w - f0) < 1e-12) continue;
            const double nf = nevanlinna_value(f, w);
            if (!std::isfinite(nf)) continue;
            ring += std::norm(g.derivative_at(w)) * nf;
        }
        ring /= quad.angular;
        area += wr[i] * 2.0 * r[i] * ring;
    }
    out.rhs = std::norm(g(f0)) + 2.0 * area;
    return out;
}

double claim1_delta(double c, double r0) {
    if (c <= 0.0 || c > 1.0 || r0 <= 0.0 || r0 >= 1.0) {
        throw DomainError("claim1_delta: need c in (0,1] and r0 in (0,1)");
    }
    return 1.0 - c * (1.0 - r0) / (24.0 * (1.0 + r0));
}

Claim1Report claim1_verify(const MapExpr& phi_tilde, const BoundaryArcSet& arc, double r0,
                           double r1, double delta, const GridSpec& grid) {
    Claim1Report report;
    report.delta = delta;

    if (std::abs(eval(phi_tilde, Cx{0.0, 0.0})) > 1e-10) {
        report.precondition_failures.push_back("phi_tilde(0) != 0");
    }
    if (arc.empty()) {
        report.precondition_failures.push_back("arc set is empty");
    } else {
        for (double t : arc.sample_angles(512)) {
            if (std::abs(eval(phi_tilde, std::polar(1.0, t))) >= r0) {
                report.precondition_failures.push_back("|phi_tilde| >= r0 on the arc");
                break;
            }
        }
    }
    if (!report.precondition_failures.empty()) return report;

    bool ok = true;
    for (int i = 0; i < grid.radial; ++i) {
        // Geometric spacing of 1 - r toward the boundary.
        const double frac = grid.radial == 1 ? 0.0 : static_cast<double>(i) / (grid.radial - 1);
        const double rr = 1.0 - (1.0 - r1) * std::pow((1.0 - grid.r_max) / (1.0 - r1), frac);
        const double logw = std::log(1.0 / rr);
        for (int j = 0; j < grid.angular; ++j) {
            const Cx w = std::polar(rr, 2.0 * M_PI * j / grid.angular);
            const double n = nevanlinna_value(phi_tilde, w);
            if (n > delta * logw + 1e-9) ok = false;
            const double ratio = n / logw;
            if (ratio > report.max_ratio) {
                report.max_ratio = ratio;
                report.argmax = w;
            }
        }
    }
    report.pass = ok;
    return report;
}

double shapiro_gamma(double r) {
    if (r <= 0.0 || r >= 1.0) throw DomainError("shapiro_gamma: r must lie in (0,1)");
    // Antiderivative of 2 t log(1/t): A(t) = t^2/2 - t^2 log t, A(0)=0, A(1)=1/2.
    auto A = [](double t) { return t <= 0.0 ? 0.0 : t * t / 2.0 - t * t * std::log(t); };
    const double Ar = A(r), A1 = A(1.0);
    double gamma = 0.0;
    const int grid = 4096;
    for (int i = 0; i < grid; ++i) {
        const double s = r * i / grid;
        gamma = std::max(gamma, (Ar - A(s)) / (A1 - A(s)));
    }
    return gamma;
}

double log_linear_crossover() {
    // Root of log(1/x) = 2(1-x) in (0,1); log(1/x) > 2(1-x) left of it.
    double lo = 1e-6, hi = 1.0 - 1e-9;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::log(1.0 / mid) > 2.0 * (1.0 - mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double default_r1() { return std::sqrt(log_linear_crossover()); }

Polynomial random_h20_polynomial(int maxdeg, uint64_t seed, uint64_t index) {
    Polynomial p;
    p.coeffs.assign(maxdeg + 1, Cx{0.0, 0.0});
    for (int n = 1; n <= maxdeg; ++n) {
        const double u1 = uniform01(seed, index * 131 + 2 * n);
        const double u2 = uniform01(seed, index * 131 + 2 * n + 1);
        p.coeffs[n] = std::polar(std::sqrt(u1), 2.0 * M_PI * u2);
    }
    const double norm = p.coefficient_norm();
    for (auto& c : p.coeffs) c /= norm;
    return p;
}

OpNormEstimate opnorm_H20(const MapExpr& f, int trials, int maxdeg, uint64_t seed,
                          const GridSpec& grid) {
    if (std::abs(eval(f, Cx{0.0, 0.0})) > 1e-10) {
        throw DomainError("opnorm_H20: requires f(0) = 0");
    }
    OpNormEstimate est;

    // Lower bound from trial functions: the basis monomials z, ..., z^maxdeg
    // plus Monte Carlo draws from H^2_0.
    auto try_poly = [&](const Polynomial& g) {
        const int M = 2048;
        double acc = 0.0;
        for (int j = 0; j < M; ++j) {
            acc += std::norm(g(eval(f, std::polar(1.0, 2.0 * M_PI * j / M))));
        }
        est.lower = std::max(est.lower, std::sqrt(acc / M) / g.coefficient_norm());
    };
    for (int d = 1; d <= maxdeg; ++d) {
        Polynomial mono;
        mono.coeffs.assign(d + 1, Cx{0.0, 0.0});
        mono.coeffs[d] = Cx{1.0, 0.0};
        try_poly(mono);
    }
    for (int t = 0; t < trials; ++t) {
        try_poly(random_h20_polynomial(maxdeg, seed, t));
    }

    // Shared ratio grid N_f(w)/log(1/|w|) over [r_lo, r_max], then suffix
    // maxima give delta(r1) for every candidate r1 in one pass.
    const double r_lo = 0.15;
    std::vector<double> radii(grid.radial), ring_max(grid.radial, 0.0);
    for (int i = 0; i < grid.radial; ++i) {
        const double frac = grid.radial == 1 ? 0.0 : static_cast<double>(i) / (grid.radial - 1);
        radii[i] = 1.0 - (1.0 - r_lo) * std::pow((1.0 - grid.r_max) / (1.0 - r_lo), frac);
        const double logw = std::log(1.0 / radii[i]);
        for (int j = 0; j < grid.angular; ++j) {
            const Cx w = std::polar(radii[i], 2.0 * M_PI * j / grid.angular);
            const double n = nevanlinna_value(f, w);
            ring_max[i] = std::max(ring_max[i], std::min(1.0, n / logw));
        }
    }
    std::vector<double> suffix_max(grid.radial);
    std::vector<int> suffix_arg(grid.radial);
    double running = -1.0;
    int arg = grid.radial - 1;
    for (int i = grid.radial - 1; i >= 0; --i) {
        if (ring_max[i] >= running) {
            running = ring_max[i];
            arg = i;
        }
        suffix_max[i] = running;
        suffix_arg[i] = arg;
    }

    est.upper = 1.0;
    std::vector<double> candidates;
    for (int i = 0; i < 48; ++i) candidates.push_back(0.16 + i * (0.92 - 0.16) / 47.0);
    candidates.push_back(default_r1());
    for (double r1 : candidates) {
        const auto it = std::lower_bound(radii.begin(), radii.end(), r1);
        if (it == radii.end()) continue;
        const int idx = static_cast<int>(it - radii.begin());
        const double delta = suffix_max[idx];
        const double gamma = shapiro_gamma(r1);
        const double nu = std::sqrt(gamma * (1.0 - delta) + delta);
        if (nu < est.upper) {
            est.upper = nu;
            est.r1 = r1;
            est.delta = delta;
            est.gamma = gamma;
            est.grid_edge = (suffix_arg[idx] == grid.radial - 1);
        }
    }
    return est;
}

}  // namespace disc
