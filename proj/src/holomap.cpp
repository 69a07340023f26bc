#include "disc/holomap.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace disc {

namespace {

using Poly = std::vector<Cx>;  // coefficients, ascending powers

Poly poly_mul(const Poly& p, const Poly& q) {
    Poly r(p.size() + q.size() - 1, Cx{0.0, 0.0});
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

Poly poly_pow(Poly p, int n) {
    Poly r{Cx{1.0, 0.0}};
    for (int i = 0; i < n; ++i) r = poly_mul(r, p);
    return r;
}

// Eigenvalues of the companion matrix of a monic-normalized polynomial.
std::vector<Cx> poly_roots(Poly p) {
    while (!p.empty() && std::abs(p.back()) < 1e-14) p.pop_back();
    const int deg = static_cast<int>(p.size()) - 1;
    if (deg < 1) return {};
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) C(i, deg - 1) = -p[i] / p[deg];
    for (int i = 1; i < deg; ++i) C(i, i - 1) = Cx{1.0, 0.0};
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(C, false);
    std::vector<Cx> roots(deg);
    for (int i = 0; i < deg; ++i) roots[i] = solver.eigenvalues()(i);
    return roots;
}

}  // namespace

MapPtr make_power(int d) {
    if (d < 1) throw DomainError("power map requires exponent >= 1");
    return std::make_shared<MapExpr>(MapExpr{PowerNode{d}});
}

MapPtr make_affine(Cx lambda, Cx c) {
    if (std::abs(lambda) + std::abs(c) > 1.0 + 1e-12) {
        throw DomainError("affine map requires |lambda| + |c| <= 1");
    }
    return std::make_shared<MapExpr>(MapExpr{AffineNode{lambda, c}});
}

MapPtr make_automorphism(double theta, Cx a) {
    return std::make_shared<MapExpr>(MapExpr{AutomorphismNode{DiscAutomorphism(theta, a)}});
}

MapPtr make_automorphism(const DiscAutomorphism& m) {
    return std::make_shared<MapExpr>(MapExpr{AutomorphismNode{m}});
}

MapPtr make_involution(const Involution& e) {
    return make_automorphism(e.as_automorphism());
}

MapPtr make_blaschke(double theta, std::vector<std::pair<Cx, int>> zeros) {
    for (auto& [a, m] : zeros) {
        if (!is_interior(a, 0.0)) throw DomainError("blaschke zero must satisfy |a| < 1");
        if (m < 1) throw DomainError("blaschke multiplicity must be >= 1");
    }
    return std::make_shared<MapExpr>(MapExpr{BlaschkeNode{theta, std::move(zeros)}});
}

MapPtr make_compose(MapPtr outer, MapPtr inner) {
    return std::make_shared<MapExpr>(MapExpr{ComposeNode{std::move(outer), std::move(inner)}});
}

MapPtr make_compose(const std::vector<MapPtr>& chain) {
    if (chain.empty()) return make_identity();
    MapPtr acc = chain.back();
    for (auto it = chain.rbegin() + 1; it != chain.rend(); ++it) {
        acc = make_compose(*it, acc);
    }
    return acc;
}

MapPtr make_identity() { return make_power(1); }

Cx eval(const MapExpr& f, Cx z) {
    return std::visit(
        [&](const auto& node) -> Cx {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BlaschkeNode>) {
                Cx out = std::polar(1.0, node.theta);
                for (auto& [a, m] : node.zeros) {
                    const Cx factor = (z - a) / (1.0 - std::conj(a) * z);
                    for (int i = 0; i < m; ++i) out *= factor;
                }
                return out;
            } else if constexpr (std::is_same_v<T, AutomorphismNode>) {
                return node.m(z);
            } else if constexpr (std::is_same_v<T, AffineNode>) {
                return node.lambda * z + node.c;
            } else if constexpr (std::is_same_v<T, PowerNode>) {
                Cx out{1.0, 0.0};
                for (int i = 0; i < node.d; ++i) out *= z;
                return out;
            } else {
                return eval(*node.outer, eval(*node.inner, z));
            }
        },
        f.node);
}

Cx derivative(const MapExpr& f, Cx z) {
    return std::visit(
        [&](const auto& node) -> Cx {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BlaschkeNode>) {
                // f = e^{i theta} prod u_j^{m_j}; product rule, robust at zeros.
                const size_t n = node.zeros.size();
                std::vector<Cx> u(n), du(n);
                for (size_t j = 0; j < n; ++j) {
                    const auto& [a, m] = node.zeros[j];
                    const Cx denom = 1.0 - std::conj(a) * z;
                    u[j] = (z - a) / denom;
                    du[j] = (1.0 - std::norm(a)) / (denom * denom);
                }
                Cx sum{0.0, 0.0};
                for (size_t j = 0; j < n; ++j) {
                    Cx term = static_cast<double>(node.zeros[j].second) * du[j];
                    for (int i = 0; i < node.zeros[j].second - 1; ++i) term *= u[j];
                    for (size_t i = 0; i < n; ++i) {
                        if (i == j) continue;
                        for (int p = 0; p < node.zeros[i].second; ++p) term *= u[i];
                    }
                    sum += term;
                }
                return std::polar(1.0, node.theta) * sum;
            } else if constexpr (std::is_same_v<T, AutomorphismNode>) {
                return node.m.derivative(z);
            } else if constexpr (std::is_same_v<T, AffineNode>) {
                return node.lambda;
            } else if constexpr (std::is_same_v<T, PowerNode>) {
                Cx out{static_cast<double>(node.d), 0.0};
                for (int i = 0; i < node.d - 1; ++i) out *= z;
                return out;
            } else {
                return derivative(*node.outer, eval(*node.inner, z)) * derivative(*node.inner, z);
            }
        },
        f.node);
}

long total_degree(const MapExpr& f) {
    return std::visit(
        [&](const auto& node) -> long {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BlaschkeNode>) {
                long d = 0;
                for (auto& [a, m] : node.zeros) d += m;
                return d;
            } else if constexpr (std::is_same_v<T, AutomorphismNode>) {
                return 1;
            } else if constexpr (std::is_same_v<T, AffineNode>) {
                return node.lambda == Cx{0.0, 0.0} ? 0 : 1;
            } else if constexpr (std::is_same_v<T, PowerNode>) {
                return node.d;
            } else {
                return total_degree(*node.outer) * total_degree(*node.inner);
            }
        },
        f.node);
}

namespace {

// One Newton step towards f(z) = w; used when the raw residual is too large.
Cx newton_polish(const MapExpr& f, Cx w, Cx z) {
    const Cx df = derivative(f, z);
    if (std::abs(df) < 1e-300) return z;
    Cx zn = z - (eval(f, z) - w) / df;
    if (std::abs(zn) >= 1.0) return z;
    return zn;
}

void collect_preimages(const MapExpr& f, Cx w, long cap, std::vector<Cx>& out,
                       std::vector<std::string>& warnings) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BlaschkeNode>) {
                // Clear denominators: e^{i theta} prod (z-a_j)^{m_j}
                //                     = w prod (1 - conj(a_j) z)^{m_j}.
                Poly num{Cx{std::polar(1.0, node.theta)}};
                Poly den{Cx{w}};
                for (auto& [a, m] : node.zeros) {
                    num = poly_mul(num, poly_pow(Poly{-a, Cx{1.0, 0.0}}, m));
                    den = poly_mul(den, poly_pow(Poly{Cx{1.0, 0.0}, -std::conj(a)}, m));
                }
                Poly p(std::max(num.size(), den.size()), Cx{0.0, 0.0});
                for (size_t i = 0; i < num.size(); ++i) p[i] += num[i];
                for (size_t i = 0; i < den.size(); ++i) p[i] -= den[i];
                for (Cx z : poly_roots(p)) {
                    if (std::abs(z) >= 1.0) continue;
                    if (std::abs(eval(f, z) - w) > 1e-9) z = newton_polish(f, w, z);
                    if (std::abs(eval(f, z) - w) > 1e-9) {
                        warnings.push_back("blaschke root residual above 1e-9 after polish");
                    }
                    if (std::abs(z) < 1.0) out.push_back(z);
                }
            } else if constexpr (std::is_same_v<T, AutomorphismNode>) {
                const Cx z = node.m.inverse()(w);
                if (std::abs(z) < 1.0) out.push_back(z);
            } else if constexpr (std::is_same_v<T, AffineNode>) {
                if (node.lambda == Cx{0.0, 0.0}) return;  // constant map, degree 0
                const Cx z = (w - node.c) / node.lambda;
                if (std::abs(z) < 1.0) out.push_back(z);
            } else if constexpr (std::is_same_v<T, PowerNode>) {
                if (w == Cx{0.0, 0.0}) {
                    for (int i = 0; i < node.d; ++i) out.push_back(Cx{0.0, 0.0});
                    return;
                }
                const double r = std::pow(std::abs(w), 1.0 / node.d);
                const double phi = std::arg(w);
                for (int i = 0; i < node.d; ++i) {
                    const Cx z = std::polar(r, (phi + 2.0 * M_PI * i) / node.d);
                    if (std::abs(z) < 1.0) out.push_back(z);
                }
            } else {
                std::vector<Cx> mids;
                collect_preimages(*node.outer, w, cap, mids, warnings);
                for (Cx u : mids) collect_preimages(*node.inner, u, cap, out, warnings);
            }
        },
        f.node);
}

}  // namespace

PreimageSet preimages(const MapExpr& f, Cx w, long degree_cap) {
    if (!is_interior(w, 0.0)) throw DomainError("preimages: target must be interior");
    if (total_degree(f) > degree_cap) {
        throw DegreeOverflowError("preimages: total degree exceeds cap");
    }
    PreimageSet result;
    std::vector<Cx> roots;
    collect_preimages(f, w, degree_cap, roots, result.warnings);

    // Cluster roots closer than 1e-8 into a single multiple root.
    constexpr double kClusterRadius = 1e-8;
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        Cx centroid = roots[i];
        int mult = 1;
        used[i] = true;
        for (size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(roots[j] - centroid / static_cast<double>(mult)) < kClusterRadius) {
                centroid += roots[j];
                ++mult;
                used[j] = true;
            }
        }
        if (mult > 1) {
            result.warnings.push_back("root cluster of size " + std::to_string(mult) +
                                      " within 1e-8 (multiplicity assumed)");
        }
        result.points.emplace_back(centroid / static_cast<double>(mult), mult);
    }
    return result;
}

InnerCheck is_inner_on(const MapExpr& f, const BoundaryArcSet& arc, int samples_per_unit_measure) {
    const double measure = arc.lebesgue();
    const int n = std::max(1, static_cast<int>(std::ceil(samples_per_unit_measure * measure)));
    bool inconclusive = false;
    for (double t : arc.sample_angles(n)) {
        const Cx zeta = std::polar(1.0, t);
        const double mod = std::abs(eval(f, zeta));
        if (mod < 1.0 - 1e-9) return {InnerStatus::NotInner, zeta};
        if (mod < 1.0 - 1e-12) inconclusive = true;
    }
    if (inconclusive) return {InnerStatus::Inconclusive, std::nullopt};
    return {InnerStatus::Inner, std::nullopt};
}

// --- parser -----------------------------------------------------------------

ParseError::ParseError(int line_, int column_, const std::string& what_)
    : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                         std::to_string(column_) + ": " + what_),
      line(line_),
      column(column_) {}

namespace {

class MapParser {
public:
    explicit MapParser(const std::string& text) : text_(text) {}

    MapPtr parse() {
        MapPtr result = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) fail("trailing input after expression");
        return result;
    }

private:
    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, col_, msg); }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            advance();
        }
    }

    char peek() { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    std::string parse_ident() {
        skip_ws();
        std::string id;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            id += text_[pos_];
            advance();
        }
        if (id.empty()) fail("expected identifier");
        return id;
    }

    double parse_real() {
        skip_ws();
        const size_t start = pos_;
        if (peek() == '+' || peek() == '-') advance();
        bool digits = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            advance();
            digits = true;
        }
        if (peek() == '.') {
            advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                advance();
                digits = true;
            }
        }
        if (!digits) fail("expected number");
        if (peek() == 'e' || peek() == 'E') {
            advance();
            if (peek() == '+' || peek() == '-') advance();
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed exponent");
            while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        }
        return std::stod(text_.substr(start, pos_ - start));
    }

    int parse_int() {
        const double v = parse_real();
        const int n = static_cast<int>(std::lround(v));
        if (v != static_cast<double>(n)) fail("expected integer");
        return n;
    }

    Cx parse_complex() {
        const double re = parse_real();
        skip_ws();
        if (peek() == '+' || peek() == '-') {
            const double sign = (peek() == '+') ? 1.0 : -1.0;
            advance();
            const double im = parse_real();
            skip_ws();
            if (peek() != 'i') fail("expected 'i' after imaginary part");
            advance();
            return Cx{re, sign * im};
        }
        return Cx{re, 0.0};
    }

    MapPtr parse_expr() {
        skip_ws();
        const int eline = line_, ecol = col_;
        const std::string head = parse_ident();
        expect('(');
        MapPtr out;
        try {
            if (head == "power") {
                const int d = parse_int();
                out = make_power(d);
            } else if (head == "affine") {
                const Cx lambda = parse_complex();
                expect(',');
                const Cx c = parse_complex();
                out = make_affine(lambda, c);
            } else if (head == "auto") {
                const double theta = parse_real();
                expect(',');
                const Cx a = parse_complex();
                out = make_automorphism(theta, a);
            } else if (head == "blaschke") {
                const double theta = parse_real();
                expect(';');
                std::vector<std::pair<Cx, int>> zeros;
                while (true) {
                    const Cx a = parse_complex();
                    int mult = 1;
                    skip_ws();
                    if (peek() == 'x') {
                        advance();
                        mult = parse_int();
                    }
                    zeros.emplace_back(a, mult);
                    skip_ws();
                    if (peek() != ',') break;
                    advance();
                }
                out = make_blaschke(theta, std::move(zeros));
            } else if (head == "compose") {
                std::vector<MapPtr> chain;
                chain.push_back(parse_expr());
                skip_ws();
                if (peek() != ',') fail("compose requires at least two arguments");
                while (peek() == ',') {
                    advance();
                    chain.push_back(parse_expr());
                    skip_ws();
                }
                out = make_compose(chain);
            } else {
                throw ParseError(eline, ecol, "unknown map '" + head + "'");
            }
        } catch (const DomainError& e) {
            throw ParseError(eline, ecol, e.what());
        }
        expect(')');
        return out;
    }
};

std::string fmt_real(double x) {
    std::ostringstream ss;
    ss.precision(17);
    ss << x;
    return ss.str();
}

std::string fmt_complex(Cx z) {
    std::string out = fmt_real(z.real());
    if (z.imag() >= 0.0) {
        out += "+" + fmt_real(z.imag()) + "i";
    } else {
        out += "-" + fmt_real(-z.imag()) + "i";
    }
    return out;
}

}  // namespace

MapPtr parse_map(const std::string& text) { return MapParser(text).parse(); }

std::string format_map(const MapExpr& f) {
    return std::visit(
        [&](const auto& node) -> std::string {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BlaschkeNode>) {
                std::string out = "blaschke(" + fmt_real(node.theta) + "; ";
                for (size_t i = 0; i < node.zeros.size(); ++i) {
                    if (i) out += ", ";
                    out += fmt_complex(node.zeros[i].first);
                    if (node.zeros[i].second != 1) {
                        out += " x" + std::to_string(node.zeros[i].second);
                    }
                }
                return out + ")";
            } else if constexpr (std::is_same_v<T, AutomorphismNode>) {
                return "auto(" + fmt_real(node.m.theta) + ", " + fmt_complex(node.m.a) + ")";
            } else if constexpr (std::is_same_v<T, AffineNode>) {
                return "affine(" + fmt_complex(node.lambda) + ", " + fmt_complex(node.c) + ")";
            } else if constexpr (std::is_same_v<T, PowerNode>) {
                return "power(" + std::to_string(node.d) + ")";
            } else {
                return "compose(" + format_map(*node.outer) + ", " + format_map(*node.inner) + ")";
            }
        },
        f.node);
}

bool structurally_equal(const MapExpr& f, const MapExpr& g) {
    if (f.node.index() != g.node.index()) return false;
    return std::visit(
        [&](const auto& a) -> bool {
            using T = std::decay_t<decltype(a)>;
            const auto& b = std::get<T>(g.node);
            if constexpr (std::is_same_v<T, BlaschkeNode>) {
                return a.theta == b.theta && a.zeros == b.zeros;
            } else if constexpr (std::is_same_v<T, AutomorphismNode>) {
                return a.m.theta == b.m.theta && a.m.a == b.m.a;
            } else if constexpr (std::is_same_v<T, AffineNode>) {
                return a.lambda == b.lambda && a.c == b.c;
            } else if constexpr (std::is_same_v<T, PowerNode>) {
                return a.d == b.d;
            } else {
                return structurally_equal(*a.outer, *b.outer) &&
                       structurally_equal(*a.inner, *b.inner);
            }
        },
        f.node);
}

}  // namespace disc
