#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "disc/geometry.hpp"
#include "disc/measure.hpp"

namespace disc {

struct MapExpr;
using MapPtr = std::shared_ptr<const MapExpr>;

// z -> e^{i theta} prod_j ((z - a_j)/(1 - conj(a_j) z))^{m_j}, |a_j| < 1.
struct BlaschkeNode {
    double theta = 0.0;
    std::vector<std::pair<Cx, int>> zeros;
};

struct AutomorphismNode {
    DiscAutomorphism m;
};

// z -> lambda z + c with |lambda| + |c| <= 1.
struct AffineNode {
    Cx lambda;
    Cx c;
};

// z -> z^d, d >= 1.
struct PowerNode {
    int d = 1;
};

struct ComposeNode {
    MapPtr outer;
    MapPtr inner;
};

// Expression tree for a holomorphic self-map of the disc, continuous on the
// closed disc.  Immutable once built; share freely.
struct MapExpr {
    std::variant<BlaschkeNode, AutomorphismNode, AffineNode, PowerNode, ComposeNode> node;
};

MapPtr make_power(int d);
MapPtr make_affine(Cx lambda, Cx c);
MapPtr make_automorphism(double theta, Cx a);
MapPtr make_automorphism(const DiscAutomorphism& m);
MapPtr make_involution(const Involution& e);
MapPtr make_blaschke(double theta, std::vector<std::pair<Cx, int>> zeros);
MapPtr make_compose(MapPtr outer, MapPtr inner);
// Fold a list outermost-first: compose({f, g, h}) = f o g o h.
MapPtr make_compose(const std::vector<MapPtr>& chain);
MapPtr make_identity();

Cx eval(const MapExpr& f, Cx z);
inline Cx eval(const MapPtr& f, Cx z) { return eval(*f, z); }

// Exact chain-rule derivative, |z| < 1.
Cx derivative(const MapExpr& f, Cx z);
inline Cx derivative(const MapPtr& f, Cx z) { return derivative(*f, z); }

// Product of branch degrees along the tree (a constant map has degree 0).
long total_degree(const MapExpr& f);

struct PreimageSet {
    std::vector<std::pair<Cx, int>> points;  // (root, multiplicity), |root| < 1
    std::vector<std::string> warnings;       // e.g. ill-conditioned root clusters

    int count_with_multiplicity() const {
        int n = 0;
        for (auto& [z, m] : points) n += m;
        return n;
    }
};

struct DegreeOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All solutions of f(z) = w in the open disc, with multiplicity.  Blaschke
// factors go through a companion-matrix eigensolve plus one Newton polish;
// roots closer than 1e-8 are clustered into a single multiple root.
PreimageSet preimages(const MapExpr& f, Cx w, long degree_cap = 4096);
inline PreimageSet preimages(const MapPtr& f, Cx w, long cap = 4096) {
    return preimages(*f, w, cap);
}

enum class InnerStatus { Inner, NotInner, Inconclusive };

struct InnerCheck {
    InnerStatus status;
    std::optional<Cx> witness;  // a sampled boundary point with |f| < 1 - 1e-9
};

// Samples the arc set; true when all samples have |f| >= 1 - 1e-12, false
// with a witness when some sample has |f| < 1 - 1e-9, inconclusive between.
InnerCheck is_inner_on(const MapExpr& f, const BoundaryArcSet& arc,
                       int samples_per_unit_measure = 1024);

// --- map-expression text grammar -------------------------------------------
//
//   expr    := "power(" int ")" | "affine(" complex "," complex ")"
//            | "auto(" real "," complex ")"
//            | "blaschke(" real ";" zerolist ")"
//            | "compose(" expr ("," expr)+ ")"
//   complex := real [("+"|"-") real "i"]
//   zerolist:= complex ["x" int] ("," complex ["x" int])*

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int line_, int column_, const std::string& what_);
};

MapPtr parse_map(const std::string& text);

// Canonical serialization; parse_map(format_map(f)) is structurally equal to f.
std::string format_map(const MapExpr& f);
inline std::string format_map(const MapPtr& f) { return format_map(*f); }

bool structurally_equal(const MapExpr& f, const MapExpr& g);

inline double schwarz_pick_defect(const MapExpr& f, Cx z, Cx w) {
    return hyperbolic_distance(z, w) - hyperbolic_distance(eval(f, z), eval(f, w));
}
inline double schwarz_pick_defect(const MapPtr& f, Cx z, Cx w) {
    return schwarz_pick_defect(*f, z, w);
}

}  // namespace disc
