#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "disc/holomap.hpp"
#include "disc/rng.hpp"

using namespace disc;

namespace {

Cx rand_pt(uint64_t seed, uint64_t ctr, double rmax = 0.95) {
    const double r = rmax * std::sqrt(uniform01(seed, 2 * ctr));
    return std::polar(r, 2.0 * M_PI * uniform01(seed, 2 * ctr + 1));
}

MapPtr random_blaschke(uint64_t seed, uint64_t ctr, int deg) {
    std::vector<std::pair<Cx, int>> zeros;
    for (int j = 0; j < deg; ++j) zeros.emplace_back(rand_pt(seed, ctr * 16 + j, 0.8), 1);
    return make_blaschke(2.0 * M_PI * uniform01(seed, ctr * 16 + 15), std::move(zeros));
}

}  // namespace

TEST_CASE("eval basics") {
    CHECK(eval(make_power(2), {0.5, 0}) == Cx{0.25, 0});
    CHECK(eval(make_affine({0.5, 0}, {0.25, 0}), {1.0, 0}) == Cx{0.75, 0});  // boundary allowed
    CHECK(std::abs(eval(make_blaschke(0.0, {{{0.5, 0.0}, 1}}), {0, 0}) - Cx{-0.5, 0}) < 1e-15);
}

TEST_CASE("derivative closed forms") {
    CHECK(std::abs(derivative(make_power(2), {0.3, 0}) - Cx{0.6, 0}) < 1e-15);
    const Cx a{0.3, 0.1};
    CHECK(std::abs(derivative(make_automorphism(0.0, a), {0, 0}) - Cx{1.0 - std::norm(a), 0}) < 1e-15);
}

TEST_CASE("derivative matches finite differences on random trees") {
    const std::vector<MapPtr> maps = {
        make_power(3),
        make_affine({0.4, 0.2}, {0.1, -0.1}),
        random_blaschke(23, 1, 3),
        make_compose(random_blaschke(23, 2, 2), make_affine({0.5, 0}, {0.2, 0})),
        make_compose({make_power(2), make_automorphism(0.4, {0.2, 0.1}), make_power(2)}),
    };
    const double h = 1e-5;
    for (const auto& f : maps) {
        for (int t = 0; t < 200; ++t) {
            const Cx z = rand_pt(29, t, 0.9);
            const Cx fd = (eval(f, z + h) - eval(f, z - h)) / (2.0 * h);
            const Cx ex = derivative(f, z);
            CHECK(std::abs(fd - ex) <= 1e-6 * std::max(1.0, std::abs(ex)));
        }
    }
}

TEST_CASE("self-map property") {
    const std::vector<MapPtr> maps = {
        make_power(2), make_affine({0.5, 0}, {0.5, 0}), random_blaschke(31, 3, 4),
        make_compose(make_automorphism(1.0, {0.4, 0.2}), make_power(3))};
    for (const auto& f : maps) {
        for (int t = 0; t < 10000; ++t) {
            CHECK(std::abs(eval(f, rand_pt(31, 100 + t, 0.999))) < 1.0);
        }
    }
}

TEST_CASE("preimages: power map") {
    const PreimageSet pre = preimages(make_power(2), {0.25, 0});
    REQUIRE(pre.count_with_multiplicity() == 2);
    bool plus = false, minus = false;
    for (auto& [z, m] : pre.points) {
        if (std::abs(z - Cx{0.5, 0}) < 1e-12) plus = true;
        if (std::abs(z - Cx{-0.5, 0}) < 1e-12) minus = true;
    }
    CHECK(plus);
    CHECK(minus);
}

TEST_CASE("preimages: affine outside the disc is empty") {
    CHECK(preimages(make_affine({0.5, 0}, {0.25, 0}), {0.9, 0}).points.empty());
}

TEST_CASE("preimages: blaschke degree 3 against a grid-scan oracle") {
    const MapPtr f = random_blaschke(37, 4, 3);
    for (int t = 0; t < 20; ++t) {
        const Cx w = rand_pt(37, 400 + t, 0.7);
        const PreimageSet pre = preimages(f, w);
        CHECK(pre.count_with_multiplicity() == 3);
        for (auto& [z, m] : pre.points) {
            CHECK(std::abs(eval(f, z) - w) < 1e-9);
        }
        // independent root locator: coarse grid scan for sign-change cells of
        // |f - w|, then count distinct local minima that refine to roots
        int found = 0;
        std::vector<Cx> located;
        const int N = 60;
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                Cx z{-1.0 + 2.0 * (i + 0.5) / N, -1.0 + 2.0 * (j + 0.5) / N};
                if (std::abs(z) >= 0.98) continue;
                // local Newton from every cell; collect converged points
                for (int it = 0; it < 60; ++it) {
                    const Cx df = derivative(f, z);
                    if (std::abs(df) < 1e-14) break;
                    z -= (eval(f, z) - w) / df;
                    if (std::abs(z) > 1.5) break;
                }
                if (std::abs(z) < 1.0 && std::abs(eval(f, z) - w) < 1e-10) {
                    bool fresh = true;
                    for (Cx seen : located) {
                        if (std::abs(seen - z) < 1e-6) fresh = false;
                    }
                    if (fresh) {
                        located.push_back(z);
                        ++found;
                    }
                }
            }
        }
        CHECK(found == 3);
        for (Cx loc : located) {
            bool matched = false;
            for (auto& [z, m] : pre.points) {
                if (std::abs(z - loc) < 1e-7) matched = true;
            }
            CHECK(matched);
        }
    }
}

TEST_CASE("preimages through compositions multiply degrees") {
    const MapPtr f = make_compose(make_power(2), make_power(3));
    CHECK(total_degree(*f) == 6);
    const PreimageSet pre = preimages(f, {0.1, 0.05});
    CHECK(pre.count_with_multiplicity() == 6);
    for (auto& [z, m] : pre.points) CHECK(std::abs(eval(f, z) - Cx{0.1, 0.05}) < 1e-9);
}

TEST_CASE("degree cap raises") {
    MapPtr f = make_power(2);
    for (int i = 0; i < 12; ++i) f = make_compose(f, make_power(2));  // degree 2^13
    CHECK_THROWS_AS(preimages(f, {0.1, 0}), DegreeOverflowError);
}

TEST_CASE("degree consistency over random targets") {
    const MapPtr f = random_blaschke(41, 5, 4);
    int exceptional = 0;
    for (int t = 0; t < 1000; ++t) {
        const PreimageSet pre = preimages(f, rand_pt(41, 900 + t, 0.75));
        if (pre.count_with_multiplicity() != 4) ++exceptional;
    }
    CHECK(exceptional <= 3);
}

TEST_CASE("argument principle cross-check for blaschke maps") {
    const MapPtr f = random_blaschke(43, 6, 3);
    for (int t = 0; t < 10; ++t) {
        const Cx w = rand_pt(43, 50 + t, 0.7);
        const int count = preimages(f, w).count_with_multiplicity();
        // winding of f - w around |z| = 1 - 1e-6
        const int N = 20000;
        double winding = 0.0;
        Cx prev = eval(f, std::polar(1.0 - 1e-6, 0.0)) - w;
        for (int j = 1; j <= N; ++j) {
            const Cx cur = eval(f, std::polar(1.0 - 1e-6, 2.0 * M_PI * j / N)) - w;
            winding += std::arg(cur / prev);
            prev = cur;
        }
        CHECK(std::lround(winding / (2.0 * M_PI)) == count);
    }
}

TEST_CASE("inner classification") {
    CHECK(is_inner_on(*make_power(2), BoundaryArcSet::full_circle()).status == InnerStatus::Inner);

    const auto check_affine = is_inner_on(*make_affine({0.5, 0}, {0.5, 0}), BoundaryArcSet::full_circle());
    CHECK(check_affine.status == InnerStatus::NotInner);
    REQUIRE(check_affine.witness.has_value());
    CHECK(std::abs(eval(make_affine({0.5, 0}, {0.5, 0}), *check_affine.witness)) < 1.0 - 1e-9);

    // factor-by-factor: blaschke o affine is non-inner, blaschke o blaschke inner
    CHECK(is_inner_on(*make_compose(random_blaschke(47, 7, 2), make_affine({0.5, 0}, {0, 0})),
                      BoundaryArcSet::full_circle())
              .status == InnerStatus::NotInner);
    CHECK(is_inner_on(*make_compose(random_blaschke(47, 8, 2), random_blaschke(47, 9, 2)),
                      BoundaryArcSet::full_circle())
              .status == InnerStatus::Inner);
}

TEST_CASE("parser round trip and examples") {
    const MapPtr f = parse_map("compose(power(2), affine(0.5+0i, 0.25-0.1i), auto(1.5, 0.2+0.3i))");
    const MapPtr g = parse_map(format_map(f));
    CHECK(structurally_equal(*f, *g));

    const MapPtr b = parse_map("blaschke(0.5; 0.3+0.2i x2, -0.1+0i)");
    CHECK(total_degree(*b) == 3);
    CHECK(structurally_equal(*b, *parse_map(format_map(b))));
}

TEST_CASE("parser reports positions") {
    try {
        parse_map("compose(power(2),\n  blaschke(0; 1.5+0i))");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("blaschke") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_map("power(2) trailing"), ParseError);
    CHECK_THROWS_AS(parse_map("compose(power(2))"), ParseError);
    CHECK_THROWS_AS(parse_map("frob(1)"), ParseError);
    CHECK_THROWS_AS(parse_map("affine(0.9+0i, 0.9+0i)"), ParseError);
}
