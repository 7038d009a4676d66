// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "mgiou/mgiou.hpp"
#include "mgiou/oracle.hpp"
#include "mgiou/random_shapes.hpp"

using namespace mgiou;

namespace {

// Straight-line transcription of the per-edge signed-distance sums, kept
// independent of the kernel implementation.
double convexity_brute(const std::vector<std::array<double, 2>>& p) {
    const std::size_t n = p.size();
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double ex = p[(i + 1) % n][0] - p[i][0];
        double ey = p[(i + 1) % n][1] - p[i][1];
        double nx = -ey, ny = ex;
        double s1 = 0, s2 = 0;
        for (std::size_t j = 0; j < n; ++j) {
            double d = (p[j][0] - p[i][0]) * nx + (p[j][1] - p[i][1]) * ny;
            s1 += std::max(0.0, -d);
            s2 += std::max(0.0, d);
        }
        total += std::min(s1, s2);
    }
    return total / double(n);
}

const std::vector<std::array<double, 2>> kReflexQuad{{0, 0}, {2, 0}, {1, 0.4}, {0, 2}};

}  // namespace

TEST_CASE("identical unit squares") {
    RotatedRect sq{0, 0, 1, 1, 0};
    auto r = mgiou::mgiou(sq, sq);
    CHECK(r.mgiou == doctest::Approx(1.0));
    CHECK(r.loss == doctest::Approx(0.0));
    CHECK(r.per_normal.size() == 2);
}

TEST_CASE("unit squares shifted half a width") {
    RotatedRect p{0.5, 0.5, 1, 1, 0};  // corner at origin
    RotatedRect g{1.0, 0.5, 1, 1, 0};
    auto r = mgiou::mgiou(p, g);
    CHECK(r.mgiou == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(r.loss == doctest::Approx(1.0 / 6).epsilon(1e-12));
}

TEST_CASE("far separated squares") {
    RotatedRect p{0.5, 0.5, 1, 1, 0};
    RotatedRect g{100.5, 100.5, 1, 1, 0};
    auto r = mgiou::mgiou(p, g);
    CHECK(r.mgiou == doctest::Approx(-99.0 / 101).epsilon(1e-12));
    CHECK(r.loss == doctest::Approx((1.0 + 99.0 / 101) / 2).epsilon(1e-12));
}

TEST_CASE("cuboid pair") {
    Cuboid c;
    auto r = mgiou::mgiou(c, c);
    CHECK(r.per_normal.size() == 3);
    CHECK(r.loss == doctest::Approx(0.0));
    Cuboid shifted = c;
    shifted.center = {0.5, 0, 0};
    CHECK(mgiou::mgiou(c, shifted).mgiou == doctest::Approx((0.5 / 1.5 + 1 + 1) / 3).epsilon(1e-12));
}

TEST_CASE("convexity loss") {
    std::vector<std::array<double, 2>> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(convexity_loss(square) == 0.0);
    std::vector<std::array<double, 2>> tri{{0, 0}, {3, 1}, {1, 2}};
    CHECK(convexity_loss(tri) == 0.0);
    // value frozen from the brute-force transcription
    CHECK(convexity_brute(kReflexQuad) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(convexity_loss(kReflexQuad) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(convexity_loss(kReflexQuad) > 0.0);
    CHECK_THROWS_AS(convexity_loss({{0, 0}, {1, 1}}), Error);
}

TEST_CASE("convexity invariances") {
    gen::Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        Polygon p = gen::random_convex_polygon(rng);
        CHECK(convexity_loss(p.verts) == 0.0);
    }
    // translation, rotation, linear scaling on a reflex input
    auto moved = kReflexQuad;
    for (auto& v : moved) {
        v[0] += 4;
        v[1] -= 2;
    }
    CHECK(convexity_loss(moved) == doctest::Approx(0.5).epsilon(1e-10));
    double c = std::cos(0.9), s = std::sin(0.9);
    auto rot = kReflexQuad;
    for (auto& v : rot) v = {c * v[0] - s * v[1], s * v[0] + c * v[1]};
    CHECK(convexity_loss(rot) == doctest::Approx(0.5).epsilon(1e-10));
    // quadratic in scale: the hinge distances use the unnormalized edge normal
    auto big = kReflexQuad;
    for (auto& v : big) {
        v[0] *= 3;
        v[1] *= 3;
    }
    CHECK(convexity_loss(big) == doctest::Approx(4.5).epsilon(1e-10));
}

TEST_CASE("mgiou_plus modes") {
    Polygon pent;
    for (int k = 0; k < 5; ++k)
        pent.verts.push_back({std::cos(2 * M_PI * k / 5), std::sin(2 * M_PI * k / 5)});
    MgiouConfig cfg;
    cfg.mode = Mode::Unstructured;
    auto same = mgiou_plus(pent, pent, cfg);
    CHECK(same.loss == doctest::Approx(0.0));
    CHECK(same.convexity == doctest::Approx(0.0));

    Polygon reflex{kReflexQuad};
    Polygon hull{{{0, 0}, {2, 0}, {0, 2}}};
    cfg.lambda = 0;
    auto plain = mgiou_plus(reflex, hull, cfg);
    CHECK(plain.loss == doctest::Approx(mgiou::mgiou(reflex, hull).loss));
    cfg.lambda = 1;
    auto reg = mgiou_plus(reflex, hull, cfg);
    CHECK(reg.loss == doctest::Approx(plain.loss + 0.5).epsilon(1e-12));

    // structured mode rejects mixed kinds
    CHECK_THROWS_AS(mgiou_plus(RotatedRect{}, Ellipse{}, MgiouConfig{}), Error);
    // unstructured mode needs polygons
    CHECK_THROWS_AS(mgiou_plus(RotatedRect{}, hull, cfg), Error);
}

TEST_CASE("metric-style properties on random rect pairs") {
    gen::Rng rng(23);
    for (int i = 0; i < 2000; ++i) {
        RotatedRect p = gen::random_rect(rng);
        RotatedRect g = gen::random_rect(rng);
        auto r = mgiou::mgiou(p, g);
        CHECK(r.loss >= 0.0);
        CHECK(r.loss < 1.0);
        CHECK(r.mgiou > -1.0);
        CHECK(r.mgiou <= 1.0);
        CHECK(r.loss == doctest::Approx(mgiou::mgiou(g, p).loss).epsilon(1e-12));
        CHECK(r.loss == doctest::Approx((1.0 - r.mgiou) / 2).epsilon(1e-15));
        double mean = 0;
        for (const auto& [dir, v] : r.per_normal) mean += v;
        CHECK(r.mgiou == doctest::Approx(mean / double(r.per_normal.size())).epsilon(1e-15));
    }
}

TEST_CASE("mgiou_loss matches the full result exactly") {
    gen::Rng rng(29);
    for (int i = 0; i < 500; ++i) {
        ConvexShape p, g;
        switch (i % 4) {
            case 0: p = gen::random_rect(rng); g = gen::random_rect(rng); break;
            case 1: p = gen::random_convex_polygon(rng, 7); g = gen::random_rect(rng); break;
            case 2: p = gen::random_ellipse(rng); g = gen::random_ellipse(rng); break;
            default: p = gen::random_cuboid(rng); g = gen::random_cuboid(rng); break;
        }
        CHECK(mgiou_loss(p, g) == mgiou::mgiou(p, g).loss);
    }
}

TEST_CASE("unstructured pairs use both polygons' normals") {
    // no triangle edge is axis parallel, so nothing collapses with the quad
    Polygon tri{{{0, 0}, {1, 0.2}, {0.4, 1}}};
    Polygon quad{{{2, 2}, {3, 2}, {3, 3}, {2, 3}}};
    auto r = mgiou::mgiou(tri, quad);
    CHECK(r.per_normal.size() == 5);  // 3 + 2 after dedup of the quad's parallels

    // an axis-parallel edge merges with the quad's axis normal
    Polygon axis_tri{{{0, 0}, {1, 0}, {0.5, 1}}};
    CHECK(mgiou::mgiou(axis_tri, quad).per_normal.size() == 4);
}
