// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "mgiou/oracle.hpp"
#include "mgiou/random_shapes.hpp"

using namespace mgiou;
using oracle::Poly;

namespace {

Poly square(double cx, double cy, double half) {
    return {{cx - half, cy - half}, {cx + half, cy - half},
            {cx + half, cy + half}, {cx - half, cy + half}};
}

Poly rect_poly(const RotatedRect& r) {
    auto vl = vertices(r);
    Poly out;
    for (const auto& p : vl.pts) out.push_back({p[0], p[1]});
    return out;
}

}  // namespace

TEST_CASE("shoelace area") {
    CHECK(oracle::polygon_area(square(0, 0, 0.5)) == doctest::Approx(1.0));
    CHECK(oracle::polygon_area({{0, 0}, {2, 0}, {0, 2}}) == doctest::Approx(2.0));
}

TEST_CASE("convex hull drops interior and collinear points") {
    auto h = oracle::convex_hull({{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}, {1, 0}});
    CHECK(h.size() == 4);
    CHECK(oracle::polygon_area(h) == doctest::Approx(4.0));
}

TEST_CASE("clipping examples") {
    // half-overlapping unit squares: 0.5 x 1 strip
    auto strip = oracle::clip_convex(square(0, 0, 0.5), square(0.5, 0, 0.5));
    CHECK(oracle::polygon_area(strip) == doctest::Approx(0.5).epsilon(1e-14));

    // unit square against its 45-degree copy: regular octagon, area 2(sqrt 2 - 1)
    auto oct = oracle::clip_convex(square(0, 0, 0.5), rect_poly(RotatedRect{0, 0, 1, 1, M_PI / 4}));
    CHECK(oct.size() == 8);
    CHECK(oracle::polygon_area(oct) == doctest::Approx(0.8284271247461903).epsilon(1e-12));

    // disjoint
    CHECK(oracle::clip_convex(square(0, 0, 0.5), square(5, 5, 0.5)).empty());
}

TEST_CASE("exact giou examples") {
    auto same = oracle::exact_giou_2d(square(0, 0, 0.5), square(0, 0, 0.5));
    CHECK(same.iou == doctest::Approx(1.0));
    CHECK(same.giou == doctest::Approx(1.0));

    auto oct = oracle::exact_giou_2d(square(0, 0, 0.5), rect_poly(RotatedRect{0, 0, 1, 1, M_PI / 4}));
    CHECK(oct.iou == doctest::Approx(0.7071067811865478).epsilon(1e-12));

    auto apart = oracle::exact_giou_2d(square(0, 0, 0.5), square(3, 0, 0.5));
    CHECK(apart.iou == 0.0);
    CHECK(apart.giou < 0.0);

    CHECK_THROWS_AS(oracle::exact_giou_2d({{0, 0}, {1, 0}, {2, 0}}, square(0, 0, 0.5)), Error);
}

TEST_CASE("exact giou invariances") {
    gen::Rng rng(13);
    for (int i = 0; i < 300; ++i) {
        auto a = rect_poly(gen::random_rect(rng));
        auto b = rect_poly(gen::random_rect(rng));
        auto ab = oracle::exact_giou_2d(a, b);
        auto ba = oracle::exact_giou_2d(b, a);
        CHECK(ab.giou == doctest::Approx(ba.giou).epsilon(1e-10));
        CHECK(ab.iou >= 0.0);
        CHECK(ab.iou <= 1.0 + 1e-12);
        CHECK(ab.giou <= ab.iou + 1e-12);
        CHECK(ab.giou > -1.0);

        double c = std::cos(0.6), s = std::sin(0.6);
        auto rot = [&](Poly p) {
            for (auto& v : p) v = {c * v[0] - s * v[1], s * v[0] + c * v[1]};
            return p;
        };
        auto r = oracle::exact_giou_2d(rot(a), rot(b));
        CHECK(r.giou == doctest::Approx(ab.giou).epsilon(1e-9));
    }
}

TEST_CASE("monte carlo cuboid iou") {
    Cuboid unit;
    CHECK(oracle::mc_iou_3d(unit, unit, 100000, 1).iou == doctest::Approx(1.0));

    Cuboid far = unit;
    far.center = {10, 0, 0};
    CHECK(oracle::mc_iou_3d(unit, far, 100000, 1).iou == 0.0);

    // unit cubes shifted by half: overlap 0.5, union 1.5
    Cuboid half = unit;
    half.center = {0.5, 0, 0};
    auto est = oracle::mc_iou_3d(unit, half, 200000, 7);
    CHECK(std::fabs(est.iou - 1.0 / 3) <= 3 * est.stderr_ + 1e-3);

    // deterministic for a fixed seed
    auto again = oracle::mc_iou_3d(unit, half, 200000, 7);
    CHECK(est.iou == again.iou);

    CHECK_THROWS_AS(oracle::mc_iou_3d(unit, half, 100, 1), Error);
}

TEST_CASE("monte carlo error shrinks with sample count") {
    Cuboid a, b;
    b.center = {0.3, 0.2, 0.1};
    double coarse = oracle::mc_iou_3d(a, b, 10000, 3).stderr_;
    double fine = oracle::mc_iou_3d(a, b, 1000000, 3).stderr_;
    CHECK(fine < coarse / 5);
}

TEST_CASE("collision predicate") {
    CHECK(oracle::collides(square(0, 0, 0.5), square(0.2, 0.1, 0.5)));
    CHECK_FALSE(oracle::collides(square(0, 0, 0.5), square(3, 0, 0.5)));
    // edge contact only
    CHECK_FALSE(oracle::collides(square(0, 0, 0.5), square(1.0, 0, 0.5)));
}
