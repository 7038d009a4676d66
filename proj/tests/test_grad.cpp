// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "mgiou/grad.hpp"
#include "mgiou/random_shapes.hpp"

using namespace mgiou;

namespace {

double norm_inf(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

}  // namespace

TEST_CASE("packing round trips") {
    RotatedRect r{1, 2, 3, 4, 0.5};
    auto packed = pack_params(r);
    REQUIRE(packed.size() == 5);
    CHECK(packed[2] == 3.0);
    auto back = std::get<RotatedRect>(unpack_params(ConvexShape{r}, packed));
    CHECK(back.angle == 0.5);

    Cuboid c;
    CHECK(param_count(ConvexShape{c}) == 10);
    Polygon p{{{0, 0}, {1, 0}, {0, 1}}};
    CHECK(param_count(ConvexShape{p}) == 6);
}

TEST_CASE("gradient vanishes at a coincident pair") {
    RotatedRect r{0.3, -0.2, 2, 1, 0.4};
    auto lv = loss_with_grad(LossId::Mgiou, r, r);
    CHECK(lv.value == doctest::Approx(0.0));
    CHECK(norm_inf(lv.gradient) <= 1e-10);
}

TEST_CASE("analytic gradient matches central differences") {
    gen::Rng rng(51);
    MgiouConfig cfg;
    int checked = 0;
    for (int i = 0; i < 300 && checked < 150; ++i) {
        RotatedRect p = gen::random_rect(rng);
        RotatedRect g = gen::random_rect_near(rng, p, 2.0);
        try {
            double err = check_grad(LossId::Mgiou, p, g, cfg);
            CHECK(err < 1e-4);
            ++checked;
        } catch (const Error&) {
        }
    }
    CHECK(checked >= 100);
}

TEST_CASE("central differences for the polygon regularized loss") {
    gen::Rng rng(53);
    MgiouConfig cfg;
    cfg.mode = Mode::Unstructured;
    int checked = 0;
    for (int i = 0; i < 200 && checked < 60; ++i) {
        Polygon p = gen::random_convex_polygon(rng, 6);
        Polygon g = gen::random_convex_polygon(rng, 6);
        try {
            double err = check_grad(LossId::MgiouPlus, p, g, cfg);
            CHECK(err < 1e-4);
            ++checked;
        } catch (const Error&) {
        }
    }
    CHECK(checked >= 40);
}

TEST_CASE("value consistency between double and dual paths") {
    gen::Rng rng(57);
    for (int i = 0; i < 200; ++i) {
        RotatedRect p = gen::random_rect(rng);
        RotatedRect g = gen::random_rect(rng);
        auto lv = loss_with_grad(LossId::Mgiou, p, g);
        auto params = pack_params(p);
        auto gp = pack_params(g);
        params.insert(params.end(), gp.begin(), gp.end());
        CHECK(lv.value == doctest::Approx(loss_value(LossId::Mgiou, p, g, params)).epsilon(1e-12));
    }
}

TEST_CASE("separation gradient pushes disjoint boxes apart") {
    auto a = gen::quad_from_rect(RotatedRect{0, 0, 1, 1, 0});
    auto b = gen::quad_from_rect(RotatedRect{3, 0, 1, 1, 0});
    auto lv = pair_penalty_with_grad(a, b);
    REQUIRE(lv.gradient.size() == 16);
    CHECK(norm_inf(lv.gradient) > 0.0);
    // descending the penalty moves box i left, box j right along x
    double di = lv.gradient[0] + lv.gradient[2] + lv.gradient[4] + lv.gradient[6];
    double dj = lv.gradient[8] + lv.gradient[10] + lv.gradient[12] + lv.gradient[14];
    CHECK(di > 0.0);
    CHECK(dj < 0.0);
}

TEST_CASE("separation gradient matches finite differences") {
    gen::Rng rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = gen::quad_from_rect(gen::random_rect(rng));
        auto b = gen::quad_from_rect(gen::random_rect(rng));
        auto lv = pair_penalty_with_grad(a, b);
        const double h = 1e-6;
        for (int k = 0; k < 16; ++k) {
            auto ap = a, am = a, bp = b, bm = b;
            auto& tp = (k < 8) ? ap : bp;
            auto& tm = (k < 8) ? am : bm;
            int c = (k % 8) / 2, ax = k % 2;
            tp[c][ax] += h;
            tm[c][ax] -= h;
            double num = (pair_penalty(ap, bp) - pair_penalty(am, bm)) / (2 * h);
            if (std::fabs(num - lv.gradient[k]) > 1e-4 * std::max(1.0, std::fabs(num))) {
                // tolerate kinks where one-sided slopes disagree
                double fwd = (pair_penalty(ap, bp) - pair_penalty(a, b)) / h;
                double bwd = (pair_penalty(a, b) - pair_penalty(am, bm)) / h;
                CHECK(std::fabs(fwd - bwd) > 1e-4);
            }
        }
    }
}

TEST_CASE("translation leaves the loss flat along shared directions") {
    RotatedRect p{0, 0, 2, 1, 0.3};
    RotatedRect g{1, 0.5, 1.5, 1, 0.3};
    auto lv = loss_with_grad(LossId::Mgiou, p, g);
    // moving both shapes together changes nothing: grads on centers cancel
    CHECK(lv.gradient[0] + lv.gradient[5] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(lv.gradient[1] + lv.gradient[6] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("a descent step reduces the loss") {
    gen::Rng rng(67);
    int improved = 0, total = 0;
    for (int i = 0; i < 100; ++i) {
        RotatedRect p = gen::random_rect(rng);
        RotatedRect g = gen::random_rect_near(rng, p, 1.0);
        auto lv = loss_with_grad(LossId::Mgiou, p, g);
        if (lv.value < 1e-6) continue;
        auto params = pack_params(p);
        auto gp = pack_params(g);
        params.insert(params.end(), gp.begin(), gp.end());
        double gnorm2 = 0;
        for (std::size_t k = 0; k < 5; ++k) gnorm2 += lv.gradient[k] * lv.gradient[k];
        if (gnorm2 < 1e-12) continue;
        double eta = 1e-4 / std::sqrt(gnorm2);
        for (std::size_t k = 0; k < 5; ++k) params[k] -= eta * lv.gradient[k];
        ++total;
        if (loss_value(LossId::Mgiou, p, g, params) < lv.value) ++improved;
    }
    CHECK(improved >= total * 95 / 100);
}

TEST_CASE("fixed-normals ablation changes the rect angle gradient") {
    RotatedRect p{0, 0, 2, 1, 0.3};
    RotatedRect g{0.7, 0.4, 1.5, 1.2, 0.9};
    GradOptions fixed;
    fixed.differentiate_normals = false;
    auto full = loss_with_grad(LossId::Mgiou, p, g);
    auto frozen = loss_with_grad(LossId::Mgiou, p, g, MgiouConfig{}, fixed);
    CHECK(full.value == doctest::Approx(frozen.value).epsilon(1e-12));
    CHECK(std::fabs(full.gradient[4] - frozen.gradient[4]) > 1e-6);
    // center gradients do not involve the normal directions
    CHECK(full.gradient[0] == doctest::Approx(frozen.gradient[0]).epsilon(1e-9));
}
