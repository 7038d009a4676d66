// SPDX-License-Identifier: Apache-2.0
#include "mgiou/random_shapes.hpp"

#include <algorithm>
#include <cmath>

#include "mgiou/oracle.hpp"

namespace mgiou::gen {

namespace {
double uni(Rng& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}
}  // namespace

Interval random_interval(Rng& rng, double lo, double hi) {
    double a = uni(rng, lo, hi), b = uni(rng, lo, hi);
    if (b < a) std::swap(a, b);
    return {a, b};
}

RotatedRect random_rect(Rng& rng) {
    RotatedRect r;
    r.cx = uni(rng, -5, 5);
    r.cy = uni(rng, -5, 5);
    r.w = uni(rng, 0.5, 3);
    r.h = uni(rng, 0.5, 3);
    r.angle = uni(rng, 0, M_PI);
    return r;
}

RotatedRect random_rect_near(Rng& rng, const RotatedRect& base, double max_diagonals) {
    RotatedRect r = random_rect(rng);
    double diag = std::hypot(base.w, base.h);
    double rad = uni(rng, 0, max_diagonals * diag);
    double th = uni(rng, 0, 2 * M_PI);
    r.cx = base.cx + rad * std::cos(th);
    r.cy = base.cy + rad * std::sin(th);
    return r;
}

Polygon random_convex_polygon(Rng& rng, int max_pts) {
    double cx = uni(rng, -3, 3), cy = uni(rng, -3, 3);
    for (;;) {
        int n = std::uniform_int_distribution<int>(4, max_pts)(rng);
        std::vector<std::array<double, 2>> pts;
        for (int i = 0; i < n; ++i) pts.push_back({cx + uni(rng, -2, 2), cy + uni(rng, -2, 2)});
        auto hull = oracle::convex_hull(std::move(pts));
        if (hull.size() >= 3 && oracle::polygon_area(hull) > 0.1) return Polygon{hull};
    }
}

Ellipse random_ellipse(Rng& rng) {
    Ellipse e;
    e.cx = uni(rng, -5, 5);
    e.cy = uni(rng, -5, 5);
    e.s1 = uni(rng, 1, 3);
    e.s2 = uni(rng, 0.3, e.s1);
    e.angle = uni(rng, 0, M_PI);
    return e;
}

Cuboid random_cuboid(Rng& rng) {
    Cuboid c;
    for (auto& v : c.center) v = uni(rng, -5, 5);
    for (auto& d : c.dims) d = uni(rng, 0.5, 3);
    double n = 0;
    std::normal_distribution<double> gauss(0, 1);
    for (auto& q : c.quat) {
        q = gauss(rng);
        n += q * q;
    }
    n = std::sqrt(n);
    for (auto& q : c.quat) q /= n;
    return c;
}

QuadBox quad_from_rect(const RotatedRect& r) {
    auto corners = kern::rect_corners(r.cx, r.cy, r.w, r.h, r.angle);
    QuadBox b;
    for (int i = 0; i < 4; ++i) b[std::size_t(i)] = {corners[std::size_t(i)].x, corners[std::size_t(i)].y};
    return b;
}

TrajectoryBatch random_trajectory(Rng& rng, int agents, int timesteps, bool overlapping) {
    TrajectoryBatch batch;
    double ox = uni(rng, -5, 5), oy = uni(rng, -5, 5);
    for (int i = 0; i < agents; ++i) {
        RotatedRect box;
        box.w = uni(rng, 0.8, 2);
        box.h = uni(rng, 0.8, 2);
        box.angle = uni(rng, 0, M_PI);
        double x0, y0;
        if (overlapping) {
            // offset ring: boxes overlap partially instead of nesting, which
            // would park the min-normal objective on a flat region
            double rad = uni(rng, 0.4, 1.2), th = uni(rng, 0, 2 * M_PI);
            x0 = ox + rad * std::cos(th);
            y0 = oy + rad * std::sin(th);
        } else {
            x0 = uni(rng, -10, 10);
            y0 = uni(rng, -10, 10);
        }
        double vx = uni(rng, -0.5, 0.5), vy = uni(rng, -0.5, 0.5);
        std::vector<QuadBox> boxes;
        std::vector<int> mask;
        for (int t = 0; t < timesteps; ++t) {
            box.cx = x0 + vx * t + uni(rng, -0.05, 0.05);
            box.cy = y0 + vy * t + uni(rng, -0.05, 0.05);
            boxes.push_back(quad_from_rect(box));
            mask.push_back(1);
        }
        batch.boxes.push_back(std::move(boxes));
        batch.masks.push_back(std::move(mask));
        batch.scores.push_back(uni(rng, 0.2, 1.0));
    }
    return batch;
}

}  // namespace mgiou::gen
