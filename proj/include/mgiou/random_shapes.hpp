// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "mgiou/interval.hpp"
#include "mgiou/mgiou_minus.hpp"
#include "mgiou/shapes.hpp"

namespace mgiou::gen {

using Rng = std::mt19937_64;

Interval random_interval(Rng& rng, double lo = -10, double hi = 10);

// Centers in [-5, 5]^2, sides in [0.5, 3], angle in [0, pi).
RotatedRect random_rect(Rng& rng);

// Same size/angle law, center within max_diagonals box diagonals of base.
RotatedRect random_rect_near(Rng& rng, const RotatedRect& base, double max_diagonals = 2.0);

// Convex hull of 4..max_pts points in a [-2, 2]^2 window around a random center.
Polygon random_convex_polygon(Rng& rng, int max_pts = 10);

Ellipse random_ellipse(Rng& rng);

Cuboid random_cuboid(Rng& rng);

QuadBox quad_from_rect(const RotatedRect& r);

// Linearly moving boxes with per-step noise. When overlapping is set, all
// agents start around a common point so their boxes intersect.
TrajectoryBatch random_trajectory(Rng& rng, int agents, int timesteps, bool overlapping);

}  // namespace mgiou::gen
