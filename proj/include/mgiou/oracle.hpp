// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mgiou/shapes.hpp"

namespace mgiou::oracle {

using Poly = std::vector<std::array<double, 2>>;

// Shoelace area; positive for CCW input.
double polygon_area(const Poly& p);

// CCW convex hull (monotone chain), collinear points dropped.
Poly convex_hull(std::vector<std::array<double, 2>> points);

// Half-plane clipping of subject against each clipper edge (Sutherland-
// Hodgman). Both inputs convex CCW; result convex or empty.
Poly clip_convex(const Poly& subject, const Poly& clipper);

struct ExactOverlap {
    double intersection = 0;
    double union_ = 0;
    double enclosure = 0;  // convex hull of both vertex sets
    double iou = 0;
    double giou = 0;
};

// Exact IoU/GIoU of two convex CCW polygons via clipping; enclosure is the
// convex hull of both vertex sets so the reference stays rotation invariant.
ExactOverlap exact_giou_2d(const Poly& p, const Poly& g);

struct McEstimate {
    double iou = 0;
    double stderr_ = 0;
    std::uint64_t samples = 0;
};

// Monte-Carlo cuboid IoU: uniform samples in the joint axis-aligned bounding
// box, membership tests in both oriented cuboids. Deterministic for a fixed
// seed (counter-based generator). Disjoint bounding boxes short-circuit to 0.
McEstimate mc_iou_3d(const Cuboid& p, const Cuboid& g, std::uint64_t samples, std::uint64_t seed);

// True iff exact intersection area > 1e-12 (edge contact is not a collision).
bool collides(const Poly& p, const Poly& g);

}  // namespace mgiou::oracle
