// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "mgiou/shapes.hpp"

namespace mgiou {

enum class Mode { Structured, Unstructured };

struct MgiouConfig {
    double lambda = 1.0;  // convexity weight, >= 0
    Mode mode = Mode::Structured;
};

struct MgiouResult {
    double mgiou = 0;      // in (-1, 1]
    double loss = 0;       // (1 - mgiou) / 2, plus lambda * convexity for MGIoU+
    double convexity = 0;  // 0 in structured mode
    std::vector<std::pair<std::array<double, 3>, double>> per_normal;  // (direction, GIoU 1D)
};

// Mean 1D GIoU over the pair's unique normals; loss = (1 - mgiou) / 2.
MgiouResult mgiou(const ConvexShape& p, const ConvexShape& g);

// Loss value only, skipping the per-normal breakdown; equals mgiou(p, g).loss
// exactly and avoids its allocations on the 2D evaluation path.
double mgiou_loss(const ConvexShape& p, const ConvexShape& g);

// Same mean evaluated on a caller-supplied fixed normal set.
double mgiou_on_normals(const ConvexShape& p, const ConvexShape& g, const NormalSet& normals);

// Per-edge hinge penalty, zero iff the polygon is convex.
double convexity_loss(const std::vector<std::array<double, 2>>& poly);

// MGIoU plus lambda-weighted convexity of the predicted polygon.
MgiouResult mgiou_plus(const ConvexShape& p, const ConvexShape& g, const MgiouConfig& cfg);

}  // namespace mgiou
