// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mgiou/errors.hpp"

namespace mgiou {

using QuadBox = std::array<std::array<double, 2>, 4>;  // CCW convex quad

// T timesteps x B agents of 4-vertex boxes, with per-timestep validity masks
// and one confidence score per agent.
struct TrajectoryBatch {
    std::vector<std::vector<QuadBox>> boxes;  // [agent][timestep]
    std::vector<std::vector<int>> masks;      // [agent][timestep], 0 or 1
    std::vector<double> scores;               // [agent]

    std::size_t agents() const { return boxes.size(); }
    std::size_t timesteps() const { return boxes.empty() ? 0 : boxes[0].size(); }
};

void validate(const TrajectoryBatch& batch);

struct OverlapReport {
    double total = 0;                                   // sum_i s_i * L_i
    std::vector<double> per_agent;                      // L_i
    std::vector<std::vector<std::vector<double>>> pair_penalties;  // [t][i][j], 0 on diagonal
    int collisions = 0;  // oracle count of colliding unordered pairs over all timesteps
};

// softplus of the smallest 1D GIoU across the pair's unique normals.
double pair_penalty(const QuadBox& box_i, const QuadBox& box_j);

// Temporal pairwise overlap penalty. Ordered pairs (i, j) and (j, i) both
// accumulate, so the total is twice the triangular sum.
OverlapReport mgiou_minus(const TrajectoryBatch& batch);

namespace detail {
// Accumulation without input validation; the fit loop evaluates boxes that
// may drift slightly off the strict convexity tolerance mid-descent.
OverlapReport mgiou_minus_unchecked(const TrajectoryBatch& batch);
}  // namespace detail

}  // namespace mgiou
