// SPDX-License-Identifier: Apache-2.0
#include "mgiou/mgiou_minus.hpp"

#include <algorithm>
#include <cmath>

#include "mgiou/kernels.hpp"
#include "mgiou/mgiou.hpp"
#include "mgiou/oracle.hpp"

namespace mgiou {

namespace {

constexpr double kQuadConvexityTol = 1e-9;

std::vector<Vec2<double>> to_verts(const QuadBox& b) {
    return {{b[0][0], b[0][1]}, {b[1][0], b[1][1]}, {b[2][0], b[2][1]}, {b[3][0], b[3][1]}};
}

// Clipping needs CCW input; boxes may arrive in either winding.
oracle::Poly to_poly(const QuadBox& b) {
    oracle::Poly p{b[0], b[1], b[2], b[3]};
    if (oracle::polygon_area(p) < 0) std::reverse(p.begin(), p.end());
    return p;
}

}  // namespace

void validate(const TrajectoryBatch& batch) {
    if (batch.agents() < 2) fail(Errc::EmptyBatch, "trajectory batch needs at least 2 agents");
    if (batch.masks.size() != batch.agents() || batch.scores.size() != batch.agents())
        fail(Errc::ShapeMismatch, "mask/score arrays must match the agent count");
    const std::size_t T = batch.timesteps();
    for (std::size_t i = 0; i < batch.agents(); ++i) {
        if (batch.boxes[i].size() != T || batch.masks[i].size() != T)
            fail(Errc::ShapeMismatch, "ragged trajectory batch");
        if (!std::isfinite(batch.scores[i])) fail(Errc::ShapeMismatch, "scores must be finite");
        for (const auto& box : batch.boxes[i]) {
            std::vector<std::array<double, 2>> poly(box.begin(), box.end());
            if (convexity_loss(poly) > kQuadConvexityTol)
                fail(Errc::ShapeMismatch, "trajectory box is not a convex quadrilateral");
        }
    }
}

double pair_penalty(const QuadBox& box_i, const QuadBox& box_j) {
    return kern::pair_penalty(to_verts(box_i), to_verts(box_j));
}

OverlapReport mgiou_minus(const TrajectoryBatch& batch) {
    validate(batch);
    return detail::mgiou_minus_unchecked(batch);
}

OverlapReport detail::mgiou_minus_unchecked(const TrajectoryBatch& batch) {
    const std::size_t B = batch.agents();
    const std::size_t T = batch.timesteps();

    OverlapReport report;
    report.per_agent.assign(B, 0.0);
    report.pair_penalties.assign(T, std::vector<std::vector<double>>(B, std::vector<double>(B, 0.0)));

    // t-major, then i, then j: fixed accumulation order.
    std::vector<std::vector<double>> loss_ti(T, std::vector<double>(B, 0.0));
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t i = 0; i < B; ++i)
            for (std::size_t j = 0; j < B; ++j) {
                if (i == j) continue;
                double k = pair_penalty(batch.boxes[i][t], batch.boxes[j][t]);
                report.pair_penalties[t][i][j] = k;
                loss_ti[t][i] += k;
                if (i < j && oracle::collides(to_poly(batch.boxes[i][t]), to_poly(batch.boxes[j][t])))
                    ++report.collisions;
            }
    }
    for (std::size_t i = 0; i < B; ++i) {
        for (std::size_t t = 0; t < T; ++t) report.per_agent[i] += batch.masks[i][t] * loss_ti[t][i];
        report.total += batch.scores[i] * report.per_agent[i];
    }
    return report;
}

}  // namespace mgiou
