// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "mgiou/grad.hpp"
#include "mgiou/mgiou_minus.hpp"
#include "mgiou/shapes.hpp"

namespace mgiou {

struct FitConfig {
    int steps = 2000;
    double lr = 0.05;
    double momentum = 0.9;
    double lambda = 1.0;          // convexity weight for polygon fits
    double stop_tol = 1e-6;       // converged when loss drops below
    int snapshot_every = 100;
    std::uint64_t seed = 0;       // recorded in traces; fits are deterministic
};

struct FitTrace {
    std::vector<double> loss;     // per evaluated step, index 0 = initial state
    std::vector<double> metric;   // exact oracle IoU (fit_shape) or collision count (fit_separation)
    std::vector<std::pair<int, std::vector<double>>> snapshots;  // (step, packed params)
    std::vector<double> final_params;
    bool converged = false;
};

// Heavy-ball descent of the MGIoU loss (MGIoU+ for polygon pairs) aligning
// init to target. Rect/ellipse/cuboid sizes are optimized in log-space so
// they stay positive; cuboid quaternions are renormalized after each step.
FitTrace fit_shape(const ConvexShape& init, const ConvexShape& target, const FitConfig& cfg);

ConvexShape shape_from_trace(const ConvexShape& init_prototype, const FitTrace& trace);

// Descends the MGIoU- objective over all box vertices of the batch. The
// metric column records the oracle collision count per step.
FitTrace fit_separation(const TrajectoryBatch& batch, const FitConfig& cfg);

TrajectoryBatch batch_from_trace(const TrajectoryBatch& prototype, const FitTrace& trace);

}  // namespace mgiou
