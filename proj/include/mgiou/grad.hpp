// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "mgiou/mgiou.hpp"
#include "mgiou/mgiou_minus.hpp"
#include "mgiou/shapes.hpp"

namespace mgiou {

enum class LossId { Mgiou, MgiouPlus, MgiouMinusPair };

// Scalar loss plus its gradient over the packed parameters of both shapes.
// Layouts: rect [cx, cy, w, h, angle]; ellipse [cx, cy, s1, s2, angle];
// cuboid [cx, cy, cz, l, w, h, qw, qx, qy, qz] (quaternion renormalized
// inside the graph); polygon: vertices row-major. The pair gradient is the
// concatenation [params(p), params(g)].
struct LossValue {
    double value = 0;
    std::vector<double> gradient;
};

std::size_t param_count(const ConvexShape& s);
std::vector<double> pack_params(const ConvexShape& s);
// Rebuild a shape of the prototype's kind from packed parameters.
ConvexShape unpack_params(const ConvexShape& prototype, const std::vector<double>& params);

struct GradOptions {
    // When false, normal directions are held fixed at their current values
    // and excluded from the gradient (ablation switch).
    bool differentiate_normals = true;
};

LossValue loss_with_grad(LossId id, const ConvexShape& p, const ConvexShape& g,
                         const MgiouConfig& cfg = {}, const GradOptions& opt = {});

// Same loss evaluated from packed parameters on the plain double path.
double loss_value(LossId id, const ConvexShape& proto_p, const ConvexShape& proto_g,
                  const std::vector<double>& params, const MgiouConfig& cfg = {});

// pair_penalty with gradient over the 16 vertex coordinates [box_i, box_j].
LossValue pair_penalty_with_grad(const QuadBox& box_i, const QuadBox& box_j);

// Central-difference verification; returns the max per-coordinate relative
// error |analytic - numeric| / max(1, |numeric|). Configurations whose
// one-sided differences disagree (a min/max tie within h) are jittered and
// retried; throws KinkDetected after 5 failed attempts.
double check_grad(LossId id, const ConvexShape& p, const ConvexShape& g,
                  const MgiouConfig& cfg = {}, double h = 1e-5, std::uint64_t jitter_seed = 0);

}  // namespace mgiou
