// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "mgiou/mgiou.hpp"
#include "mgiou/mgiou_minus.hpp"
#include "mgiou/shapes.hpp"

namespace mgiou {

// Shape schema: {"kind":"rect"|"cuboid"|"ellipse"|"polygon", ...}. Angles in
// radians, quaternions (w, x, y, z), polygon vertices CCW.
nlohmann::json shape_to_json(const ConvexShape& s);
ConvexShape shape_from_json(const nlohmann::json& j);

// {"agents":[{"boxes":[[[x,y] x4] xT], "mask":[0|1 xT], "score": s}]}
nlohmann::json batch_to_json(const TrajectoryBatch& b);
TrajectoryBatch batch_from_json(const nlohmann::json& j);

nlohmann::json result_to_json(const MgiouResult& r);
nlohmann::json report_to_json(const OverlapReport& r);

}  // namespace mgiou
