// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mgiou/interval.hpp"

namespace mgiou {

struct Giou1dBreakdown {
    double intersection = 0;
    double union_ = 0;
    double enclosure = 0;
    double iou = 0;
    double giou = 0;
};

// Closed form (min(b,d) - max(a,c)) / (max(b,d) - min(a,c)).
double giou1d_simplified(const Interval& p, const Interval& g);

// Textbook definition: IoU minus the enclosure gap. Kept as the in-repo
// oracle for the closed form.
Giou1dBreakdown giou1d_definition(const Interval& p, const Interval& g);

}  // namespace mgiou
