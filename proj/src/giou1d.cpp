// SPDX-License-Identifier: Apache-2.0
#include "mgiou/giou1d.hpp"

#include <algorithm>
#include <cmath>

#include "mgiou/kernels.hpp"

namespace mgiou {

double giou1d_simplified(const Interval& p, const Interval& g) {
    validate(p);
    validate(g);
    return kern::giou1d(p.lo, p.hi, g.lo, g.hi);
}

Giou1dBreakdown giou1d_definition(const Interval& p, const Interval& g) {
    validate(p);
    validate(g);
    Giou1dBreakdown b;
    b.enclosure = std::max(p.hi, g.hi) - std::min(p.lo, g.lo);
    if (b.enclosure <= kern::kPointEnclosure) {
        // Two coincident point intervals: limit of identical shrinking intervals.
        b.iou = 1.0;
        b.giou = 1.0;
        return b;
    }
    b.intersection = std::max(0.0, std::min(p.hi, g.hi) - std::max(p.lo, g.lo));
    b.union_ = p.width() + g.width() - b.intersection;
    b.iou = b.union_ > 0 ? b.intersection / b.union_ : 0.0;
    b.giou = b.iou - (b.enclosure - b.union_) / b.enclosure;
    return b;
}

}  // namespace mgiou
