// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "mgiou/errors.hpp"

namespace mgiou {

// 1D projection [lo, hi], lo <= hi, finite.
struct Interval {
    double lo = 0, hi = 0;

    double width() const { return hi - lo; }
};

inline void validate(const Interval& iv) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.hi < iv.lo)
        fail(Errc::InvalidShape, "interval must be finite with lo <= hi");
}

}  // namespace mgiou
