// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace mgiou::audit {

struct SuiteReport {
    std::string name;
    bool pass = false;
    double measured = 0;  // suite-specific headline number
    std::string detail;   // per-property lines, worst witnesses
};

// Appendix Step 6 made executable: |closed form - definition| over random
// interval pairs; measured = max absolute difference, pass at 1e-12.
SuiteReport equivalence(std::uint64_t trials, std::uint64_t seed);

// Non-negativity, identity, symmetry, scale invariance and fixed-axis
// triangle inequality over random rotated-rect instances; measured =
// violation count.
SuiteReport metric(std::uint64_t trials, std::uint64_t seed);

// check_grad over random instances of each loss; measured = max relative
// error, pass below 1e-4.
SuiteReport gradient(std::uint64_t trials, std::uint64_t seed);

// Pearson r between MGIoU and exact IoU on near-overlapping rect pairs;
// measured = r, pass at 0.8.
SuiteReport correlation(std::uint64_t trials, std::uint64_t seed);

struct BenchReport {
    double mgiou_ms = 0;
    double oracle_ms = 0;
    double ratio = 0;  // oracle_ms / mgiou_ms
};

// Median-of-repeats wall time of the MGIoU loss vs the exact clipping GIoU
// oracle over the same pair set. shape_kind: "rect" or "polygon".
BenchReport bench(std::size_t pairs, const std::string& shape_kind, int repeats, std::uint64_t seed);

}  // namespace mgiou::audit
