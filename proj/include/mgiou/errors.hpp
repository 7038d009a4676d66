// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mgiou {

enum class Errc {
    InvalidShape,
    EllipseHasNoVertices,
    DimensionMismatch,
    DegenerateEdge,
    TooFewVertices,
    NotPlanar,
    ModeShapeMismatch,
    ShapeMismatch,
    EmptyBatch,
    ZeroAreaInput,
    KinkDetected,
    DivergenceDetected,
    InputError,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace mgiou
