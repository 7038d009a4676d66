// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

#include "mgiou/errors.hpp"
#include "mgiou/interval.hpp"
#include "mgiou/kernels.hpp"

namespace mgiou {

struct RotatedRect {
    double cx = 0, cy = 0;
    double w = 1, h = 1;     // > 0
    double angle = 0;        // radians
};

struct Cuboid {
    std::array<double, 3> center{0, 0, 0};
    std::array<double, 3> dims{1, 1, 1};     // l, w, h > 0
    std::array<double, 4> quat{1, 0, 0, 0};  // unit (w, x, y, z)
};

struct Ellipse {
    double cx = 0, cy = 0;
    double s1 = 1, s2 = 1;   // semi-axes, s1 >= s2 > 0
    double angle = 0;
};

struct Polygon {
    std::vector<std::array<double, 2>> verts;  // CCW, N >= 3
};

using ConvexShape = std::variant<RotatedRect, Cuboid, Ellipse, Polygon>;

int dimension(const ConvexShape& s);

// Throws Error(InvalidShape) when an invariant is broken.
void validate(const ConvexShape& s);

struct VertexList {
    int dim = 2;
    std::vector<std::array<double, 3>> pts;  // z unused when dim == 2
};

// Parameter-to-vertex expansion. Rect -> 4 CCW corners; cuboid -> 8 corners
// in the documented bit order (see kern::cuboid_corners); polygon -> identity.
// Ellipses have no vertices and throw.
VertexList vertices(const ConvexShape& s);

struct NormalSet {
    int dim = 2;
    std::vector<std::array<double, 3>> dirs;
    std::vector<int> provenance;  // 0 = contributed by p, 1 = by g
};

// Deduplicated canonical unit normals of the pair, a and -a identified.
NormalSet unique_normals(const ConvexShape& p, const ConvexShape& g);

// Support interval of the shape along a unit direction.
Interval project(const ConvexShape& s, const std::array<double, 3>& dir);

// Conversions to the scalar-generic kernel views (validated shapes only).
kern::Shape2<double> to_kernel2(const ConvexShape& s);
kern::Cuboid3<double> to_kernel3(const Cuboid& c);

}  // namespace mgiou
