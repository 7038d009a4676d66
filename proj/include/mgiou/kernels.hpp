// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scalar-generic evaluation kernels. Every loss is written once against a
// scalar type T (double for plain evaluation, Dual for gradients). Branch
// decisions compare plain values, so the double and Dual paths follow the
// same control flow and agree to the last bit on the value.

#include <cstddef>
#include <utility>
#include <vector>

#include "mgiou/dual.hpp"
#include "mgiou/errors.hpp"
#include "mgiou/vec.hpp"

namespace mgiou::kern {

inline constexpr double kParallelTol = 1e-9;    // |dot| > 1 - tol => same axis
inline constexpr double kDegenerateLen = 1e-12;
inline constexpr double kPointEnclosure = 1e-15;

// ---- 2D shape view ---------------------------------------------------------

// Either a vertex list or an ellipse (center, semi-axes, angle).
template <class T>
struct Shape2 {
    bool is_ellipse = false;
    std::vector<Vec2<T>> verts;
    Vec2<T> center{};
    T s1{}, s2{}, angle{};
};

template <class T>
Shape2<T> make_polygon2(std::vector<Vec2<T>> verts) {
    Shape2<T> s;
    s.verts = std::move(verts);
    return s;
}

template <class T>
Shape2<T> make_ellipse2(Vec2<T> c, T s1, T s2, T angle) {
    Shape2<T> s;
    s.is_ellipse = true;
    s.center = c;
    s.s1 = s1;
    s.s2 = s2;
    s.angle = angle;
    return s;
}

// CCW corners of a rotated rectangle: (+,+), (-,+), (-,-), (+,-) in the
// body frame, rotated by angle and translated to the center.
template <class T>
std::vector<Vec2<T>> rect_corners(const T& cx, const T& cy, const T& w, const T& h, const T& angle) {
    using std::cos, std::sin;
    T c = cos(angle), s = sin(angle);
    T hw = T(0.5) * w, hh = T(0.5) * h;
    auto place = [&](const T& lx, const T& ly) -> Vec2<T> {
        return {cx + c * lx - s * ly, cy + s * lx + c * ly};
    };
    return {place(hw, hh), place(T(0.0) - hw, hh), place(T(0.0) - hw, T(0.0) - hh), place(hw, T(0.0) - hh)};
}

// ---- normals ---------------------------------------------------------------

// Flip so the first component larger than kDegenerateLen in magnitude is
// positive; makes normal sets order- and sign-deterministic.
template <class T>
Vec2<T> canonical(const Vec2<T>& n) {
    double x = scalar_value(n.x), y = scalar_value(n.y);
    double lead = std::fabs(x) > kDegenerateLen ? x : y;
    return lead < 0.0 ? Vec2<T>{T(0.0) - n.x, T(0.0) - n.y} : n;
}

template <class T>
Vec3<T> canonical(const Vec3<T>& n) {
    double lead = scalar_value(n.x);
    if (std::fabs(lead) <= kDegenerateLen) lead = scalar_value(n.y);
    if (std::fabs(lead) <= kDegenerateLen) lead = scalar_value(n.z);
    return lead < 0.0 ? Vec3<T>{T(0.0) - n.x, T(0.0) - n.y, T(0.0) - n.z} : n;
}

template <class V>
bool parallel(const V& a, const V& b) {
    return std::fabs(scalar_value(dot(a, b))) > 1.0 - kParallelTol;
}

// Appends the canonical unit normals of one 2D shape. Edge normals for
// polygons, semi-axis directions for ellipses.
template <class T>
void append_normals(const Shape2<T>& s, std::vector<Vec2<T>>& out) {
    using std::cos, std::sin;
    if (s.is_ellipse) {
        T c = cos(s.angle), sn = sin(s.angle);
        out.push_back(canonical(Vec2<T>{c, sn}));
        out.push_back(canonical(Vec2<T>{T(0.0) - sn, c}));
        return;
    }
    const std::size_t n = s.verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        using std::sqrt;
        Vec2<T> e = s.verts[(i + 1) % n] - s.verts[i];
        T len = sqrt(dot(e, e));
        if (scalar_value(len) < kDegenerateLen)
            fail(Errc::DegenerateEdge, "polygon edge shorter than 1e-12");
        out.push_back(canonical(Vec2<T>{(T(0.0) - e.y) / len, e.x / len}));
    }
}

// Keeps the first representative of each parallel class, in arrival order.
template <class V>
std::vector<V> dedup_normals(const std::vector<V>& cand, std::vector<std::size_t>* kept_idx = nullptr) {
    std::vector<V> out;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        bool dup = false;
        for (const auto& u : out)
            if (parallel(u, cand[i])) { dup = true; break; }
        if (!dup) {
            out.push_back(cand[i]);
            if (kept_idx) kept_idx->push_back(i);
        }
    }
    return out;
}

template <class T>
std::vector<Vec2<T>> unique_normals2(const Shape2<T>& p, const Shape2<T>& g,
                                     std::vector<std::size_t>* kept_idx = nullptr,
                                     std::size_t* from_p = nullptr) {
    std::vector<Vec2<T>> cand;
    append_normals(p, cand);
    if (from_p) *from_p = cand.size();
    append_normals(g, cand);
    return dedup_normals(cand, kept_idx);
}

// ---- projections -----------------------------------------------------------

template <class T>
std::pair<T, T> project2(const Shape2<T>& s, const Vec2<T>& dir) {
    if (s.is_ellipse) {
        using std::cos, std::sin, std::sqrt;
        T c = cos(s.angle), sn = sin(s.angle);
        T a1 = s.s1 * (dir.x * c + dir.y * sn);
        T a2 = s.s2 * (T(0.0) - dir.x * sn + dir.y * c);
        T r = sqrt(a1 * a1 + a2 * a2);
        T mid = dot(s.center, dir);
        return {mid - r, mid + r};
    }
    T lo = dot(s.verts[0], dir), hi = lo;
    for (std::size_t i = 1; i < s.verts.size(); ++i) {
        T d = dot(s.verts[i], dir);
        lo = vmin(lo, d);
        hi = vmax(hi, d);
    }
    return {lo, hi};
}

template <class T, class V>
std::pair<T, T> project_verts(const std::vector<V>& verts, const V& dir) {
    T lo = dot(verts[0], dir), hi = lo;
    for (std::size_t i = 1; i < verts.size(); ++i) {
        T d = dot(verts[i], dir);
        lo = vmin(lo, d);
        hi = vmax(hi, d);
    }
    return {lo, hi};
}

// ---- 1D GIoU ---------------------------------------------------------------

// (min(b,d) - max(a,c)) / (max(b,d) - min(a,c)); two coincident point
// intervals return 1 (the limit of identical shrinking intervals).
template <class T>
T giou1d(const T& a, const T& b, const T& c, const T& d) {
    T encl = vmax(b, d) - vmin(a, c);
    if (scalar_value(encl) <= kPointEnclosure) return T(1.0);
    return (vmin(b, d) - vmax(a, c)) / encl;
}

// ---- MGIoU (2D) ------------------------------------------------------------

template <class T>
struct MgiouParts {
    T mean{};
    std::vector<std::pair<Vec2<T>, T>> per_normal;
};

template <class T>
MgiouParts<T> mgiou2(const Shape2<T>& p, const Shape2<T>& g) {
    auto normals = unique_normals2(p, g);
    MgiouParts<T> out;
    out.mean = T(0.0);
    for (const auto& a : normals) {
        auto [plo, phi] = project2(p, a);
        auto [glo, ghi] = project2(g, a);
        T v = giou1d(plo, phi, glo, ghi);
        out.mean += v;
        out.per_normal.emplace_back(a, v);
    }
    out.mean /= T(double(normals.size()));
    return out;
}

// Same loop over a caller-supplied normal set (fixed-axis evaluation).
template <class T>
T mgiou2_on_normals(const Shape2<T>& p, const Shape2<T>& g, const std::vector<Vec2<T>>& normals) {
    T sum(0.0);
    for (const auto& a : normals) {
        auto [plo, phi] = project2(p, a);
        auto [glo, ghi] = project2(g, a);
        sum += giou1d(plo, phi, glo, ghi);
    }
    return sum / T(double(normals.size()));
}

// ---- MGIoU (3D cuboids) ----------------------------------------------------

template <class T>
struct Cuboid3 {
    Vec3<T> center{};
    T l{}, w{}, h{};
    Quat<T> q{};  // normalized by cuboid_corners
};

// Corner i has body-frame signs (bit0 ? + : -, bit1 ? + : -, bit2 ? + : -)
// on (l, w, h)/2; i = bx + 2*by + 4*bz.
template <class T>
std::vector<Vec3<T>> cuboid_corners(const Cuboid3<T>& c) {
    Quat<T> q = normalized(c.q);
    T hx = T(0.5) * c.l, hy = T(0.5) * c.w, hz = T(0.5) * c.h;
    std::vector<Vec3<T>> out;
    out.reserve(8);
    for (int i = 0; i < 8; ++i) {
        Vec3<T> local{(i & 1) ? hx : T(0.0) - hx, (i & 2) ? hy : T(0.0) - hy, (i & 4) ? hz : T(0.0) - hz};
        out.push_back(c.center + rotate(q, local));
    }
    return out;
}

template <class T>
void append_normals(const Cuboid3<T>& c, std::vector<Vec3<T>>& out) {
    Quat<T> q = normalized(c.q);
    out.push_back(canonical(rotate(q, Vec3<T>{T(1.0), T(0.0), T(0.0)})));
    out.push_back(canonical(rotate(q, Vec3<T>{T(0.0), T(1.0), T(0.0)})));
    out.push_back(canonical(rotate(q, Vec3<T>{T(0.0), T(0.0), T(1.0)})));
}

template <class T>
struct MgiouParts3 {
    T mean{};
    std::vector<std::pair<Vec3<T>, T>> per_normal;
};

template <class T>
MgiouParts3<T> mgiou3(const Cuboid3<T>& p, const Cuboid3<T>& g) {
    std::vector<Vec3<T>> cand;
    append_normals(p, cand);
    append_normals(g, cand);
    auto normals = dedup_normals(cand);
    auto pv = cuboid_corners(p);
    auto gv = cuboid_corners(g);
    MgiouParts3<T> out;
    out.mean = T(0.0);
    for (const auto& a : normals) {
        auto [plo, phi] = project_verts<T>(pv, a);
        auto [glo, ghi] = project_verts<T>(gv, a);
        T v = giou1d(plo, phi, glo, ghi);
        out.mean += v;
        out.per_normal.emplace_back(a, v);
    }
    out.mean /= T(double(normals.size()));
    return out;
}

// ---- convexity regularizer -------------------------------------------------

// Per-edge hinge: sum the positive and the negative side violations
// separately, keep the smaller, average over edges. Zero iff convex.
template <class T>
T convexity(const std::vector<Vec2<T>>& verts) {
    const std::size_t n = verts.size();
    if (n < 3) fail(Errc::TooFewVertices, "convexity needs at least 3 vertices");
    T total(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        Vec2<T> e = verts[(i + 1) % n] - verts[i];
        Vec2<T> nrm = perp(e);
        T s1(0.0), s2(0.0);
        for (std::size_t j = 0; j < n; ++j) {
            T d = dot(verts[j] - verts[i], nrm);
            s1 += relu(T(0.0) - d);
            s2 += relu(d);
        }
        total += vmin(s1, s2);
    }
    return total / T(double(n));
}

// ---- MGIoU^- pair penalty --------------------------------------------------

// softplus of the smallest 1D GIoU across the pair's unique normals.
template <class T>
T pair_penalty(const std::vector<Vec2<T>>& box_i, const std::vector<Vec2<T>>& box_j) {
    Shape2<T> p = make_polygon2(box_i);
    Shape2<T> g = make_polygon2(box_j);
    auto normals = unique_normals2(p, g);
    bool first = true;
    T lowest(0.0);
    for (const auto& a : normals) {
        auto [plo, phi] = project2(p, a);
        auto [glo, ghi] = project2(g, a);
        T v = giou1d(plo, phi, glo, ghi);
        if (first || scalar_value(v) < scalar_value(lowest)) {
            lowest = v;
            first = false;
        }
    }
    return softplus(lowest);
}

}  // namespace mgiou::kern
