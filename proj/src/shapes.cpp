// SPDX-License-Identifier: Apache-2.0
#include "mgiou/shapes.hpp"

#include <cmath>

namespace mgiou {

namespace {

constexpr double kQuatNormTol = 1e-9;

bool finite_pos(double x) { return std::isfinite(x) && x > 0; }

double signed_area(const std::vector<std::array<double, 2>>& v) {
    double a = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % v.size()];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * a;
}

}  // namespace

int dimension(const ConvexShape& s) {
    return std::holds_alternative<Cuboid>(s) ? 3 : 2;
}

void validate(const ConvexShape& s) {
    std::visit(
        [](const auto& sh) {
            using S = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<S, RotatedRect>) {
                if (!std::isfinite(sh.cx) || !std::isfinite(sh.cy) || !std::isfinite(sh.angle) ||
                    !finite_pos(sh.w) || !finite_pos(sh.h))
                    fail(Errc::InvalidShape, "rect requires finite center/angle and w, h > 0");
            } else if constexpr (std::is_same_v<S, Cuboid>) {
                for (double c : sh.center)
                    if (!std::isfinite(c)) fail(Errc::InvalidShape, "cuboid center must be finite");
                for (double d : sh.dims)
                    if (!finite_pos(d)) fail(Errc::InvalidShape, "cuboid dims must be > 0");
                double n2 = 0;
                for (double q : sh.quat) n2 += q * q;
                if (std::fabs(std::sqrt(n2) - 1.0) > kQuatNormTol)
                    fail(Errc::InvalidShape, "cuboid quaternion must be unit norm (1e-9)");
            } else if constexpr (std::is_same_v<S, Ellipse>) {
                if (!std::isfinite(sh.cx) || !std::isfinite(sh.cy) || !std::isfinite(sh.angle) ||
                    !finite_pos(sh.s1) || !finite_pos(sh.s2) || sh.s1 < sh.s2)
                    fail(Errc::InvalidShape, "ellipse requires s1 >= s2 > 0");
            } else {
                if (sh.verts.size() < 3) fail(Errc::InvalidShape, "polygon needs at least 3 vertices");
                for (const auto& v : sh.verts)
                    if (!std::isfinite(v[0]) || !std::isfinite(v[1]))
                        fail(Errc::InvalidShape, "polygon vertices must be finite");
                for (std::size_t i = 0; i < sh.verts.size(); ++i) {
                    const auto& a = sh.verts[i];
                    const auto& b = sh.verts[(i + 1) % sh.verts.size()];
                    if (std::hypot(b[0] - a[0], b[1] - a[1]) < kern::kDegenerateLen)
                        fail(Errc::InvalidShape, "consecutive polygon vertices closer than 1e-12");
                }
                if (signed_area(sh.verts) <= 0)
                    fail(Errc::InvalidShape, "polygon vertices must be CCW (signed area > 0)");
            }
        },
        s);
}

kern::Shape2<double> to_kernel2(const ConvexShape& s) {
    if (const auto* r = std::get_if<RotatedRect>(&s))
        return kern::make_polygon2(kern::rect_corners(r->cx, r->cy, r->w, r->h, r->angle));
    if (const auto* e = std::get_if<Ellipse>(&s))
        return kern::make_ellipse2<double>({e->cx, e->cy}, e->s1, e->s2, e->angle);
    if (const auto* p = std::get_if<Polygon>(&s)) {
        std::vector<Vec2<double>> v;
        v.reserve(p->verts.size());
        for (const auto& q : p->verts) v.push_back({q[0], q[1]});
        return kern::make_polygon2(std::move(v));
    }
    fail(Errc::DimensionMismatch, "cuboid is not a 2D shape");
}

kern::Cuboid3<double> to_kernel3(const Cuboid& c) {
    kern::Cuboid3<double> k;
    k.center = {c.center[0], c.center[1], c.center[2]};
    k.l = c.dims[0];
    k.w = c.dims[1];
    k.h = c.dims[2];
    k.q = {c.quat[0], c.quat[1], c.quat[2], c.quat[3]};
    return k;
}

VertexList vertices(const ConvexShape& s) {
    validate(s);
    if (std::holds_alternative<Ellipse>(s))
        fail(Errc::EllipseHasNoVertices, "ellipses are handled analytically and have no vertices");
    VertexList out;
    if (const auto* c = std::get_if<Cuboid>(&s)) {
        out.dim = 3;
        for (const auto& v : kern::cuboid_corners(to_kernel3(*c))) out.pts.push_back({v.x, v.y, v.z});
        return out;
    }
    out.dim = 2;
    for (const auto& v : to_kernel2(s).verts) out.pts.push_back({v.x, v.y, 0.0});
    return out;
}

NormalSet unique_normals(const ConvexShape& p, const ConvexShape& g) {
    validate(p);
    validate(g);
    if (dimension(p) != dimension(g))
        fail(Errc::DimensionMismatch, "shapes must share a dimension");

    NormalSet out;
    std::vector<std::size_t> kept;
    std::size_t from_p = 0;
    if (dimension(p) == 3) {
        out.dim = 3;
        std::vector<Vec3<double>> cand;
        kern::append_normals(to_kernel3(std::get<Cuboid>(p)), cand);
        from_p = cand.size();
        kern::append_normals(to_kernel3(std::get<Cuboid>(g)), cand);
        for (const auto& n : kern::dedup_normals(cand, &kept)) out.dirs.push_back({n.x, n.y, n.z});
    } else {
        out.dim = 2;
        auto normals = kern::unique_normals2(to_kernel2(p), to_kernel2(g), &kept, &from_p);
        for (const auto& n : normals) out.dirs.push_back({n.x, n.y, 0.0});
    }
    for (std::size_t i : kept) out.provenance.push_back(i < from_p ? 0 : 1);
    return out;
}

Interval project(const ConvexShape& s, const std::array<double, 3>& dir) {
    validate(s);
    if (const auto* c = std::get_if<Cuboid>(&s)) {
        auto [lo, hi] = kern::project_verts<double>(kern::cuboid_corners(to_kernel3(*c)),
                                                    Vec3<double>{dir[0], dir[1], dir[2]});
        return {lo, hi};
    }
    auto [lo, hi] = kern::project2(to_kernel2(s), Vec2<double>{dir[0], dir[1]});
    return {lo, hi};
}

}  // namespace mgiou
