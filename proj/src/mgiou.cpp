// SPDX-License-Identifier: Apache-2.0
#include "mgiou/mgiou.hpp"

#include <cmath>
#include <cstdio>

namespace mgiou {

namespace {

// Stack-allocated view of a 2D shape for the plain-double evaluation path.
// Rect normals come straight from the rotation axes instead of normalized
// edges, so values can differ from the generic kernels in the last ulps;
// polygons with more than 8 vertices fall back to the generic kernels.
struct FastView {
    bool is_ellipse = false;
    bool has_axes = false;  // rect: cosA/sinA give the two unique normals
    int n = 0;
    Vec2<double> v[8];
    Vec2<double> center{};
    double s1 = 0, s2 = 0, cosA = 0, sinA = 0;
};

bool make_fast(const ConvexShape& s, FastView& f) {
    if (const auto* r = std::get_if<RotatedRect>(&s)) {
        double c = std::cos(r->angle), sn = std::sin(r->angle);
        double hw = 0.5 * r->w, hh = 0.5 * r->h;
        auto place = [&](double lx, double ly) -> Vec2<double> {
            return {r->cx + c * lx - sn * ly, r->cy + sn * lx + c * ly};
        };
        f.v[0] = place(hw, hh);
        f.v[1] = place(-hw, hh);
        f.v[2] = place(-hw, -hh);
        f.v[3] = place(hw, -hh);
        f.n = 4;
        f.has_axes = true;
        f.cosA = c;
        f.sinA = sn;
        return true;
    }
    if (const auto* p = std::get_if<Polygon>(&s)) {
        if (p->verts.size() > 8) return false;
        f.n = int(p->verts.size());
        for (int i = 0; i < f.n; ++i) f.v[i] = {p->verts[std::size_t(i)][0], p->verts[std::size_t(i)][1]};
        return true;
    }
    if (const auto* e = std::get_if<Ellipse>(&s)) {
        f.is_ellipse = true;
        f.center = {e->cx, e->cy};
        f.s1 = e->s1;
        f.s2 = e->s2;
        f.cosA = std::cos(e->angle);
        f.sinA = std::sin(e->angle);
        return true;
    }
    return false;
}

int fast_normals(const FastView& f, Vec2<double>* out) {
    if (f.is_ellipse || f.has_axes) {
        out[0] = kern::canonical(Vec2<double>{f.cosA, f.sinA});
        out[1] = kern::canonical(Vec2<double>{0.0 - f.sinA, f.cosA});
        return 2;
    }
    for (int i = 0; i < f.n; ++i) {
        Vec2<double> e = f.v[(i + 1) % f.n] - f.v[i];
        double len = std::sqrt(dot(e, e));
        if (len < kern::kDegenerateLen)
            fail(Errc::DegenerateEdge, "polygon edge shorter than 1e-12");
        out[i] = kern::canonical(Vec2<double>{(0.0 - e.y) / len, e.x / len});
    }
    return f.n;
}

std::pair<double, double> fast_project(const FastView& f, const Vec2<double>& d) {
    if (f.is_ellipse) {
        double a1 = f.s1 * (d.x * f.cosA + d.y * f.sinA);
        double a2 = f.s2 * (0.0 - d.x * f.sinA + d.y * f.cosA);
        double r = std::sqrt(a1 * a1 + a2 * a2);
        double mid = dot(f.center, d);
        return {mid - r, mid + r};
    }
    double lo = dot(f.v[0], d), hi = lo;
    for (int i = 1; i < f.n; ++i) {
        double t = dot(f.v[i], d);
        lo = vmin(lo, t);
        hi = vmax(hi, t);
    }
    return {lo, hi};
}

// Computes the mean 1D GIoU; fills the per-normal breakdown only when asked.
double fast_mean2(const FastView& fp, const FastView& fg, MgiouResult* breakdown) {
    Vec2<double> cand[16], normals[16];
    int nc = fast_normals(fp, cand);
    nc += fast_normals(fg, cand + nc);
    int nn = 0;
    for (int i = 0; i < nc; ++i) {
        bool dup = false;
        for (int j = 0; j < nn && !dup; ++j)
            if (kern::parallel(normals[j], cand[i])) dup = true;
        if (!dup) normals[nn++] = cand[i];
    }
    if (breakdown) breakdown->per_normal.reserve(std::size_t(nn));
    double mean = 0;
    for (int i = 0; i < nn; ++i) {
        auto [plo, phi] = fast_project(fp, normals[i]);
        auto [glo, ghi] = fast_project(fg, normals[i]);
        double val = kern::giou1d(plo, phi, glo, ghi);
        mean += val;
        if (breakdown) breakdown->per_normal.push_back({{normals[i].x, normals[i].y, 0.0}, val});
    }
    return mean / double(nn);
}

MgiouResult from_parts2(const kern::MgiouParts<double>& parts) {
    MgiouResult r;
    r.mgiou = parts.mean;
    r.loss = (1.0 - parts.mean) / 2.0;
    for (const auto& [dir, v] : parts.per_normal) r.per_normal.push_back({{dir.x, dir.y, 0.0}, v});
    return r;
}

}  // namespace

MgiouResult mgiou(const ConvexShape& p, const ConvexShape& g) {
    validate(p);
    validate(g);
    if (dimension(p) != dimension(g))
        fail(Errc::DimensionMismatch, "shapes must share a dimension");
    if (dimension(p) == 3) {
        auto parts = kern::mgiou3(to_kernel3(std::get<Cuboid>(p)), to_kernel3(std::get<Cuboid>(g)));
        MgiouResult r;
        r.mgiou = parts.mean;
        r.loss = (1.0 - parts.mean) / 2.0;
        for (const auto& [dir, v] : parts.per_normal) r.per_normal.push_back({{dir.x, dir.y, dir.z}, v});
        return r;
    }
    FastView fp, fg;
    if (make_fast(p, fp) && make_fast(g, fg)) {
        MgiouResult r;
        r.mgiou = fast_mean2(fp, fg, &r);
        r.loss = (1.0 - r.mgiou) / 2.0;
        return r;
    }
    return from_parts2(kern::mgiou2(to_kernel2(p), to_kernel2(g)));
}

double mgiou_loss(const ConvexShape& p, const ConvexShape& g) {
    validate(p);
    validate(g);
    if (dimension(p) != dimension(g))
        fail(Errc::DimensionMismatch, "shapes must share a dimension");
    if (dimension(p) == 2) {
        FastView fp, fg;
        if (make_fast(p, fp) && make_fast(g, fg))
            return (1.0 - fast_mean2(fp, fg, nullptr)) / 2.0;
    }
    return mgiou(p, g).loss;
}

double mgiou_on_normals(const ConvexShape& p, const ConvexShape& g, const NormalSet& normals) {
    validate(p);
    validate(g);
    if (normals.dirs.empty()) fail(Errc::InputError, "empty normal set");
    if (normals.dim == 3) {
        auto pv = kern::cuboid_corners(to_kernel3(std::get<Cuboid>(p)));
        auto gv = kern::cuboid_corners(to_kernel3(std::get<Cuboid>(g)));
        double sum = 0;
        for (const auto& d : normals.dirs) {
            Vec3<double> a{d[0], d[1], d[2]};
            auto [plo, phi] = kern::project_verts<double>(pv, a);
            auto [glo, ghi] = kern::project_verts<double>(gv, a);
            sum += kern::giou1d(plo, phi, glo, ghi);
        }
        return sum / double(normals.dirs.size());
    }
    std::vector<Vec2<double>> dirs;
    for (const auto& d : normals.dirs) dirs.push_back({d[0], d[1]});
    return kern::mgiou2_on_normals(to_kernel2(p), to_kernel2(g), dirs);
}

double convexity_loss(const std::vector<std::array<double, 2>>& poly) {
    if (poly.size() < 3) fail(Errc::TooFewVertices, "convexity_loss needs at least 3 vertices");
    std::vector<Vec2<double>> v;
    v.reserve(poly.size());
    for (const auto& p : poly) v.push_back({p[0], p[1]});
    return kern::convexity(v);
}

MgiouResult mgiou_plus(const ConvexShape& p, const ConvexShape& g, const MgiouConfig& cfg) {
    if (!(cfg.lambda >= 0)) fail(Errc::InputError, "lambda must be finite and >= 0");
    validate(p);
    validate(g);

    if (cfg.mode == Mode::Unstructured) {
        const auto* pp = std::get_if<Polygon>(&p);
        const auto* gp = std::get_if<Polygon>(&g);
        if (!pp || !gp)
            fail(Errc::ModeShapeMismatch, "unstructured mode requires polygon inputs");
        if (gp->verts.size() < pp->verts.size())
            std::fprintf(stderr, "mgiou: warning: target has fewer vertices (%zu) than source (%zu)\n",
                         gp->verts.size(), pp->verts.size());
        MgiouResult r = mgiou(p, g);
        r.convexity = convexity_loss(pp->verts);
        r.loss += cfg.lambda * r.convexity;
        return r;
    }

    // Structured: same shape kind required; polygon-polygon pairs belong to
    // unstructured mode but share its projection semantics, so accept them.
    if (p.index() != g.index())
        fail(Errc::ModeShapeMismatch, "structured mode requires same-kind shapes");
    return mgiou(p, g);
}

}  // namespace mgiou
