// SPDX-License-Identifier: Apache-2.0
#include "mgiou/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace mgiou::oracle {

namespace {

constexpr double kCollisionAreaTol = 1e-12;

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// splitmix64, keyed per sample index for reproducible parallel use.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_double(std::uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

struct Frame {
    Vec3<double> center;
    Quat<double> inv;
    double hx, hy, hz;
};

Frame local_frame(const Cuboid& c) {
    Quat<double> q = normalized(Quat<double>{c.quat[0], c.quat[1], c.quat[2], c.quat[3]});
    return {{c.center[0], c.center[1], c.center[2]},
            {q.w, -q.x, -q.y, -q.z},
            c.dims[0] / 2,
            c.dims[1] / 2,
            c.dims[2] / 2};
}

bool inside(const Frame& f, const Vec3<double>& p) {
    Vec3<double> l = rotate(f.inv, p - f.center);
    return std::fabs(l.x) <= f.hx && std::fabs(l.y) <= f.hy && std::fabs(l.z) <= f.hz;
}

struct Aabb {
    double lo[3], hi[3];
};

Aabb bounding_box(const Cuboid& c) {
    auto pts = vertices(ConvexShape{c}).pts;
    Aabb b{{pts[0][0], pts[0][1], pts[0][2]}, {pts[0][0], pts[0][1], pts[0][2]}};
    for (const auto& p : pts)
        for (int k = 0; k < 3; ++k) {
            b.lo[k] = std::min(b.lo[k], p[k]);
            b.hi[k] = std::max(b.hi[k], p[k]);
        }
    return b;
}

}  // namespace

double polygon_area(const Poly& p) {
    double a = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& u = p[i];
        const auto& v = p[(i + 1) % p.size()];
        a += u[0] * v[1] - v[0] * u[1];
    }
    return 0.5 * a;
}

Poly convex_hull(std::vector<std::array<double, 2>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    Poly hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {  // lower chain
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {  // upper chain
        while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

Poly clip_convex(const Poly& subject, const Poly& clipper) {
    Poly out = subject;
    for (std::size_t i = 0; i < clipper.size() && !out.empty(); ++i) {
        const auto& a = clipper[i];
        const auto& b = clipper[(i + 1) % clipper.size()];
        Poly in;
        in.swap(out);
        for (std::size_t j = 0; j < in.size(); ++j) {
            const auto& cur = in[j];
            const auto& nxt = in[(j + 1) % in.size()];
            double dc = cross(a, b, cur);
            double dn = cross(a, b, nxt);
            if (dc >= 0) out.push_back(cur);
            if ((dc >= 0) != (dn >= 0)) {
                double t = dc / (dc - dn);
                out.push_back({cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])});
            }
        }
    }
    return out;
}

ExactOverlap exact_giou_2d(const Poly& p, const Poly& g) {
    double ap = polygon_area(p), ag = polygon_area(g);
    if (ap <= 0 || ag <= 0) fail(Errc::ZeroAreaInput, "exact_giou_2d needs CCW polygons with area > 0");
    ExactOverlap r;
    Poly inter = clip_convex(p, g);
    r.intersection = inter.size() >= 3 ? std::max(0.0, polygon_area(inter)) : 0.0;
    r.union_ = ap + ag - r.intersection;
    std::vector<std::array<double, 2>> all(p);
    all.insert(all.end(), g.begin(), g.end());
    r.enclosure = polygon_area(convex_hull(std::move(all)));
    r.iou = r.intersection / r.union_;
    r.giou = r.iou - (r.enclosure - r.union_) / r.enclosure;
    return r;
}

McEstimate mc_iou_3d(const Cuboid& p, const Cuboid& g, std::uint64_t samples, std::uint64_t seed) {
    if (samples < 10000) fail(Errc::InputError, "mc_iou_3d needs at least 1e4 samples");
    validate(ConvexShape{p});
    validate(ConvexShape{g});

    if (p.center == g.center && p.dims == g.dims && p.quat == g.quat)
        return {1.0, 0.0, 0};

    Aabb bp = bounding_box(p), bg = bounding_box(g);
    Aabb joint;
    for (int k = 0; k < 3; ++k) {
        if (bp.lo[k] > bg.hi[k] || bg.lo[k] > bp.hi[k]) return {0.0, 0.0, 0};
        joint.lo[k] = std::min(bp.lo[k], bg.lo[k]);
        joint.hi[k] = std::max(bp.hi[k], bg.hi[k]);
    }

    Frame fp = local_frame(p), fg = local_frame(g);
    std::uint64_t n_p = 0, n_g = 0, n_both = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        std::uint64_t base = mix64(seed ^ (i * 0x2545f4914f6cdd1dULL));
        Vec3<double> pt{joint.lo[0] + unit_double(base) * (joint.hi[0] - joint.lo[0]),
                        joint.lo[1] + unit_double(mix64(base)) * (joint.hi[1] - joint.lo[1]),
                        joint.lo[2] + unit_double(mix64(mix64(base))) * (joint.hi[2] - joint.lo[2])};
        bool ip = inside(fp, pt), ig = inside(fg, pt);
        n_p += ip;
        n_g += ig;
        n_both += ip && ig;
    }
    std::uint64_t n_union = n_p + n_g - n_both;
    McEstimate e;
    e.samples = samples;
    e.iou = n_union ? double(n_both) / double(n_union) : 0.0;
    // binomial error on the intersection count, scaled to the IoU ratio
    double pb = double(n_both) / double(samples);
    double se_counts = std::sqrt(pb * (1.0 - pb) * double(samples));
    e.stderr_ = n_union ? se_counts / double(n_union) : 0.0;
    return e;
}

bool collides(const Poly& p, const Poly& g) {
    Poly inter = clip_convex(p, g);
    if (inter.size() < 3) return false;
    return polygon_area(inter) > kCollisionAreaTol;
}

}  // namespace mgiou::oracle
