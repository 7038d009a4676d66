// SPDX-License-Identifier: Apache-2.0
#include "mgiou/grad.hpp"

#include <cmath>

#include "mgiou/dual.hpp"
#include "mgiou/kernels.hpp"

namespace mgiou {

namespace {

// ---- packed-parameter shape builders ---------------------------------------

template <class T>
struct ShapeK {
    bool is3d = false;
    kern::Shape2<T> s2;
    kern::Cuboid3<T> s3;
};

template <class T>
ShapeK<T> build_shape(const ConvexShape& proto, const T* q) {
    ShapeK<T> out;
    if (std::holds_alternative<RotatedRect>(proto)) {
        out.s2 = kern::make_polygon2(kern::rect_corners(q[0], q[1], q[2], q[3], q[4]));
    } else if (std::holds_alternative<Ellipse>(proto)) {
        out.s2 = kern::make_ellipse2(Vec2<T>{q[0], q[1]}, q[2], q[3], q[4]);
    } else if (const auto* poly = std::get_if<Polygon>(&proto)) {
        std::vector<Vec2<T>> v;
        v.reserve(poly->verts.size());
        for (std::size_t i = 0; i < poly->verts.size(); ++i) v.push_back({q[2 * i], q[2 * i + 1]});
        out.s2 = kern::make_polygon2(std::move(v));
    } else {
        out.is3d = true;
        out.s3.center = {q[0], q[1], q[2]};
        out.s3.l = q[3];
        out.s3.w = q[4];
        out.s3.h = q[5];
        out.s3.q = {q[6], q[7], q[8], q[9]};
    }
    return out;
}

template <class T>
T eval_loss(LossId id, const ConvexShape& proto_p, const ConvexShape& proto_g, const T* qp,
            const T* qg, const MgiouConfig& cfg) {
    ShapeK<T> p = build_shape(proto_p, qp);
    ShapeK<T> g = build_shape(proto_g, qg);

    if (id == LossId::MgiouMinusPair) {
        if (p.is3d || g.is3d || p.s2.is_ellipse || g.s2.is_ellipse)
            fail(Errc::ModeShapeMismatch, "pair penalty takes vertex shapes");
        return kern::pair_penalty(p.s2.verts, g.s2.verts);
    }

    T m = p.is3d ? kern::mgiou3(p.s3, g.s3).mean : kern::mgiou2(p.s2, g.s2).mean;
    T loss = (T(1.0) - m) / T(2.0);
    if (id == LossId::MgiouPlus && cfg.mode == Mode::Unstructured)
        loss += T(cfg.lambda) * kern::convexity(p.s2.verts);
    return loss;
}

// Ablation path: normals frozen at their current values.
Dual eval_loss_fixed_normals(LossId id, const ConvexShape& proto_p, const ConvexShape& proto_g,
                             const std::vector<Dual>& qp, const std::vector<Dual>& qg,
                             const MgiouConfig& cfg) {
    std::vector<double> vp(qp.size()), vg(qg.size());
    for (std::size_t i = 0; i < qp.size(); ++i) vp[i] = qp[i].v;
    for (std::size_t i = 0; i < qg.size(); ++i) vg[i] = qg[i].v;
    ShapeK<double> pv = build_shape(proto_p, vp.data());
    ShapeK<double> gv = build_shape(proto_g, vg.data());
    ShapeK<Dual> p = build_shape(proto_p, qp.data());
    ShapeK<Dual> g = build_shape(proto_g, qg.data());

    Dual sum(0.0);
    std::size_t count = 0;
    Dual lowest(0.0);
    bool first = true;
    if (pv.is3d) {
        std::vector<Vec3<double>> cand;
        kern::append_normals(pv.s3, cand);
        kern::append_normals(gv.s3, cand);
        auto normals = kern::dedup_normals(cand);
        auto pverts = kern::cuboid_corners(p.s3);
        auto gverts = kern::cuboid_corners(g.s3);
        for (const auto& n : normals) {
            Vec3<Dual> a{Dual(n.x), Dual(n.y), Dual(n.z)};
            auto [plo, phi] = kern::project_verts<Dual>(pverts, a);
            auto [glo, ghi] = kern::project_verts<Dual>(gverts, a);
            sum += kern::giou1d(plo, phi, glo, ghi);
        }
        count = normals.size();
    } else {
        auto normals = kern::unique_normals2(pv.s2, gv.s2);
        for (const auto& n : normals) {
            Vec2<Dual> a{Dual(n.x), Dual(n.y)};
            auto [plo, phi] = kern::project2(p.s2, a);
            auto [glo, ghi] = kern::project2(g.s2, a);
            Dual v = kern::giou1d(plo, phi, glo, ghi);
            sum += v;
            if (first || v.v < lowest.v) {
                lowest = v;
                first = false;
            }
        }
        count = normals.size();
    }

    if (id == LossId::MgiouMinusPair) return softplus(lowest);
    Dual m = sum / Dual(double(count));
    Dual loss = (Dual(1.0) - m) / Dual(2.0);
    if (id == LossId::MgiouPlus && cfg.mode == Mode::Unstructured)
        loss += Dual(cfg.lambda) * kern::convexity(p.s2.verts);
    return loss;
}

std::vector<Dual> seed(const std::vector<double>& vals, std::size_t offset, std::size_t total) {
    std::vector<Dual> out;
    out.reserve(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        out.push_back(Dual::var(vals[i], offset + i, total));
    return out;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::size_t param_count(const ConvexShape& s) {
    if (std::holds_alternative<Cuboid>(s)) return 10;
    if (const auto* p = std::get_if<Polygon>(&s)) return 2 * p->verts.size();
    return 5;
}

std::vector<double> pack_params(const ConvexShape& s) {
    if (const auto* r = std::get_if<RotatedRect>(&s)) return {r->cx, r->cy, r->w, r->h, r->angle};
    if (const auto* e = std::get_if<Ellipse>(&s)) return {e->cx, e->cy, e->s1, e->s2, e->angle};
    if (const auto* c = std::get_if<Cuboid>(&s))
        return {c->center[0], c->center[1], c->center[2], c->dims[0], c->dims[1],
                c->dims[2],    c->quat[0],   c->quat[1],   c->quat[2], c->quat[3]};
    const auto& poly = std::get<Polygon>(s);
    std::vector<double> q;
    q.reserve(2 * poly.verts.size());
    for (const auto& v : poly.verts) {
        q.push_back(v[0]);
        q.push_back(v[1]);
    }
    return q;
}

ConvexShape unpack_params(const ConvexShape& prototype, const std::vector<double>& q) {
    if (q.size() != param_count(prototype)) fail(Errc::InputError, "parameter vector size mismatch");
    if (std::holds_alternative<RotatedRect>(prototype))
        return RotatedRect{q[0], q[1], q[2], q[3], q[4]};
    if (std::holds_alternative<Ellipse>(prototype)) return Ellipse{q[0], q[1], q[2], q[3], q[4]};
    if (std::holds_alternative<Cuboid>(prototype)) {
        Cuboid c;
        c.center = {q[0], q[1], q[2]};
        c.dims = {q[3], q[4], q[5]};
        double n = std::sqrt(q[6] * q[6] + q[7] * q[7] + q[8] * q[8] + q[9] * q[9]);
        c.quat = {q[6] / n, q[7] / n, q[8] / n, q[9] / n};
        return c;
    }
    Polygon p;
    for (std::size_t i = 0; i + 1 < q.size(); i += 2) p.verts.push_back({q[i], q[i + 1]});
    return p;
}

double loss_value(LossId id, const ConvexShape& proto_p, const ConvexShape& proto_g,
                  const std::vector<double>& params, const MgiouConfig& cfg) {
    std::size_t np = param_count(proto_p);
    if (params.size() != np + param_count(proto_g))
        fail(Errc::InputError, "parameter vector size mismatch");
    return eval_loss(id, proto_p, proto_g, params.data(), params.data() + np, cfg);
}

LossValue loss_with_grad(LossId id, const ConvexShape& p, const ConvexShape& g,
                         const MgiouConfig& cfg, const GradOptions& opt) {
    auto vp = pack_params(p);
    auto vg = pack_params(g);
    std::size_t total = vp.size() + vg.size();
    auto qp = seed(vp, 0, total);
    auto qg = seed(vg, vp.size(), total);
    Dual r = opt.differentiate_normals
                 ? eval_loss(id, p, g, qp.data(), qg.data(), cfg)
                 : eval_loss_fixed_normals(id, p, g, qp, qg, cfg);
    LossValue out;
    out.value = r.v;
    out.gradient = r.d.empty() ? std::vector<double>(total, 0.0) : std::move(r.d);
    return out;
}

LossValue pair_penalty_with_grad(const QuadBox& box_i, const QuadBox& box_j) {
    Polygon a, b;
    for (int k = 0; k < 4; ++k) {
        a.verts.push_back(box_i[k]);
        b.verts.push_back(box_j[k]);
    }
    return loss_with_grad(LossId::MgiouMinusPair, a, b);
}

double check_grad(LossId id, const ConvexShape& p, const ConvexShape& g, const MgiouConfig& cfg,
                  double h, std::uint64_t jitter_seed) {
    auto base = pack_params(p);
    auto gg = pack_params(g);
    base.insert(base.end(), gg.begin(), gg.end());

    std::vector<double> params = base;
    for (int attempt = 0; attempt < 5; ++attempt) {
        // Differentiate the packed coordinates directly against the same eval
        // path used for the numeric differences (no quaternion renorm between).
        LossValue analytic = [&] {
            std::size_t total = params.size();
            std::vector<double> vp(params.begin(), params.begin() + long(param_count(p)));
            std::vector<double> vg2(params.begin() + long(param_count(p)), params.end());
            auto qp = seed(vp, 0, total);
            auto qg = seed(vg2, vp.size(), total);
            Dual r = eval_loss(id, p, g, qp.data(), qg.data(), cfg);
            LossValue lv;
            lv.value = r.v;
            lv.gradient = r.d.empty() ? std::vector<double>(total, 0.0) : std::move(r.d);
            return lv;
        }();

        bool kink = false;
        double worst = 0;
        for (std::size_t i = 0; i < params.size() && !kink; ++i) {
            std::vector<double> q = params;
            q[i] = params[i] + h;
            double fp = loss_value(id, p, g, q, cfg);
            q[i] = params[i] - h;
            double fm = loss_value(id, p, g, q, cfg);
            double f0 = analytic.value;
            double fwd = (fp - f0) / h, bwd = (f0 - fm) / h;
            double scale = std::max({1.0, std::fabs(fwd), std::fabs(bwd)});
            if (std::fabs(fwd - bwd) > 1e-4 * scale) {
                kink = true;
                break;
            }
            double central = (fp - fm) / (2 * h);
            double err = std::fabs(analytic.gradient[i] - central) / std::max(1.0, std::fabs(central));
            worst = std::max(worst, err);
        }
        if (!kink) return worst;

        std::uint64_t s = mix64(jitter_seed ^ (std::uint64_t(attempt) + 1));
        for (std::size_t i = 0; i < params.size(); ++i) {
            s = mix64(s);
            params[i] = base[i] + (double(s >> 11) * 0x1.0p-53 - 0.5) * 20.0 * h;
        }
    }
    fail(Errc::KinkDetected, "could not move the configuration off a min/max tie");
}

}  // namespace mgiou
