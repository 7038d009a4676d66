// SPDX-License-Identifier: Apache-2.0
#include "mgiou/audit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

#include "mgiou/giou1d.hpp"
#include "mgiou/grad.hpp"
#include "mgiou/mgiou.hpp"
#include "mgiou/oracle.hpp"
#include "mgiou/random_shapes.hpp"

namespace mgiou::audit {

namespace {

oracle::Poly corner_poly(const ConvexShape& s) {
    oracle::Poly p;
    for (const auto& v : vertices(s).pts) p.push_back({v[0], v[1]});
    return p;
}

NormalSet merged_normals(const std::vector<ConvexShape>& shapes) {
    std::vector<Vec2<double>> cand;
    for (const auto& s : shapes) kern::append_normals(to_kernel2(s), cand);
    NormalSet out;
    for (const auto& n : kern::dedup_normals(cand)) out.dirs.push_back({n.x, n.y, 0.0});
    return out;
}

RotatedRect scaled(const RotatedRect& r, double s) {
    return {s * r.cx, s * r.cy, s * r.w, s * r.h, r.angle};
}

}  // namespace

SuiteReport equivalence(std::uint64_t trials, std::uint64_t seed) {
    gen::Rng rng(seed);
    double worst = 0;
    Interval wp, wg;
    for (std::uint64_t i = 0; i < trials; ++i) {
        Interval p = gen::random_interval(rng);
        Interval g = gen::random_interval(rng);
        double diff = std::fabs(giou1d_simplified(p, g) - giou1d_definition(p, g).giou);
        if (diff > worst) {
            worst = diff;
            wp = p;
            wg = g;
        }
    }
    SuiteReport r;
    r.name = "equivalence";
    r.measured = worst;
    r.pass = worst <= 1e-12;
    std::ostringstream os;
    os << "max |simplified - definition| = " << worst << " at p=[" << wp.lo << "," << wp.hi
       << "] g=[" << wg.lo << "," << wg.hi << "] over " << trials << " pairs";
    r.detail = os.str();
    return r;
}

SuiteReport metric(std::uint64_t trials, std::uint64_t seed) {
    gen::Rng rng(seed);
    std::uint64_t violations = 0;
    std::ostringstream os;
    auto note = [&](const char* what, std::uint64_t i, double v) {
        ++violations;
        if (violations <= 5) os << what << " violated at trial " << i << " (margin " << v << ")\n";
    };

    for (std::uint64_t i = 0; i < trials; ++i) {
        RotatedRect p = gen::random_rect(rng);
        RotatedRect g = gen::random_rect(rng);
        RotatedRect q = gen::random_rect(rng);

        double lpg = mgiou(p, g).loss;
        if (lpg < 0) note("non-negativity", i, lpg);

        double lid = mgiou(p, p).loss;
        if (lid > 1e-12) note("identity (P=G)", i, lid);
        if (lpg <= 1e-12) {
            // distinct pairs must not alias to zero unless vertex sets match
            auto vp = vertices(ConvexShape{p}).pts, vg = vertices(ConvexShape{g}).pts;
            if (vp != vg) note("identity (iff)", i, lpg);
        }

        double sym = std::fabs(lpg - mgiou(g, p).loss);
        if (sym > 1e-12) note("symmetry", i, sym);

        for (double s : {1e-3, 1.0, 1e3}) {
            double d = std::fabs(mgiou(scaled(p, s), scaled(g, s)).loss - lpg);
            if (d > 1e-10) note("scale invariance", i, d);
        }

        NormalSet axes = merged_normals({p, q, g});
        auto dist = [&](const ConvexShape& a, const ConvexShape& b) {
            return (1.0 - mgiou_on_normals(a, b, axes)) / 2.0;
        };
        double margin = dist(p, g) - dist(p, q) - dist(q, g);
        if (margin > 1e-10) note("triangle inequality", i, margin);

        double m = mgiou(p, g).mgiou;
        if (!(m > -1.0 && m <= 1.0 + 1e-15)) note("range", i, m);
    }

    SuiteReport r;
    r.name = "metric";
    r.measured = double(violations);
    r.pass = violations == 0;
    r.detail = violations ? os.str() : "all properties held on " + std::to_string(trials) + " trials";
    return r;
}

SuiteReport gradient(std::uint64_t trials, std::uint64_t seed) {
    gen::Rng rng(seed);
    double worst = 0;
    std::string worst_loss = "none";
    int kinks = 0;

    auto run = [&](LossId id, const char* name, auto make_pair_fn) {
        for (std::uint64_t i = 0; i < trials; ++i) {
            auto [p, g, cfg] = make_pair_fn();
            try {
                double err = check_grad(id, p, g, cfg, 1e-5, seed + i);
                if (err > worst) {
                    worst = err;
                    worst_loss = name;
                }
            } catch (const Error& e) {
                if (e.code() != Errc::KinkDetected) throw;
                ++kinks;  // unresolvable tie; configuration skipped
            }
        }
    };

    run(LossId::Mgiou, "mgiou", [&] {
        return std::tuple<ConvexShape, ConvexShape, MgiouConfig>(gen::random_rect(rng),
                                                                 gen::random_rect(rng), {});
    });
    run(LossId::MgiouPlus, "mgiou_plus", [&] {
        MgiouConfig cfg;
        cfg.mode = Mode::Unstructured;
        cfg.lambda = 1.0;
        return std::tuple<ConvexShape, ConvexShape, MgiouConfig>(gen::random_convex_polygon(rng),
                                                                 gen::random_convex_polygon(rng), cfg);
    });
    run(LossId::MgiouMinusPair, "mgiou_minus_pair", [&] {
        auto quad = [&] {
            Polygon poly;
            for (const auto& v : gen::quad_from_rect(gen::random_rect(rng))) poly.verts.push_back(v);
            return poly;
        };
        return std::tuple<ConvexShape, ConvexShape, MgiouConfig>(quad(), quad(), {});
    });

    SuiteReport r;
    r.name = "gradient";
    r.measured = worst;
    r.pass = worst < 1e-4;
    std::ostringstream os;
    os << "max rel. err " << worst << " (" << worst_loss << "), " << kinks
       << " configurations skipped on unresolvable ties";
    r.detail = os.str();
    return r;
}

SuiteReport correlation(std::uint64_t trials, std::uint64_t seed) {
    gen::Rng rng(seed);
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        RotatedRect p = gen::random_rect(rng);
        // within one diagonal: pairs mostly overlap, where the IoU comparison
        // is informative; far-apart pairs all share iou = 0 and only add noise
        RotatedRect g = gen::random_rect_near(rng, p, 1.0);
        double x = mgiou(p, g).mgiou;
        double y = oracle::exact_giou_2d(corner_poly(p), corner_poly(g)).iou;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    double n = double(trials);
    double cov = sxy - sx * sy / n;
    double vx = sxx - sx * sx / n;
    double vy = syy - sy * sy / n;
    double r_pearson = cov / std::sqrt(vx * vy);

    SuiteReport r;
    r.name = "correlation";
    r.measured = r_pearson;
    r.pass = r_pearson >= 0.8;
    std::ostringstream os;
    os << "Pearson r = " << r_pearson << " over " << trials << " near-overlapping rect pairs";
    r.detail = os.str();
    return r;
}

BenchReport bench(std::size_t pairs, const std::string& shape_kind, int repeats, std::uint64_t seed) {
    gen::Rng rng(seed);
    std::vector<std::pair<ConvexShape, ConvexShape>> set;
    set.reserve(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        if (shape_kind == "polygon")
            set.emplace_back(gen::random_convex_polygon(rng), gen::random_convex_polygon(rng));
        else {
            RotatedRect p = gen::random_rect(rng);
            set.emplace_back(p, gen::random_rect_near(rng, p, 2.0));
        }
    }

    auto time_ms = [&](auto&& fn) {
        std::vector<double> runs;
        for (int r = 0; r < repeats; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            fn();
            auto t1 = std::chrono::steady_clock::now();
            runs.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
        std::sort(runs.begin(), runs.end());
        return runs[runs.size() / 2];
    };

    volatile double sink = 0;
    BenchReport out;
    out.mgiou_ms = time_ms([&] {
        double acc = 0;
        for (const auto& [p, g] : set) acc += mgiou_loss(p, g);
        sink = acc;
    });
    out.oracle_ms = time_ms([&] {
        double acc = 0;
        for (const auto& [p, g] : set) acc += oracle::exact_giou_2d(corner_poly(p), corner_poly(g)).giou;
        sink = acc;
    });
    out.ratio = out.oracle_ms / out.mgiou_ms;
    return out;
}

}  // namespace mgiou::audit
