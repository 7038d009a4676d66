// SPDX-License-Identifier: Apache-2.0
#include "mgiou/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mgiou/oracle.hpp"

namespace mgiou {

namespace {

constexpr int kDivergenceWindow = 50;
constexpr double kDivergenceFactor = 10.0;

// Optimization coordinates: packed params with size-like entries in log-space.
// Index list of the log-transformed entries per shape kind.
std::vector<std::size_t> log_indices(const ConvexShape& s) {
    if (std::holds_alternative<RotatedRect>(s) || std::holds_alternative<Ellipse>(s)) return {2, 3};
    if (std::holds_alternative<Cuboid>(s)) return {3, 4, 5};
    return {};
}

std::vector<double> to_opt(const ConvexShape& proto, std::vector<double> packed) {
    for (std::size_t i : log_indices(proto)) packed[i] = std::log(packed[i]);
    return packed;
}

std::vector<double> to_packed(const ConvexShape& proto, std::vector<double> opt) {
    for (std::size_t i : log_indices(proto)) opt[i] = std::exp(opt[i]);
    return opt;
}

oracle::Poly shape_poly(const ConvexShape& s) {
    if (const auto* e = std::get_if<Ellipse>(&s)) {
        // 128-gon approximation, oracle side only.
        oracle::Poly p;
        double c = std::cos(e->angle), sn = std::sin(e->angle);
        for (int k = 0; k < 128; ++k) {
            double t = 2.0 * M_PI * k / 128;
            double lx = e->s1 * std::cos(t), ly = e->s2 * std::sin(t);
            p.push_back({e->cx + c * lx - sn * ly, e->cy + sn * lx + c * ly});
        }
        return p;
    }
    oracle::Poly p;
    for (const auto& v : vertices(s).pts) p.push_back({v[0], v[1]});
    return p;
}

bool boxes_collide(const QuadBox& a, const QuadBox& b) {
    auto poly = [](const QuadBox& q) {
        oracle::Poly p(q.begin(), q.end());
        if (oracle::polygon_area(p) < 0) std::reverse(p.begin(), p.end());
        return p;
    };
    return oracle::collides(poly(a), poly(b));
}

double oracle_metric(const ConvexShape& s, const ConvexShape& target, int step, double last) {
    if (std::holds_alternative<Cuboid>(s)) {
        // MC estimate is costly; refresh every 50 steps.
        if (step % 50 != 0 && last >= 0) return last;
        return oracle::mc_iou_3d(std::get<Cuboid>(s), std::get<Cuboid>(target), 20000, 1234).iou;
    }
    return oracle::exact_giou_2d(shape_poly(s), shape_poly(target)).iou;
}

}  // namespace

namespace {

std::array<double, 3> centroid(const ConvexShape& s) {
    if (const auto* r = std::get_if<RotatedRect>(&s)) return {r->cx, r->cy, 0};
    if (const auto* e = std::get_if<Ellipse>(&s)) return {e->cx, e->cy, 0};
    if (const auto* c = std::get_if<Cuboid>(&s)) return c->center;
    const auto& verts = std::get<Polygon>(s).verts;
    std::array<double, 3> m{0, 0, 0};
    for (const auto& v : verts) {
        m[0] += v[0] / double(verts.size());
        m[1] += v[1] / double(verts.size());
    }
    return m;
}

// Restart candidate: init translated onto the target's centroid, optionally
// with the in-plane angle advanced (2D parametric shapes only).
ConvexShape recentered(const ConvexShape& init, const ConvexShape& target, double spin) {
    auto ci = centroid(init), ct = centroid(target);
    ConvexShape out = init;
    if (auto* r = std::get_if<RotatedRect>(&out)) {
        r->cx = ct[0];
        r->cy = ct[1];
        r->angle += spin;
    } else if (auto* e = std::get_if<Ellipse>(&out)) {
        e->cx = ct[0];
        e->cy = ct[1];
        e->angle += spin;
    } else if (auto* c = std::get_if<Cuboid>(&out)) {
        c->center = ct;
    } else {
        for (auto& v : std::get<Polygon>(out).verts) {
            v[0] += ct[0] - ci[0];
            v[1] += ct[1] - ci[1];
        }
    }
    return out;
}

}  // namespace

static FitTrace descend_shape(const ConvexShape& init, const ConvexShape& target,
                              const FitConfig& cfg) {
    const bool polygon_fit = std::holds_alternative<Polygon>(init);
    LossId loss_id = polygon_fit ? LossId::MgiouPlus : LossId::Mgiou;
    MgiouConfig mcfg;
    mcfg.lambda = cfg.lambda;
    mcfg.mode = polygon_fit ? Mode::Unstructured : Mode::Structured;

    std::vector<double> opt = to_opt(init, pack_params(init));
    std::vector<double> vel(opt.size(), 0.0);
    const std::size_t np = opt.size();
    const std::size_t quat_off = std::holds_alternative<Cuboid>(init) ? 6 : np;

    FitTrace trace;
    double initial_loss = -1;
    int high_steps = 0;
    double last_metric = -1;

    // Heavy ball with a fixed rate settles into a limit cycle around the
    // optimum; halve the rate whenever the best loss plateaus and restart
    // from the best iterate.
    constexpr int kPlateauWindow = 30;
    double lr = cfg.lr;
    double best_loss = std::numeric_limits<double>::infinity();
    std::vector<double> best_opt = opt;
    int last_improve = 0;

    for (int step = 0; step <= cfg.steps; ++step) {
        std::vector<double> packed = to_packed(init, opt);
        ConvexShape cur = unpack_params(init, packed);
        LossValue lv = loss_with_grad(loss_id, cur, target, mcfg);

        trace.loss.push_back(lv.value);
        try {
            last_metric = oracle_metric(cur, target, step, last_metric);
        } catch (const Error&) {
            // polygon iterates can pass through invalid states; the metric
            // column keeps its previous value there
        }
        trace.metric.push_back(last_metric);
        if (step % cfg.snapshot_every == 0) trace.snapshots.push_back({step, packed});

        if (lv.value < best_loss) {
            best_loss = lv.value;
            best_opt = opt;
            last_improve = step;
        }
        if (initial_loss < 0) initial_loss = lv.value;
        if (lv.value < cfg.stop_tol) {
            trace.converged = true;
            break;
        }
        if (lv.value > kDivergenceFactor * initial_loss) {
            if (++high_steps >= kDivergenceWindow)
                fail(Errc::DivergenceDetected, "loss exceeded 10x its initial value for 50 steps");
        } else {
            high_steps = 0;
        }
        if (step == cfg.steps) break;
        if (step - last_improve >= kPlateauWindow) {
            lr *= 0.5;
            opt = best_opt;
            std::fill(vel.begin(), vel.end(), 0.0);
            last_improve = step;
            if (lr < 1e-12 * cfg.lr) break;
            continue;
        }

        // Chain rule into log-space coordinates: d/d(log w) = w * d/dw.
        std::vector<double> grad(lv.gradient.begin(), lv.gradient.begin() + long(np));
        for (std::size_t i : log_indices(init)) grad[i] *= packed[i];
        for (std::size_t i = 0; i < np; ++i) {
            vel[i] = cfg.momentum * vel[i] - lr * grad[i];
            opt[i] += vel[i];
        }
        if (quat_off < np) {
            double n = 0;
            for (std::size_t i = quat_off; i < quat_off + 4; ++i) n += opt[i] * opt[i];
            n = std::sqrt(n);
            for (std::size_t i = quat_off; i < quat_off + 4; ++i) opt[i] /= n;
        }
    }
    trace.final_params = to_packed(init, best_opt);
    return trace;
}

FitTrace fit_shape(const ConvexShape& init, const ConvexShape& target, const FitConfig& cfg) {
    if (cfg.steps < 1 || !(cfg.lr > 0) || cfg.momentum < 0 || cfg.momentum >= 1)
        fail(Errc::InputError, "invalid fit config");
    validate(init);
    validate(target);

    // Projection losses have spurious basins for badly placed starts (one
    // side stretched across the target). Retry from centroid-aligned starts
    // when plain descent lands above the acceptance band.
    constexpr double kRestartBand = 0.05;
    FitTrace best = descend_shape(init, target, cfg);
    if (best.converged) return best;
    for (double spin : {0.0, M_PI / 4}) {
        double reached = *std::min_element(best.loss.begin(), best.loss.end());
        if (reached < kRestartBand) break;
        FitTrace retry = descend_shape(recentered(init, target, spin), target, cfg);
        if (*std::min_element(retry.loss.begin(), retry.loss.end()) < reached) best = std::move(retry);
        if (best.converged) break;
    }
    return best;
}

ConvexShape shape_from_trace(const ConvexShape& init_prototype, const FitTrace& trace) {
    return unpack_params(init_prototype, trace.final_params);
}

FitTrace fit_separation(const TrajectoryBatch& batch, const FitConfig& cfg) {
    if (cfg.steps < 1 || !(cfg.lr > 0) || cfg.momentum < 0 || cfg.momentum >= 1)
        fail(Errc::InputError, "invalid fit config");
    validate(batch);

    const std::size_t B = batch.agents();
    const std::size_t T = batch.timesteps();
    TrajectoryBatch cur = batch;

    auto slot = [&](std::size_t i, std::size_t t, int corner, int axis) {
        return ((i * T + t) * 4 + std::size_t(corner)) * 2 + std::size_t(axis);
    };
    // Boxes move rigidly: the four corner gradients of a box are averaged
    // into one translation, which keeps every quad convex throughout.
    auto box_slot = [&](std::size_t i, std::size_t t, int axis) {
        return (i * T + t) * 2 + std::size_t(axis);
    };
    std::vector<double> vel(B * T * 2, 0.0);
    auto translated = [&](const TrajectoryBatch& base, const std::vector<double>& delta,
                          double scale) {
        TrajectoryBatch out = base;
        for (std::size_t i = 0; i < B; ++i)
            for (std::size_t t = 0; t < T; ++t)
                for (int c = 0; c < 4; ++c)
                    for (int a = 0; a < 2; ++a)
                        out.boxes[i][t][std::size_t(c)][std::size_t(a)] +=
                            scale * delta[box_slot(i, t, a)];
        return out;
    };

    FitTrace trace;
    double initial_loss = -1;
    int high_steps = 0;

    for (int step = 0; step <= cfg.steps; ++step) {
        OverlapReport rep = detail::mgiou_minus_unchecked(cur);
        trace.loss.push_back(rep.total);
        trace.metric.push_back(double(rep.collisions));

        std::vector<double> packed(B * T * 8);
        for (std::size_t i = 0; i < B; ++i)
            for (std::size_t t = 0; t < T; ++t)
                for (int c = 0; c < 4; ++c)
                    for (int a = 0; a < 2; ++a)
                        packed[slot(i, t, c, a)] = cur.boxes[i][t][std::size_t(c)][std::size_t(a)];
        if (step % cfg.snapshot_every == 0) trace.snapshots.push_back({step, packed});
        trace.final_params = packed;

        if (initial_loss < 0) initial_loss = rep.total;
        if (rep.total < cfg.stop_tol) {
            trace.converged = true;
            break;
        }
        if (initial_loss > 0 && rep.total > kDivergenceFactor * initial_loss) {
            if (++high_steps >= kDivergenceWindow)
                fail(Errc::DivergenceDetected, "loss exceeded 10x its initial value for 50 steps");
        } else {
            high_steps = 0;
        }
        if (step == cfg.steps) break;

        // Gradient assembled pair by pair; pair (i, j) at time t carries
        // weight s_i * m_i^t per the ordered accumulation. Corner gradients
        // collapse to a per-box translation gradient.
        std::vector<double> grad(B * T * 2, 0.0);
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t i = 0; i < B; ++i)
                for (std::size_t j = 0; j < B; ++j) {
                    if (i == j) continue;
                    double wgt = batch.scores[i] * batch.masks[i][t];
                    if (wgt == 0) continue;
                    LossValue k = pair_penalty_with_grad(cur.boxes[i][t], cur.boxes[j][t]);
                    for (int c = 0; c < 4; ++c)
                        for (int a = 0; a < 2; ++a) {
                            grad[box_slot(i, t, a)] +=
                                wgt * k.gradient[std::size_t(2 * c + a)] / 4.0;
                            grad[box_slot(j, t, a)] +=
                                wgt * k.gradient[std::size_t(8 + 2 * c + a)] / 4.0;
                        }

                    // When one projection contains the other on the minimizing
                    // normal the penalty is locally flat under translation.
                    // Nudge colliding pairs apart along their center offset.
                    if (i < j) {
                        // net translation component of this pair's gradient;
                        // pure shape gradients cancel under the rigid average
                        double tmax = 0;
                        for (int a = 0; a < 2; ++a) {
                            double ti = 0, tj = 0;
                            for (int c = 0; c < 4; ++c) {
                                ti += k.gradient[std::size_t(2 * c + a)] / 4.0;
                                tj += k.gradient[std::size_t(8 + 2 * c + a)] / 4.0;
                            }
                            tmax = std::max({tmax, std::fabs(ti), std::fabs(tj)});
                        }
                        if (tmax < 1e-6 && boxes_collide(cur.boxes[i][t], cur.boxes[j][t])) {
                            // push both boxes along the repulsive field of all
                            // boxes at this timestep, so the escape direction
                            // does not ram a third box
                            auto center = [&](std::size_t b) {
                                double cx = 0, cy = 0;
                                for (int c = 0; c < 4; ++c) {
                                    cx += cur.boxes[b][t][std::size_t(c)][0] / 4.0;
                                    cy += cur.boxes[b][t][std::size_t(c)][1] / 4.0;
                                }
                                return std::array<double, 2>{cx, cy};
                            };
                            auto push = [&](std::size_t b) {
                                auto cb = center(b);
                                double dx = 0, dy = 0;
                                for (std::size_t k2 = 0; k2 < B; ++k2) {
                                    if (k2 == b) continue;
                                    auto ck = center(k2);
                                    double ox = cb[0] - ck[0], oy = cb[1] - ck[1];
                                    double d2 = std::max(ox * ox + oy * oy, 1e-6);
                                    dx += ox / d2;
                                    dy += oy / d2;
                                }
                                double n = std::hypot(dx, dy);
                                if (n < 1e-9) { dx = double(b + 1); dy = 1; n = std::hypot(dx, dy); }
                                constexpr double kNudge = 0.5;
                                grad[box_slot(b, t, 0)] -= kNudge * dx / n;
                                grad[box_slot(b, t, 1)] -= kNudge * dy / n;
                            };
                            push(i);
                            push(j);
                        }
                    }
                }
        for (std::size_t s = 0; s < vel.size(); ++s)
            vel[s] = cfg.momentum * vel[s] - cfg.lr * grad[s];

        // Boxes at different timesteps never interact, so moves are accepted
        // box by box within each timestep: a box whose move would raise the
        // oracle collision count is shrunk, and frozen for this step if
        // shrinking does not help. Boxes with clear moves keep making
        // progress even when a neighbor sits pinned at exact contact.
        auto count_at = [&](const TrajectoryBatch& b, std::size_t t) {
            int n = 0;
            for (std::size_t i = 0; i < B; ++i)
                for (std::size_t j = i + 1; j < B; ++j)
                    if (boxes_collide(b.boxes[i][t], b.boxes[j][t])) ++n;
            return n;
        };
        TrajectoryBatch cand = cur;
        for (std::size_t t = 0; t < T; ++t) {
            int current = count_at(cand, t);
            for (std::size_t i = 0; i < B; ++i) {
                auto apply_box = [&](double scale) {
                    for (int c = 0; c < 4; ++c)
                        for (int a = 0; a < 2; ++a)
                            cand.boxes[i][t][std::size_t(c)][std::size_t(a)] =
                                cur.boxes[i][t][std::size_t(c)][std::size_t(a)] +
                                scale * vel[box_slot(i, t, a)];
                };
                double scale = 1.0;
                bool accepted = false;
                for (int tries = 0; tries < 13; ++tries, scale *= 0.5) {
                    apply_box(scale);
                    int after = count_at(cand, t);
                    if (after <= current) {
                        current = after;
                        accepted = true;
                        break;
                    }
                }
                if (accepted) {
                    if (scale < 1.0)
                        for (int a = 0; a < 2; ++a) vel[box_slot(i, t, a)] *= scale;
                } else {
                    apply_box(0.0);
                    for (int a = 0; a < 2; ++a) vel[box_slot(i, t, a)] = 0.0;
                }
            }
        }
        cur = std::move(cand);
    }
    return trace;
}

TrajectoryBatch batch_from_trace(const TrajectoryBatch& prototype, const FitTrace& trace) {
    TrajectoryBatch out = prototype;
    const std::size_t T = prototype.timesteps();
    std::size_t idx = 0;
    for (std::size_t i = 0; i < prototype.agents(); ++i)
        for (std::size_t t = 0; t < T; ++t)
            for (int c = 0; c < 4; ++c)
                for (int a = 0; a < 2; ++a)
                    out.boxes[i][t][std::size_t(c)][std::size_t(a)] = trace.final_params[idx++];
    return out;
}

}  // namespace mgiou
