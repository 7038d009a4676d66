// SPDX-License-Identifier: Apache-2.0
#include "mgiou/shape_json.hpp"

namespace mgiou {

using nlohmann::json;

json shape_to_json(const ConvexShape& s) {
    json j;
    if (const auto* r = std::get_if<RotatedRect>(&s)) {
        j["kind"] = "rect";
        j["center"] = {r->cx, r->cy};
        j["size"] = {r->w, r->h};
        j["angle"] = r->angle;
    } else if (const auto* c = std::get_if<Cuboid>(&s)) {
        j["kind"] = "cuboid";
        j["center"] = c->center;
        j["dims"] = c->dims;
        j["quat"] = c->quat;
    } else if (const auto* e = std::get_if<Ellipse>(&s)) {
        j["kind"] = "ellipse";
        j["center"] = {e->cx, e->cy};
        j["semi_axes"] = {e->s1, e->s2};
        j["angle"] = e->angle;
    } else {
        const auto& p = std::get<Polygon>(s);
        j["kind"] = "polygon";
        j["vertices"] = p.verts;
    }
    return j;
}

ConvexShape shape_from_json(const json& j) {
    try {
        const std::string kind = j.at("kind");
        if (kind == "rect") {
            RotatedRect r;
            r.cx = j.at("center").at(0);
            r.cy = j.at("center").at(1);
            r.w = j.at("size").at(0);
            r.h = j.at("size").at(1);
            r.angle = j.value("angle", 0.0);
            return r;
        }
        if (kind == "cuboid") {
            Cuboid c;
            c.center = j.at("center");
            c.dims = j.at("dims");
            c.quat = j.value("quat", std::array<double, 4>{1, 0, 0, 0});
            return c;
        }
        if (kind == "ellipse") {
            Ellipse e;
            e.cx = j.at("center").at(0);
            e.cy = j.at("center").at(1);
            e.s1 = j.at("semi_axes").at(0);
            e.s2 = j.at("semi_axes").at(1);
            e.angle = j.value("angle", 0.0);
            return e;
        }
        if (kind == "polygon") {
            Polygon p;
            p.verts = j.at("vertices").get<std::vector<std::array<double, 2>>>();
            return p;
        }
        fail(Errc::InputError, "unknown shape kind: " + kind);
    } catch (const json::exception& e) {
        fail(Errc::InputError, std::string("malformed shape record: ") + e.what());
    }
}

json batch_to_json(const TrajectoryBatch& b) {
    json agents = json::array();
    for (std::size_t i = 0; i < b.agents(); ++i) {
        json boxes = json::array();
        for (const auto& box : b.boxes[i]) {
            json q = json::array();
            for (const auto& v : box) q.push_back({v[0], v[1]});
            boxes.push_back(q);
        }
        agents.push_back({{"boxes", boxes}, {"mask", b.masks[i]}, {"score", b.scores[i]}});
    }
    return {{"agents", agents}};
}

TrajectoryBatch batch_from_json(const json& j) {
    try {
        TrajectoryBatch b;
        for (const auto& agent : j.at("agents")) {
            std::vector<QuadBox> boxes;
            for (const auto& box : agent.at("boxes")) {
                QuadBox q;
                if (box.size() != 4) fail(Errc::InputError, "trajectory box needs 4 vertices");
                for (std::size_t k = 0; k < 4; ++k)
                    q[k] = {box.at(k).at(0).get<double>(), box.at(k).at(1).get<double>()};
                boxes.push_back(q);
            }
            b.boxes.push_back(std::move(boxes));
            b.masks.push_back(agent.at("mask").get<std::vector<int>>());
            b.scores.push_back(agent.at("score").get<double>());
        }
        return b;
    } catch (const json::exception& e) {
        fail(Errc::InputError, std::string("malformed trajectory record: ") + e.what());
    }
}

json result_to_json(const MgiouResult& r) {
    json per = json::array();
    for (const auto& [dir, v] : r.per_normal)
        per.push_back({{"dir", {dir[0], dir[1], dir[2]}}, {"giou1d", v}});
    return {{"mgiou", r.mgiou}, {"loss", r.loss}, {"convexity", r.convexity}, {"per_normal", per}};
}

json report_to_json(const OverlapReport& r) {
    return {{"total", r.total}, {"per_agent", r.per_agent}, {"collisions", r.collisions}};
}

}  // namespace mgiou
