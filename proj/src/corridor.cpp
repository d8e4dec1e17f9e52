#include "agvplan/corridor.hpp"

#include "agvplan/errors.hpp"

#include <algorithm>

namespace agv {
namespace {

Aabb bounds_from(Point2 center, const std::array<double, 4>& extents) {
    return {center.x - extents[1], center.x + extents[3],
            center.y - extents[0], center.y + extents[2]};
}

bool contains_any(const Aabb& box, std::span<const Point2> nodes) {
    for (const Point2& p : nodes) {
        if (point_in_aabb(p, box)) return true;
    }
    return false;
}

bool contains_any(const Aabb& box, const std::vector<std::vector<Point2>>& grouped) {
    for (const auto& group : grouped) {
        if (contains_any(box, std::span<const Point2>(group))) return true;
    }
    return false;
}

} // namespace

Aabb box_to_bounds(const CorridorBox& b) {
    return bounds_from(b.center, b.extents);
}

std::vector<Point2> obs_check(const CorridorBox& b, std::span<const Point2> nodes) {
    const Aabb box = box_to_bounds(b);
    std::vector<Point2> inside;
    for (const Point2& p : nodes) {
        if (point_in_aabb(p, box)) inside.push_back(p);
    }
    return inside;
}

std::vector<Point2> obs_check(const CorridorBox& b,
                              const std::vector<std::vector<Point2>>& grouped_nodes) {
    const Aabb box = box_to_bounds(b);
    std::vector<Point2> inside;
    for (const auto& group : grouped_nodes) {
        for (const Point2& p : group) {
            if (point_in_aabb(p, box)) inside.push_back(p);
        }
    }
    return inside;
}

namespace {

void check_inputs(const PlannedPath& path, const FsrcConfig& cfg) {
    if (path.samples.empty()) {
        throw ValidationError("corridor construction needs at least one path point");
    }
    if (cfg.initial_step <= 0.0 || cfg.growth_factor <= 1.0 || cfg.max_extent <= 0.0 ||
        cfg.linear_step_cap <= 0.0 || cfg.max_reuse < 0) {
        throw ValidationError("invalid corridor configuration");
    }
}

// Directional growth around one path point (Strategy 3). Checks run against
// the prefiltered node set only; every committed extent has been verified
// node-free for the whole tentative box.
CorridorBox grow_box(Point2 center, std::span<const Point2> nodes, const FsrcConfig& cfg) {
    CorridorBox box;
    box.center = center;
    std::array<double, 4> step{cfg.initial_step, cfg.initial_step, cfg.initial_step,
                               cfg.initial_step};
    std::array<bool, 4> frozen{};

    while (!(frozen[0] && frozen[1] && frozen[2] && frozen[3])) {
        for (int j = 0; j < 4; ++j) {
            if (frozen[j]) continue;

            std::array<double, 4> tmp = box.extents;
            tmp[j] += step[j];
            if (tmp[j] > cfg.max_extent) {
                // Rapid overshoot: the direction freezes where it stands, not
                // clamped to the cap.
                frozen[j] = true;
                box.final_step[j] = step[j];
                continue;
            }

            if (!contains_any(bounds_from(center, tmp), nodes)) {
                box.extents[j] = tmp[j];
                step[j] *= cfg.growth_factor;
                continue;
            }

            // Hit something: refine with a constant linear step until blocked
            // again or the cap is reached, then freeze this direction.
            step[j] = std::min(step[j] / 4.0, cfg.linear_step_cap);
            box.final_step[j] = step[j];
            double tentative = box.extents[j] + step[j];
            while (tentative < cfg.max_extent) {
                tmp[j] = tentative;
                if (contains_any(bounds_from(center, tmp), nodes)) {
                    box.blocked[j] = true;
                    break;
                }
                box.extents[j] = tentative;
                tentative += step[j];
            }
            frozen[j] = true;
        }
    }
    return box;
}

} // namespace

Corridor build_fsrc(const PlannedPath& path,
                    const std::vector<std::vector<Point2>>& boundary_nodes,
                    const FsrcConfig& cfg) {
    check_inputs(path, cfg);

    Corridor corridor;
    corridor.boxes.reserve(path.samples.size());
    int reuse_count = 1;

    for (std::size_t i = 0; i < path.samples.size(); ++i) {
        const Point2 p = path.samples[i];

        // Strategy 1: adjacent path points usually share a box. The copied
        // extents sit around a new center and so cover ground the previous
        // checks never saw; one scan of the shifted box keeps reuse safe and
        // is still far cheaper than growing a fresh box.
        if (i > 0 && reuse_count <= cfg.max_reuse &&
            point_in_aabb(p, box_to_bounds(corridor.boxes[i - 1]))) {
            CorridorBox box = corridor.boxes[i - 1];
            box.center = p;
            if (!contains_any(box_to_bounds(box), boundary_nodes)) {
                box.reused = true;
                box.blocked = {false, false, false, false};
                corridor.boxes.push_back(box);
                ++reuse_count;
                continue;
            }
        }
        reuse_count = 1;

        // Strategy 2: try the full-size box first and keep only the nodes it
        // contains for the growth phase.
        CorridorBox initial;
        initial.center = p;
        initial.extents = {cfg.max_extent, cfg.max_extent, cfg.max_extent, cfg.max_extent};
        const std::vector<Point2> restricted = obs_check(initial, boundary_nodes);
        if (restricted.empty()) {
            corridor.boxes.push_back(initial);
            continue;
        }

        corridor.boxes.push_back(grow_box(p, restricted, cfg));
    }
    return corridor;
}

Corridor build_stc_baseline(const PlannedPath& path,
                            const std::vector<std::vector<Point2>>& boundary_nodes,
                            const FsrcConfig& cfg) {
    check_inputs(path, cfg);

    Corridor corridor;
    corridor.boxes.reserve(path.samples.size());

    for (const Point2& p : path.samples) {
        CorridorBox box;
        box.center = p;
        box.final_step = {cfg.linear_step_cap, cfg.linear_step_cap, cfg.linear_step_cap,
                          cfg.linear_step_cap};
        std::array<bool, 4> frozen{};

        while (!(frozen[0] && frozen[1] && frozen[2] && frozen[3])) {
            for (int j = 0; j < 4; ++j) {
                if (frozen[j]) continue;
                std::array<double, 4> tmp = box.extents;
                tmp[j] += cfg.linear_step_cap;
                if (tmp[j] > cfg.max_extent) {
                    frozen[j] = true;
                    continue;
                }
                if (contains_any(bounds_from(p, tmp), boundary_nodes)) {
                    frozen[j] = true;
                    box.blocked[j] = true;
                    continue;
                }
                box.extents[j] = tmp[j];
            }
        }
        corridor.boxes.push_back(box);
    }
    return corridor;
}

} // namespace agv
