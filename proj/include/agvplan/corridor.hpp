#pragma once

#include "agvplan/geometry.hpp"
#include "agvplan/visibility.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace agv {

struct FsrcConfig {
    double initial_step = 0.2;    // first rapid-phase step (m)
    double growth_factor = 2.0;   // rapid-phase multiplier, > 1
    double max_extent = 10.0;     // half-length of the initial box / growth cap (m)
    double linear_step_cap = 0.2; // linear-phase step upper bound (m)
    int max_reuse = 8;            // max consecutive box reuses
};

// Axis-aligned box around a path point, stored as the four directional
// extents (L1 down, L2 left, L3 up, L4 right). final_step records the last
// step size attempted per direction; blocked marks directions frozen by a
// node hit rather than by the extent cap.
struct CorridorBox {
    Point2 center;
    std::array<double, 4> extents{};
    std::array<double, 4> final_step{};
    std::array<bool, 4> blocked{};
    bool reused = false;
};

struct Corridor {
    std::vector<CorridorBox> boxes;

    std::size_t reused_count() const {
        std::size_t n = 0;
        for (const auto& b : boxes) n += b.reused ? 1 : 0;
        return n;
    }
};

// Extents to absolute bounds: x in [cx - L2, cx + L4], y in [cy - L1, cy + L3].
Aabb box_to_bounds(const CorridorBox& b);

// Subset of nodes inside the closed box, input order preserved.
std::vector<Point2> obs_check(const CorridorBox& b, std::span<const Point2> nodes);
std::vector<Point2> obs_check(const CorridorBox& b,
                              const std::vector<std::vector<Point2>>& grouped_nodes);

// Fast safe rectangular corridor over the resampled path. Per point: reuse
// the previous box when the point is still inside it (Strategy 1), skip
// growth entirely when the full-size initial box is already node-free
// (Strategy 2), otherwise grow per direction in a rapid doubling phase
// followed by a constant-step linear phase, checking only the nodes that fell
// inside the initial box (Strategy 3).
Corridor build_fsrc(const PlannedPath& path,
                    const std::vector<std::vector<Point2>>& boundary_nodes,
                    const FsrcConfig& cfg);

// Timing baseline: constant-step expansion in every direction, no reuse, no
// prefilter, every check against the full node set.
Corridor build_stc_baseline(const PlannedPath& path,
                            const std::vector<std::vector<Point2>>& boundary_nodes,
                            const FsrcConfig& cfg);

} // namespace agv
