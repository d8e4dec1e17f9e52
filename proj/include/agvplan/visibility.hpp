#pragma once

#include "agvplan/geometry.hpp"
#include "agvplan/obstacles.hpp"

#include <cstddef>
#include <vector>

namespace agv {

// Weighted visibility graph over {start, goal} and the inflated obstacle
// vertices. Node 0 is the start, node 1 the goal. Edges carry Euclidean
// distance; a blocked pair is simply absent.
struct VisibilityGraph {
    struct Edge {
        std::size_t to = 0;
        double weight = 0.0;
    };

    std::vector<Point2> nodes;
    std::vector<std::vector<Edge>> adjacency;
};

struct PlannedPath {
    std::vector<Point2> waypoints;  // graph vertices along the shortest path
    std::vector<Point2> samples;    // uniform resampling, n points
    double length = 0.0;            // polyline length of waypoints
};

// A segment is traversable when it does not properly intersect any inflated
// edge and its midpoint is not strictly inside any inflated polygon. The
// midpoint test rejects interior chords of a single inflated polygon, which
// touch the edge loop only at their endpoints and would otherwise pass.
bool visible(Point2 a, Point2 b, const ObstacleSet& obs);

// Throws ValidationError when either endpoint is strictly inside an inflated
// polygon (exactly on the boundary is fine).
VisibilityGraph build_adjacency(Point2 start, Point2 goal, const ObstacleSet& obs);

// Dijkstra from node 0 to node 1; the search stops as soon as the goal is
// settled. Equal-distance frontier entries pop in node-index order so results
// are deterministic. Throws ValidationError when the goal is unreachable.
std::vector<Point2> shortest_path(const VisibilityGraph& graph);

// Full pipeline: adjacency list, early-exit Dijkstra, uniform resampling
// into n samples.
PlannedPath plan_path(Point2 start, Point2 goal, const ObstacleSet& obs, std::size_t n);

} // namespace agv
