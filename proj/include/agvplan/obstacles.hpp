#pragma once

#include "agvplan/geometry.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace agv {

struct InflationConfig {
    double radius = 0.4223;  // AGV coverage-circle radius R (m)
    double precision = 0.1;  // boundary sample spacing (m)
};

// Derived obstacle sets used by the planner and the corridor builder:
// inflated edges block visibility segments, inflated vertices are the graph
// nodes, and inflated boundary nodes are the collision points the corridor
// expansion checks against.
struct ObstacleSet {
    std::vector<Polygon2> raw;
    std::vector<Segment2> inflated_edges;             // one closed loop per obstacle
    std::vector<Point2> inflated_vertices;            // flat, in obstacle order
    std::vector<std::size_t> inflated_vertex_owner;   // owning obstacle per entry
    std::vector<std::vector<Point2>> boundary_nodes;  // grouped per obstacle
    std::vector<Polygon2> inflated_polygons;          // for interior-chord rejection

    std::size_t boundary_node_count() const {
        std::size_t n = 0;
        for (const auto& group : boundary_nodes) n += group.size();
        return n;
    }
};

// Pushes every vertex away from the vertex-mean center by radius and returns
// the displaced vertices together with the closed loop of edges over them.
// Throws ValidationError when a vertex coincides with the center (the push
// direction would be undefined).
std::pair<std::vector<Point2>, std::vector<Segment2>>
inflate_vertices(const Polygon2& poly, const InflationConfig& cfg);

// Samples the original polygon boundary. Each edge of length L contributes
// ceil(L / precision) evenly spaced samples including its start vertex and
// excluding its end vertex, so consecutive spacing never exceeds precision
// and the closed loop has no duplicates.
std::vector<Point2> discretize_boundary(const Polygon2& poly, double precision);

// Offsets each boundary sample outward by radius: along the edge normal for
// edge-interior samples, along the normalized sum of the two adjacent edge
// normals for samples sitting on a vertex.
std::vector<Point2> inflate_boundary(std::span<const Point2> samples, const Polygon2& poly,
                                     const InflationConfig& cfg);

// Full obstacle handling pass over all polygons, in input order.
ObstacleSet process_obstacles(const std::vector<Polygon2>& obstacles,
                              const InflationConfig& cfg);

} // namespace agv
