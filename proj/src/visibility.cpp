#include "agvplan/visibility.hpp"

#include "agvplan/errors.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>

namespace agv {

bool visible(Point2 a, Point2 b, const ObstacleSet& obs) {
    const Segment2 seg(a, b);
    for (const Segment2& edge : obs.inflated_edges) {
        if (segments_properly_intersect(seg, edge)) return false;
    }
    const Point2 mid = a + 0.5 * (b - a);
    for (const Polygon2& poly : obs.inflated_polygons) {
        if (point_strictly_inside_polygon(mid, poly)) return false;
    }
    return true;
}

VisibilityGraph build_adjacency(Point2 start, Point2 goal, const ObstacleSet& obs) {
    for (std::size_t i = 0; i < obs.inflated_polygons.size(); ++i) {
        if (point_strictly_inside_polygon(start, obs.inflated_polygons[i])) {
            throw ValidationError("start inside inflated obstacle " + std::to_string(i));
        }
        if (point_strictly_inside_polygon(goal, obs.inflated_polygons[i])) {
            throw ValidationError("goal inside inflated obstacle " + std::to_string(i));
        }
    }

    VisibilityGraph graph;
    graph.nodes.reserve(2 + obs.inflated_vertices.size());
    graph.nodes.push_back(start);
    graph.nodes.push_back(goal);
    graph.nodes.insert(graph.nodes.end(), obs.inflated_vertices.begin(),
                       obs.inflated_vertices.end());

    const std::size_t n = graph.nodes.size();
    graph.adjacency.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const double w = distance(graph.nodes[u], graph.nodes[v]);
            if (w <= kGeomEps) continue;  // coincident nodes
            if (!visible(graph.nodes[u], graph.nodes[v], obs)) continue;
            graph.adjacency[u].push_back({v, w});
            graph.adjacency[v].push_back({u, w});
        }
    }
    return graph;
}

namespace {

std::size_t component_size(const VisibilityGraph& graph, std::size_t root) {
    std::vector<char> seen(graph.nodes.size(), 0);
    std::vector<std::size_t> stack{root};
    seen[root] = 1;
    std::size_t count = 0;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        ++count;
        for (const auto& e : graph.adjacency[u]) {
            if (!seen[e.to]) {
                seen[e.to] = 1;
                stack.push_back(e.to);
            }
        }
    }
    return count;
}

} // namespace

std::vector<Point2> shortest_path(const VisibilityGraph& graph) {
    const std::size_t n = graph.nodes.size();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<std::size_t> prev(n, n);
    std::vector<char> settled(n, 0);

    // Lazy-deletion priority queue; pair ordering gives the lowest-index
    // tie-break for equal distances.
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> frontier;
    dist[0] = 0.0;
    frontier.push({0.0, 0});

    bool reached = false;
    while (!frontier.empty()) {
        const auto [d, u] = frontier.top();
        frontier.pop();
        if (settled[u] || d > dist[u]) continue;  // stale entry
        settled[u] = 1;
        if (u == 1) {
            reached = true;
            break;  // goal settled: early exit
        }
        for (const auto& e : graph.adjacency[u]) {
            const double nd = d + e.weight;
            if (nd < dist[e.to]) {
                dist[e.to] = nd;
                prev[e.to] = u;
                frontier.push({nd, e.to});
            }
        }
    }

    if (!reached) {
        throw ValidationError(
            "no path between start and goal: start component has " +
            std::to_string(component_size(graph, 0)) + " nodes, goal component has " +
            std::to_string(component_size(graph, 1)) + " nodes, graph has " +
            std::to_string(n));
    }

    std::vector<Point2> path;
    std::size_t u = 1;
    while (true) {
        path.push_back(graph.nodes[u]);
        if (u == 0) break;
        u = prev[u];
    }
    std::reverse(path.begin(), path.end());
    return path;
}

PlannedPath plan_path(Point2 start, Point2 goal, const ObstacleSet& obs, std::size_t n) {
    if (n < 2) {
        throw ValidationError("plan_path needs at least 2 samples");
    }
    const VisibilityGraph graph = build_adjacency(start, goal, obs);
    PlannedPath path;
    path.waypoints = shortest_path(graph);
    path.samples = polyline_resample(path.waypoints, n);
    path.length = polyline_length(path.waypoints);
    return path;
}

} // namespace agv
