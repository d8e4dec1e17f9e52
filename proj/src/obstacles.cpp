#include "agvplan/obstacles.hpp"

#include "agvplan/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace agv {
namespace {

constexpr double kSampleMatchTol = 1e-9;

Point2 normalized(Point2 v, const char* what) {
    const double len = norm(v);
    if (len <= kGeomEps) {
        throw ValidationError(std::string("cannot normalize zero direction in ") + what);
    }
    return {v.x / len, v.y / len};
}

} // namespace

std::pair<std::vector<Point2>, std::vector<Segment2>>
inflate_vertices(const Polygon2& poly, const InflationConfig& cfg) {
    if (cfg.radius < 0.0) {
        throw ValidationError("inflation radius must be non-negative");
    }
    const Point2 center = polygon_centroid(poly);
    const std::size_t n = poly.size();

    std::vector<Point2> vertices;
    vertices.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Point2 v = poly.vertex(j);
        const Point2 ray = v - center;
        if (norm(ray) <= kGeomEps) {
            throw ValidationError("vertex " + std::to_string(j) +
                                  " coincides with the obstacle center; inflation direction "
                                  "is undefined");
        }
        const Point2 dir = normalized(ray, "inflate_vertices");
        vertices.push_back(v + cfg.radius * dir);
    }

    // Closing edge first, then the consecutive pairs.
    std::vector<Segment2> edges;
    edges.reserve(n);
    edges.emplace_back(vertices[n - 1], vertices[0]);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        edges.emplace_back(vertices[j], vertices[j + 1]);
    }
    return {std::move(vertices), std::move(edges)};
}

std::vector<Point2> discretize_boundary(const Polygon2& poly, double precision) {
    if (precision <= 0.0) {
        throw ValidationError("discretization precision must be positive");
    }
    std::vector<Point2> samples;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly.vertex(i);
        const Point2 b = poly.vertex((i + 1) % n);
        const double len = distance(a, b);
        const auto count = static_cast<std::size_t>(std::ceil(len / precision));
        for (std::size_t k = 0; k < count; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(count);
            samples.push_back(a + t * (b - a));
        }
    }
    return samples;
}

std::vector<Point2> inflate_boundary(std::span<const Point2> samples, const Polygon2& poly,
                                     const InflationConfig& cfg) {
    const std::size_t n = poly.size();
    std::vector<Point2> out;
    out.reserve(samples.size());

    for (const Point2& s : samples) {
        // Vertex samples take the bisector of the two adjacent edge normals.
        bool placed = false;
        for (std::size_t j = 0; j < n && !placed; ++j) {
            if (distance(s, poly.vertex(j)) <= kSampleMatchTol) {
                const Point2 n_prev = poly.edge_normal((j + n - 1) % n);
                const Point2 n_next = poly.edge_normal(j);
                const Point2 dir = normalized(n_prev + n_next, "inflate_boundary vertex bisector");
                out.push_back(s + cfg.radius * dir);
                placed = true;
            }
        }
        if (placed) continue;

        // Edge-interior samples take the outward normal of their edge.
        std::size_t best_edge = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            const double d = point_segment_distance(s, poly.edge(j));
            if (d < best_dist) {
                best_dist = d;
                best_edge = j;
            }
        }
        if (best_dist > kSampleMatchTol) {
            throw ValidationError("boundary sample does not lie on the polygon boundary");
        }
        out.push_back(s + cfg.radius * poly.edge_normal(best_edge));
    }
    return out;
}

ObstacleSet process_obstacles(const std::vector<Polygon2>& obstacles,
                              const InflationConfig& cfg) {
    ObstacleSet set;
    set.raw = obstacles;
    set.boundary_nodes.reserve(obstacles.size());
    set.inflated_polygons.reserve(obstacles.size());

    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const Polygon2& poly = obstacles[i];
        try {
            auto [vertices, edges] = inflate_vertices(poly, cfg);
            for (const Point2& v : vertices) {
                set.inflated_vertices.push_back(v);
                set.inflated_vertex_owner.push_back(i);
            }
            for (const Segment2& e : edges) {
                set.inflated_edges.push_back(e);
            }
            set.inflated_polygons.emplace_back(std::move(vertices));

            const std::vector<Point2> boundary = discretize_boundary(poly, cfg.precision);
            set.boundary_nodes.push_back(inflate_boundary(boundary, poly, cfg));
        } catch (const ValidationError& e) {
            throw ValidationError("obstacle " + std::to_string(i) + ": " + e.what());
        }
    }
    return set;
}

} // namespace agv
