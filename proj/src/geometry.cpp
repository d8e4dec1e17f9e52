#include "agvplan/geometry.hpp"

#include "agvplan/errors.hpp"

#include <algorithm>
#include <string>

namespace agv {
namespace {

int orient_sign(Point2 a, Point2 b, Point2 c) {
    const double v = orient(a, b, c);
    if (v > kGeomEps) return 1;
    if (v < -kGeomEps) return -1;
    return 0;
}

// p strictly between a and b on their common line (collinearity assumed).
bool strictly_between(Point2 a, Point2 b, Point2 p) {
    if (distance(p, a) <= kGeomEps || distance(p, b) <= kGeomEps) return false;
    return std::min(a.x, b.x) - kGeomEps <= p.x && p.x <= std::max(a.x, b.x) + kGeomEps &&
           std::min(a.y, b.y) - kGeomEps <= p.y && p.y <= std::max(a.y, b.y) + kGeomEps;
}

} // namespace

Segment2::Segment2(Point2 a, Point2 b) : a_(a), b_(b) {
    if (distance(a, b) <= kGeomEps) {
        throw ValidationError("zero-length segment at (" + std::to_string(a.x) + ", " +
                              std::to_string(a.y) + ")");
    }
}

Polygon2::Polygon2(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
    const std::size_t n = vertices_.size();
    if (n < 3) {
        throw ValidationError("polygon needs at least 3 vertices, got " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (distance(vertices_[i], vertices_[(i + 1) % n]) <= kGeomEps) {
            throw ValidationError("polygon has coincident consecutive vertices at index " +
                                  std::to_string(i));
        }
    }

    // Normalize to counterclockwise.
    double area2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        area2 += cross(vertices_[i], vertices_[(i + 1) % n]);
    }
    if (std::abs(area2) <= kGeomEps) {
        throw ValidationError("polygon is degenerate (zero area)");
    }
    if (area2 < 0.0) {
        std::reverse(vertices_.begin(), vertices_.end());
    }

    // Simplicity: non-adjacent edges must not touch at all; adjacent edges
    // must not fold back onto each other.
    for (std::size_t i = 0; i < n; ++i) {
        const Segment2 ei = edge(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            const Segment2 ej = edge(j);
            if (adjacent) {
                // Shared vertex is expected; a spike (one edge reversing onto
                // the other) is not.
                const Point2 shared = (j == i + 1) ? vertices_[j] : vertices_[0];
                const Point2 da = (j == i + 1) ? vertices_[i] - shared : vertices_[1] - shared;
                const Point2 db = (j == i + 1) ? vertices_[(j + 1) % n] - shared
                                               : vertices_[n - 1] - shared;
                if (std::abs(cross(da, db)) <= kGeomEps && dot(da, db) > 0.0) {
                    throw ValidationError("polygon has a spike at vertex " + std::to_string(j));
                }
                continue;
            }
            if (segments_properly_intersect(ei, ej)) {
                throw ValidationError("polygon is self-intersecting between edges " +
                                      std::to_string(i) + " and " + std::to_string(j));
            }
            // Endpoint-on-endpoint contact between non-adjacent edges also
            // breaks simplicity.
            if (distance(ei.a(), ej.a()) <= kGeomEps || distance(ei.a(), ej.b()) <= kGeomEps ||
                distance(ei.b(), ej.a()) <= kGeomEps || distance(ei.b(), ej.b()) <= kGeomEps) {
                throw ValidationError("polygon repeats a vertex between edges " +
                                      std::to_string(i) + " and " + std::to_string(j));
            }
        }
    }
}

Segment2 Polygon2::edge(std::size_t i) const {
    return Segment2(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
}

Point2 Polygon2::edge_normal(std::size_t i) const {
    const Point2 d = vertices_[(i + 1) % vertices_.size()] - vertices_[i];
    const double len = norm(d);
    return {d.y / len, -d.x / len};
}

double Polygon2::signed_area() const {
    double area2 = 0.0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        area2 += cross(vertices_[i], vertices_[(i + 1) % n]);
    }
    return 0.5 * area2;
}

bool segments_properly_intersect(const Segment2& s1, const Segment2& s2) {
    const Point2 a = s1.a(), b = s1.b(), c = s2.a(), d = s2.b();
    const int d1 = orient_sign(c, d, a);
    const int d2 = orient_sign(c, d, b);
    const int d3 = orient_sign(a, b, c);
    const int d4 = orient_sign(a, b, d);

    if (d1 * d2 < 0 && d3 * d4 < 0) return true;

    // Collinear contact counts only when an endpoint sits strictly inside the
    // other segment's interior; shared endpoints alone do not block.
    if (d1 == 0 && strictly_between(c, d, a)) return true;
    if (d2 == 0 && strictly_between(c, d, b)) return true;
    if (d3 == 0 && strictly_between(a, b, c)) return true;
    if (d4 == 0 && strictly_between(a, b, d)) return true;
    return false;
}

bool point_strictly_inside_polygon(Point2 p, const Polygon2& poly) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (point_segment_distance(p, poly.edge(i)) <= kGeomEps) return false;
    }
    // Even-odd ray crossing toward +x.
    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly.vertex(i);
        const Point2 b = poly.vertex((i + 1) % n);
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

Point2 polygon_centroid(const Polygon2& poly) {
    Point2 sum{0.0, 0.0};
    for (const Point2& v : poly.vertices()) sum = sum + v;
    const double inv = 1.0 / static_cast<double>(poly.size());
    return {sum.x * inv, sum.y * inv};
}

double polyline_length(std::span<const Point2> points) {
    double len = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        len += distance(points[i - 1], points[i]);
    }
    return len;
}

std::vector<Point2> polyline_resample(std::span<const Point2> points, std::size_t n) {
    if (points.size() < 2) {
        throw ValidationError("polyline_resample needs at least 2 points");
    }
    if (n < 2) {
        throw ValidationError("polyline_resample needs n >= 2");
    }

    std::vector<double> cum(points.size(), 0.0);
    for (std::size_t i = 1; i < points.size(); ++i) {
        cum[i] = cum[i - 1] + distance(points[i - 1], points[i]);
    }
    const double total = cum.back();
    if (total <= kGeomEps) {
        throw ValidationError("degenerate path: polyline has zero total length");
    }

    std::vector<Point2> out;
    out.reserve(n);
    out.push_back(points.front());
    std::size_t seg = 0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(n - 1);
        while (seg + 2 < points.size() && cum[seg + 1] < target) ++seg;
        const double span_len = cum[seg + 1] - cum[seg];
        const double t = span_len > 0.0 ? (target - cum[seg]) / span_len : 0.0;
        out.push_back(points[seg] + t * (points[seg + 1] - points[seg]));
    }
    out.push_back(points.back());
    return out;
}

double point_segment_distance(Point2 p, const Segment2& s) {
    const Point2 d = s.b() - s.a();
    const double len2 = dot(d, d);
    double t = dot(p - s.a(), d) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, s.a() + t * d);
}

} // namespace agv
