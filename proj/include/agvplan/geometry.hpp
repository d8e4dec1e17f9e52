#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace agv {

// Tolerance for orientation/collinearity classification. Maps here are tens
// of meters across, so this is far below physical meaning but safely above
// double rounding noise.
inline constexpr double kGeomEps = 1e-12;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

// Signed area of the triangle (a, b, c), doubled. Positive when c lies left
// of the directed line a->b.
inline double orient(Point2 a, Point2 b, Point2 c) {
    return cross(b - a, c - a);
}

// Directed segment. Zero-length segments are rejected at construction.
class Segment2 {
public:
    Segment2(Point2 a, Point2 b);

    Point2 a() const { return a_; }
    Point2 b() const { return b_; }
    double length() const { return distance(a_, b_); }

private:
    Point2 a_;
    Point2 b_;
};

// Simple polygon, implicitly closed. Vertex order is normalized to
// counterclockwise at construction so outward edge normals are well defined
// everywhere downstream.
class Polygon2 {
public:
    explicit Polygon2(std::vector<Point2> vertices);

    const std::vector<Point2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    Point2 vertex(std::size_t i) const { return vertices_[i]; }

    // Edge i runs from vertex i to vertex (i+1) mod size.
    Segment2 edge(std::size_t i) const;

    // Outward unit normal of edge i (right-hand side of the CCW loop).
    Point2 edge_normal(std::size_t i) const;

    double signed_area() const;

private:
    std::vector<Point2> vertices_;
};

struct Aabb {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
};

// True iff the open interiors cross, or an endpoint of one segment lies
// strictly inside the other's interior. Segments that merely share an
// endpoint do not properly intersect.
bool segments_properly_intersect(const Segment2& s1, const Segment2& s2);

// True iff p lies in the open interior of poly; boundary points are outside.
bool point_strictly_inside_polygon(Point2 p, const Polygon2& poly);

// Closed-box membership.
inline bool point_in_aabb(Point2 p, const Aabb& box) {
    return p.x >= box.x_min && p.x <= box.x_max &&
           p.y >= box.y_min && p.y <= box.y_max;
}

// Arithmetic mean of the vertex list. Deliberately not the area centroid:
// the inflation scheme averages vertices.
Point2 polygon_centroid(const Polygon2& poly);

// n points spaced uniformly by cumulative arc length along the polyline.
// First and last outputs equal first and last inputs exactly. Throws
// ValidationError for a zero-total-length polyline.
std::vector<Point2> polyline_resample(std::span<const Point2> points, std::size_t n);

double polyline_length(std::span<const Point2> points);

// Distance from p to the closed segment.
double point_segment_distance(Point2 p, const Segment2& s);

} // namespace agv
