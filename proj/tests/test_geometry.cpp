#include "agvplan/errors.hpp"
#include "agvplan/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace agv;

namespace {

Polygon2 unit_square_at_origin() {
    return Polygon2({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
}

// Brute-force arc-length walk: the position of each sample along the original
// polyline, assuming samples appear in path order.
std::vector<double> arc_positions(const std::vector<Point2>& polyline,
                                  const std::vector<Point2>& samples) {
    std::vector<double> cum(polyline.size(), 0.0);
    for (std::size_t i = 1; i < polyline.size(); ++i) {
        cum[i] = cum[i - 1] + distance(polyline[i - 1], polyline[i]);
    }
    std::vector<double> out;
    out.reserve(samples.size());
    std::size_t seg = 0;
    for (const Point2& p : samples) {
        while (seg + 2 < polyline.size() &&
               point_segment_distance(p, Segment2(polyline[seg], polyline[seg + 1])) > 1e-9) {
            ++seg;
        }
        out.push_back(cum[seg] + distance(polyline[seg], p));
    }
    return out;
}

} // namespace

TEST_CASE("segments_properly_intersect: crossing diagonals") {
    CHECK(segments_properly_intersect(Segment2({0, 0}, {2, 2}), Segment2({0, 2}, {2, 0})));
}

TEST_CASE("segments_properly_intersect: shared endpoint only") {
    CHECK_FALSE(
        segments_properly_intersect(Segment2({0, 0}, {1, 0}), Segment2({1, 0}, {2, 1})));
}

TEST_CASE("segments_properly_intersect: endpoint touches interior") {
    CHECK(segments_properly_intersect(Segment2({0, 0}, {2, 0}), Segment2({1, 0}, {1, -1})));
}

TEST_CASE("segments_properly_intersect: identical segments do not block") {
    CHECK_FALSE(
        segments_properly_intersect(Segment2({0, 0}, {1, 1}), Segment2({0, 0}, {1, 1})));
}

TEST_CASE("segments_properly_intersect: collinear overlap with interior endpoint") {
    CHECK(segments_properly_intersect(Segment2({0, 0}, {2, 0}), Segment2({1, 0}, {3, 0})));
}

TEST_CASE("segments_properly_intersect is symmetric") {
    std::mt19937_64 rng(7);
    const auto coord = [&rng] {
        return static_cast<double>(rng() % 2000) / 100.0 - 10.0;
    };
    int checked = 0;
    for (int k = 0; k < 500; ++k) {
        const Point2 a{coord(), coord()}, b{coord(), coord()};
        const Point2 c{coord(), coord()}, d{coord(), coord()};
        if (distance(a, b) <= kGeomEps || distance(c, d) <= kGeomEps) continue;
        const Segment2 s1(a, b), s2(c, d);
        CHECK(segments_properly_intersect(s1, s2) == segments_properly_intersect(s2, s1));
        ++checked;
    }
    CHECK(checked > 400);
}

TEST_CASE("point_strictly_inside_polygon") {
    const Polygon2 square = unit_square_at_origin();
    CHECK(point_strictly_inside_polygon({0, 0}, square));
    CHECK_FALSE(point_strictly_inside_polygon({0.5, 0}, square));  // on boundary
    CHECK_FALSE(point_strictly_inside_polygon({5, 5}, square));
    CHECK_FALSE(point_strictly_inside_polygon({0.5, 0.5}, square));  // on vertex
}

TEST_CASE("point_in_aabb closed membership") {
    const Aabb box{-1, 1, -1, 1};
    CHECK(point_in_aabb({0.5, 0.5}, box));
    CHECK(point_in_aabb({1.0, 0}, box));
    CHECK_FALSE(point_in_aabb({1.5, 0}, box));
}

TEST_CASE("point_in_aabb agrees with scalar comparisons on random pairs") {
    std::mt19937_64 rng(11);
    const auto coord = [&rng] {
        return static_cast<double>(rng() % 4000) / 100.0 - 20.0;
    };
    for (int k = 0; k < 10000; ++k) {
        const double x0 = coord(), x1 = coord(), y0 = coord(), y1 = coord();
        const Aabb box{std::min(x0, x1), std::max(x0, x1), std::min(y0, y1),
                       std::max(y0, y1)};
        const Point2 p{coord(), coord()};
        const bool expected = p.x >= box.x_min && p.x <= box.x_max && p.y >= box.y_min &&
                              p.y <= box.y_max;
        REQUIRE(point_in_aabb(p, box) == expected);
    }
}

TEST_CASE("polygon_centroid is the vertex mean") {
    const Polygon2 square({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    CHECK(polygon_centroid(square).x == doctest::Approx(0.0));
    CHECK(polygon_centroid(square).y == doctest::Approx(0.0));

    const Polygon2 tri({{0, 0}, {3, 0}, {0, 3}});
    CHECK(polygon_centroid(tri).x == doctest::Approx(1.0));
    CHECK(polygon_centroid(tri).y == doctest::Approx(1.0));

    const Polygon2 thin({{0, 0}, {4, 0}, {4, 0.1}, {0, 0.1}});
    CHECK(polygon_centroid(thin).x == doctest::Approx(2.0));
    CHECK(polygon_centroid(thin).y == doctest::Approx(0.05));
}

TEST_CASE("polygon orientation is normalized to counterclockwise") {
    const Polygon2 cw({{-1, -1}, {-1, 1}, {1, 1}, {1, -1}});  // clockwise input
    CHECK(cw.signed_area() > 0.0);
}

TEST_CASE("polygon rejects self-intersection and degenerate input") {
    CHECK_THROWS_AS(Polygon2({{0, 0}, {1, 0}}), ValidationError);
    CHECK_THROWS_AS(Polygon2({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), ValidationError);  // bowtie
    CHECK_THROWS_AS(Polygon2({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), ValidationError);
}

TEST_CASE("polyline_resample: uniform points on a line") {
    const std::vector<Point2> line{{0, 0}, {10, 0}};
    const auto out = polyline_resample(line, 5);
    REQUIRE(out.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(out[i].x == doctest::Approx(2.5 * static_cast<double>(i)));
        CHECK(out[i].y == 0.0);
    }
}

TEST_CASE("polyline_resample: midpoint lands on the corner") {
    const std::vector<Point2> bend{{0, 0}, {1, 0}, {1, 1}};
    const auto out = polyline_resample(bend, 3);
    REQUIRE(out.size() == 3);
    CHECK(out[0] == Point2{0, 0});
    CHECK(out[1].x == doctest::Approx(1.0));
    CHECK(out[1].y == doctest::Approx(0.0));
    CHECK(out[2] == Point2{1, 1});
}

TEST_CASE("polyline_resample: L-shaped path spacing matches the arc-length walk") {
    // L of total length 20, resampled to 80 points; walking the output along
    // the original polyline confirms constant arc spacing 20/79.
    const std::vector<Point2> ell{{0, 0}, {12, 0}, {12, 8}};
    const auto out = polyline_resample(ell, 80);
    REQUIRE(out.size() == 80);
    const auto arc = arc_positions(ell, out);
    const double expected = 20.0 / 79.0;
    for (std::size_t i = 1; i < arc.size(); ++i) {
        CHECK(std::abs(arc[i] - arc[i - 1] - expected) < 1e-9);
    }
    CHECK(out.front() == ell.front());
    CHECK(out.back() == ell.back());
}

TEST_CASE("polyline_resample: cumulative arc length grows uniformly") {
    std::mt19937_64 rng(23);
    const auto coord = [&rng] {
        return static_cast<double>(rng() % 2000) / 100.0;
    };
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point2> points;
        const std::size_t m = 2 + rng() % 6;
        for (std::size_t i = 0; i < m; ++i) points.push_back({coord(), coord()});
        const double total = polyline_length(points);
        if (total <= 1e-6) continue;
        const std::size_t n = 2 + rng() % 40;
        const auto out = polyline_resample(points, n);
        const auto arc = arc_positions(points, out);
        const double step = total / static_cast<double>(n - 1);
        for (std::size_t i = 1; i < arc.size(); ++i) {
            REQUIRE(arc[i] - arc[i - 1] >= -1e-9 * total);  // monotone
            REQUIRE(std::abs(arc[i] - arc[i - 1] - step) <= 1e-9 * total);
        }
        REQUIRE(std::abs(arc.back() - total) <= 1e-9 * total);
    }
}

TEST_CASE("polyline_resample rejects degenerate input") {
    const std::vector<Point2> stuck{{1, 1}, {1, 1}};
    CHECK_THROWS_AS(polyline_resample(stuck, 4), ValidationError);
    const std::vector<Point2> line{{0, 0}, {1, 0}};
    CHECK_THROWS_AS(polyline_resample(line, 1), ValidationError);
}
