#include "agvplan/emit.hpp"

#include "agvplan/errors.hpp"

#include <cstdio>
#include <fstream>
#include <string>

namespace agv {
namespace {

// Shortest-round-trip formatting so re-parsed values validate identically.
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

void polyline_svg(std::ostream& out, std::span<const Point2> points, const char* style) {
    out << "  <polyline points=\"";
    for (const Point2& p : points) {
        out << coord(p.x) << "," << coord(p.y) << " ";
    }
    out << "\" style=\"" << style << "\"/>\n";
}

} // namespace

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
    out << "t,x,y,v,theta,a,omega\n";
    const std::size_t n = trajectory.x.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double t =
            trajectory.total_time * static_cast<double>(i) / static_cast<double>(n - 1);
        out << num(t) << "," << num(trajectory.x[i]) << "," << num(trajectory.y[i]) << ","
            << num(trajectory.v[i]) << "," << num(trajectory.theta[i]) << ","
            << num(trajectory.a[i]) << "," << num(trajectory.omega[i]) << "\n";
    }
}

void write_corridor_csv(const Corridor& corridor, std::ostream& out) {
    out << "i,cx,cy,L1,L2,L3,L4,area\n";
    for (std::size_t i = 0; i < corridor.boxes.size(); ++i) {
        const CorridorBox& b = corridor.boxes[i];
        const double area = (b.extents[1] + b.extents[3]) * (b.extents[0] + b.extents[2]);
        out << (i + 1) << "," << num(b.center.x) << "," << num(b.center.y) << ","
            << num(b.extents[0]) << "," << num(b.extents[1]) << "," << num(b.extents[2])
            << "," << num(b.extents[3]) << "," << num(area) << "\n";
    }
}

void write_records_csv(std::span<const BenchmarkRecord> records, std::ostream& out) {
    out << "scenario,stage,method,wall_seconds,path_length,max_residual,boxes_built,"
           "boxes_reused\n";
    for (const BenchmarkRecord& r : records) {
        out << r.scenario_id << "," << r.stage << "," << r.method << ","
            << num(r.wall_seconds) << "," << num(r.path_length) << "," << num(r.max_residual)
            << "," << r.boxes_built << "," << r.boxes_reused << "\n";
    }
}

void write_scene_svg(const Scenario& scenario, const ObstacleSet& obstacles,
                     const PlannedPath& path, const Corridor& corridor,
                     const Trajectory* trajectory, std::ostream& out) {
    const Aabb& m = scenario.map_bounds;
    const double width = m.x_max - m.x_min;
    const double height = m.y_max - m.y_min;
    const double margin = 0.05 * std::max(width, height);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
        << "viewBox=\"" << coord(m.x_min - margin) << " " << coord(-(m.y_max + margin)) << " "
        << coord(width + 2 * margin) << " " << coord(height + 2 * margin) << "\">\n";
    // Flip y so the map reads with +y up.
    out << " <g transform=\"scale(1,-1)\">\n";
    out << "  <rect x=\"" << coord(m.x_min) << "\" y=\"" << coord(m.y_min) << "\" width=\""
        << coord(width) << "\" height=\"" << coord(height)
        << "\" style=\"fill:white;stroke:black;stroke-width:0.05\"/>\n";

    for (const CorridorBox& b : corridor.boxes) {
        const Aabb box = box_to_bounds(b);
        out << "  <rect x=\"" << coord(box.x_min) << "\" y=\"" << coord(box.y_min)
            << "\" width=\"" << coord(box.x_max - box.x_min) << "\" height=\""
            << coord(box.y_max - box.y_min)
            << "\" style=\"fill:none;stroke:#4169e1;stroke-width:0.02;stroke-opacity:0.6\"/>\n";
    }

    for (const Polygon2& poly : obstacles.raw) {
        out << "  <polygon points=\"";
        for (const Point2& v : poly.vertices()) {
            out << coord(v.x) << "," << coord(v.y) << " ";
        }
        out << "\" style=\"fill:#555555;stroke:#222222;stroke-width:0.03\"/>\n";
    }
    for (const Polygon2& poly : obstacles.inflated_polygons) {
        out << "  <polygon points=\"";
        for (const Point2& v : poly.vertices()) {
            out << coord(v.x) << "," << coord(v.y) << " ";
        }
        out << "\" style=\"fill:none;stroke:#888888;stroke-width:0.02;"
            << "stroke-dasharray:0.1,0.1\"/>\n";
    }
    for (const auto& group : obstacles.boundary_nodes) {
        for (const Point2& p : group) {
            out << "  <circle cx=\"" << coord(p.x) << "\" cy=\"" << coord(p.y)
                << "\" r=\"0.025\" style=\"fill:#cc8800\"/>\n";
        }
    }

    if (path.samples.size() >= 2) {
        polyline_svg(out, path.samples, "fill:none;stroke:#2e8b57;stroke-width:0.06");
    }
    if (trajectory != nullptr && trajectory->x.size() >= 2) {
        std::vector<Point2> pts(trajectory->x.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            pts[i] = {trajectory->x[i], trajectory->y[i]};
        }
        polyline_svg(out, pts, "fill:none;stroke:#c03030;stroke-width:0.06");
    }

    const auto endpoint = [&out](Point2 p, const char* color) {
        out << "  <circle cx=\"" << coord(p.x) << "\" cy=\"" << coord(p.y)
            << "\" r=\"0.15\" style=\"fill:" << color << "\"/>\n";
    };
    endpoint(scenario.boundary.start, "#2e8b57");
    endpoint(scenario.boundary.goal, "#c03030");

    out << " </g>\n</svg>\n";
}

void write_plan_outputs(const Scenario& scenario, const PlanResult& result,
                        const std::filesystem::path& directory, bool with_svg) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw ParseError("cannot create output directory " + directory.string() + ": " +
                         ec.message());
    }
    const auto open = [&directory](const char* name) {
        std::ofstream out(directory / name);
        if (!out) {
            throw ParseError("cannot write " + (directory / name).string());
        }
        return out;
    };

    auto traj = open("trajectory.csv");
    write_trajectory_csv(result.trajectory, traj);
    auto corr = open("corridor.csv");
    write_corridor_csv(result.corridor, corr);
    auto recs = open("records.csv");
    write_records_csv(result.records, recs);
    if (with_svg) {
        auto svg = open("scene.svg");
        write_scene_svg(scenario, result.obstacles, result.path, result.corridor,
                        &result.trajectory, svg);
    }
}

} // namespace agv
