#include "agvplan/pipeline.hpp"

#include "agvplan/errors.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

namespace agv {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

bool corridor_invariants_hold(const Corridor& corridor, const PlannedPath& path,
                              const std::vector<std::vector<Point2>>& boundary_nodes,
                              double max_extent, std::string* why) {
    const auto fail = [why](const std::string& reason) {
        if (why != nullptr) *why = reason;
        return false;
    };
    if (corridor.boxes.size() != path.samples.size()) {
        return fail("box count does not match path sample count");
    }
    for (std::size_t i = 0; i < corridor.boxes.size(); ++i) {
        const CorridorBox& b = corridor.boxes[i];
        const Aabb box = box_to_bounds(b);
        if (!point_in_aabb(path.samples[i], box)) {
            return fail("box " + std::to_string(i) + " does not contain its path point");
        }
        for (double e : b.extents) {
            if (!(e >= 0.0) || e > max_extent) {
                return fail("box " + std::to_string(i) + " extent out of range");
            }
        }
        for (const auto& group : boundary_nodes) {
            for (const Point2& p : group) {
                if (p.x > box.x_min && p.x < box.x_max && p.y > box.y_min &&
                    p.y < box.y_max) {
                    return fail("box " + std::to_string(i) +
                                " strictly contains an obstacle node");
                }
            }
        }
    }
    return true;
}

PlanResult plan(const Scenario& scenario) {
    PlanResult result;
    const std::string id = scenario.name.empty() ? "scenario" : scenario.name;
    const auto record = [&result, &id](const std::string& stage, double seconds) {
        BenchmarkRecord r;
        r.scenario_id = id;
        r.stage = stage;
        r.method = "fsrc";
        r.wall_seconds = seconds;
        result.records.push_back(r);
    };

    const auto t_total = Clock::now();

    // Stage 1: obstacle handling and visibility graph.
    VisibilityGraph graph;
    try {
        const auto t0 = Clock::now();
        result.obstacles = process_obstacles(scenario.obstacles, scenario.inflation);
        graph = build_adjacency(scenario.boundary.start, scenario.boundary.goal,
                                result.obstacles);
        record("adjacency", seconds_since(t0));
    } catch (const ValidationError& e) {
        throw ValidationError("adjacency stage: " + std::string(e.what()));
    }

    // Stage 2: shortest path and resampling.
    try {
        const auto t0 = Clock::now();
        result.path.waypoints = shortest_path(graph);
        result.path.samples = polyline_resample(result.path.waypoints, scenario.num_points);
        result.path.length = polyline_length(result.path.waypoints);
        record("path", seconds_since(t0));
    } catch (const ValidationError& e) {
        throw ValidationError("path stage: " + std::string(e.what()));
    }

    // Stage 3: corridor construction.
    try {
        const auto t0 = Clock::now();
        result.corridor =
            build_fsrc(result.path, result.obstacles.boundary_nodes, scenario.fsrc);
        record("corridor", seconds_since(t0));
    } catch (const ValidationError& e) {
        throw ValidationError("corridor stage: " + std::string(e.what()));
    }

    // Stage 4: transcription and solve.
    try {
        const auto t0 = Clock::now();
        const TrajectoryProblem problem =
            assemble(result.corridor, scenario.boundary, scenario.limits, scenario.weight_x,
                     scenario.weight_y, scenario.num_points);
        std::vector<double> guess = initial_guess(result.path, problem);
        result.trajectory = solve(problem, std::move(guess));
        record("optimization", seconds_since(t0));
    } catch (const ValidationError& e) {
        throw ValidationError("optimization stage: " + std::string(e.what()));
    }

    result.validation = validate(result.trajectory, result.corridor, scenario.limits);

    record("total", seconds_since(t_total));
    auto& rows = result.records;
    rows.back().path_length = result.validation.path_length;
    rows.back().max_residual = result.trajectory.diagnostics.max_kinematic_residual;
    rows.back().boxes_built = result.corridor.boxes.size() - result.corridor.reused_count();
    rows.back().boxes_reused = result.corridor.reused_count();
    return result;
}

CorridorBenchmark bench_corridors(const std::vector<Scenario>& scenarios, int repetitions) {
    if (repetitions < 3) {
        throw ValidationError("corridor benchmark needs at least 3 repetitions");
    }

    CorridorBenchmark bench;
    double speedup_sum = 0.0;
    std::size_t measured = 0;

    for (const Scenario& scenario : scenarios) {
        const std::string id = scenario.name.empty() ? "scenario" : scenario.name;
        const ObstacleSet set = process_obstacles(scenario.obstacles, scenario.inflation);
        const PlannedPath path = plan_path(scenario.boundary.start, scenario.boundary.goal,
                                           set, scenario.num_points);

        // Both methods get the same path and the same node set.
        const auto time_method = [&](const char* method, auto&& builder) {
            std::vector<double> times;
            times.reserve(static_cast<std::size_t>(repetitions));
            Corridor corridor;
            for (int rep = 0; rep < repetitions; ++rep) {
                const auto t0 = Clock::now();
                corridor = builder(path, set.boundary_nodes, scenario.fsrc);
                times.push_back(seconds_since(t0));
                std::string why;
                if (!corridor_invariants_hold(corridor, path, set.boundary_nodes,
                                              scenario.fsrc.max_extent, &why)) {
                    throw std::logic_error("corridor safety invariant violated (" +
                                           std::string(method) + ", " + id + "): " + why);
                }
            }
            BenchmarkRecord r;
            r.scenario_id = id;
            r.stage = "corridor";
            r.method = method;
            r.wall_seconds = median(times);
            r.path_length = path.length;
            r.boxes_reused = corridor.reused_count();
            r.boxes_built = corridor.boxes.size() - r.boxes_reused;
            bench.records.push_back(r);
            return r.wall_seconds;
        };

        const double fsrc_time = time_method(
            "fsrc", [](const PlannedPath& p, const std::vector<std::vector<Point2>>& nodes,
                       const FsrcConfig& cfg) { return build_fsrc(p, nodes, cfg); });
        const double stc_time = time_method(
            "stc", [](const PlannedPath& p, const std::vector<std::vector<Point2>>& nodes,
                      const FsrcConfig& cfg) { return build_stc_baseline(p, nodes, cfg); });

        if (fsrc_time > 0.0) {
            speedup_sum += stc_time / fsrc_time;
            ++measured;
        }
    }

    bench.mean_speedup = measured > 0 ? speedup_sum / static_cast<double>(measured) : 0.0;
    return bench;
}

} // namespace agv
