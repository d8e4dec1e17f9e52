#pragma once

#include "agvplan/corridor.hpp"
#include "agvplan/obstacles.hpp"
#include "agvplan/optimizer.hpp"
#include "agvplan/scenario.hpp"
#include "agvplan/visibility.hpp"

#include <string>
#include <vector>

namespace agv {

// One timing/outcome row. Stages follow the pipeline split: adjacency
// (obstacle handling + graph construction), path (search + resampling),
// corridor, optimization, total.
struct BenchmarkRecord {
    std::string scenario_id;
    std::string stage;
    std::string method;  // "fsrc" or "stc"
    double wall_seconds = 0.0;
    double path_length = 0.0;
    double max_residual = 0.0;
    std::size_t boxes_built = 0;
    std::size_t boxes_reused = 0;
};

struct PlanResult {
    ObstacleSet obstacles;
    PlannedPath path;
    Corridor corridor;
    Trajectory trajectory;
    TrajectoryValidation validation;
    std::vector<BenchmarkRecord> records;
};

// Full pipeline with per-stage wall timing. Errors propagate with the
// failing stage named.
PlanResult plan(const Scenario& scenario);

struct CorridorBenchmark {
    std::vector<BenchmarkRecord> records;
    double mean_speedup = 0.0;  // mean over scenarios of stc time / fsrc time
};

// Times both corridor builders on the same path and node set per scenario,
// reporting median-of-repetitions. Corridor safety invariants are asserted
// for every constructed corridor.
CorridorBenchmark bench_corridors(const std::vector<Scenario>& scenarios, int repetitions);

// Test/benchmark support: no node strictly inside any box, every box contains
// its path point, every extent within the cap.
bool corridor_invariants_hold(const Corridor& corridor, const PlannedPath& path,
                              const std::vector<std::vector<Point2>>& boundary_nodes,
                              double max_extent, std::string* why = nullptr);

} // namespace agv
