// Command-line front end: plan a scenario, benchmark the corridor builders,
// generate random scenarios, or just validate a document.
//
// Exit codes: 0 success, 1 validation failure, 2 solver non-convergence,
// 3 I/O or parse error.

#include "agvplan/emit.hpp"
#include "agvplan/errors.hpp"
#include "agvplan/pipeline.hpp"
#include "agvplan/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitIo = 3;

int run_plan(const std::string& scenario_path, const std::string& out_dir, bool svg) {
    const agv::Scenario scenario = agv::load_scenario_file(scenario_path);
    const agv::PlanResult result = agv::plan(scenario);
    agv::write_plan_outputs(scenario, result, out_dir, svg);

    const auto& d = result.trajectory.diagnostics;
    std::printf("scenario       : %s\n", scenario.name.empty() ? "-" : scenario.name.c_str());
    std::printf("path length    : %.3f m over %zu waypoints\n", result.path.length,
                result.path.waypoints.size());
    std::printf("corridor       : %zu boxes (%zu reused)\n", result.corridor.boxes.size(),
                result.corridor.reused_count());
    std::printf("trajectory     : T = %.3f s, length = %.3f m\n", result.trajectory.total_time,
                result.validation.path_length);
    std::printf("solver         : %s, max residual %.2e, %d outer / %d inner iterations\n",
                d.converged ? "converged" : "NOT converged", d.max_kinematic_residual,
                d.outer_iterations, d.inner_iterations);
    for (const auto& r : result.records) {
        std::printf("stage %-12s: %.6f s\n", r.stage.c_str(), r.wall_seconds);
    }
    std::printf("outputs in     : %s\n", out_dir.c_str());
    return d.converged ? kExitOk : kExitNotConverged;
}

int run_bench(const std::string& scenario_dir, int random_count, std::uint64_t seed,
              int obstacles, int reps, const std::string& out_csv) {
    std::vector<agv::Scenario> scenarios;
    if (!scenario_dir.empty()) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(scenario_dir)) {
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) scenarios.push_back(agv::load_scenario_file(f));
    } else {
        for (int k = 0; k < random_count; ++k) {
            scenarios.push_back(
                agv::random_scenario(seed + static_cast<std::uint64_t>(k), obstacles));
        }
    }
    if (scenarios.empty()) {
        throw agv::ValidationError("no scenarios to benchmark");
    }

    const agv::CorridorBenchmark bench = agv::bench_corridors(scenarios, reps);
    for (const auto& r : bench.records) {
        std::printf("%-20s %-5s %.6f s  (%zu built, %zu reused)\n", r.scenario_id.c_str(),
                    r.method.c_str(), r.wall_seconds, r.boxes_built, r.boxes_reused);
    }
    std::printf("mean speedup (stc/fsrc): %.2fx over %zu scenarios, median of %d reps\n",
                bench.mean_speedup, scenarios.size(), reps);

    if (!out_csv.empty()) {
        std::ofstream out(out_csv);
        if (!out) throw agv::ParseError("cannot write " + out_csv);
        agv::write_records_csv(bench.records, out);
    }
    return kExitOk;
}

int run_gen(std::uint64_t seed, int obstacles, const std::string& out_file) {
    const agv::Scenario scenario = agv::random_scenario(seed, obstacles);
    const std::string text = agv::emit_scenario(scenario);
    if (out_file.empty() || out_file == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_file);
        if (!out) throw agv::ParseError("cannot write " + out_file);
        out << text;
        std::printf("wrote %s (seed %llu, %d obstacles)\n", out_file.c_str(),
                    static_cast<unsigned long long>(seed), obstacles);
    }
    return kExitOk;
}

int run_validate(const std::string& scenario_path) {
    const agv::Scenario scenario = agv::load_scenario_file(scenario_path);
    std::printf("%s: valid (%zu obstacles, N = %zu, R = %.4f m)\n", scenario_path.c_str(),
                scenario.obstacles.size(), scenario.num_points, scenario.inflation.radius);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"AGV trajectory planner: visibility-graph path search, rectangular safe "
                 "corridors, and box-constrained trajectory optimization"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = ".";
    bool svg = false;
    auto* plan_cmd = app.add_subcommand("plan", "run the full pipeline on a scenario");
    plan_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    plan_cmd->add_option("--out", out_dir, "output directory");
    plan_cmd->add_flag("--svg", svg, "also write a scene overlay SVG");

    std::string bench_dir;
    int bench_random = 0;
    std::uint64_t bench_seed = 1;
    int bench_obstacles = 12;
    int bench_reps = 5;
    std::string bench_csv;
    auto* bench_cmd = app.add_subcommand("bench", "compare corridor builder timings");
    auto* dir_opt = bench_cmd->add_option("--scenarios", bench_dir,
                                          "directory of scenario JSON files");
    bench_cmd->add_option("--random", bench_random, "number of random scenarios")
        ->excludes(dir_opt);
    bench_cmd->add_option("--seed", bench_seed, "seed for random scenarios");
    bench_cmd->add_option("--obstacles", bench_obstacles, "obstacles per random scenario");
    bench_cmd->add_option("--reps", bench_reps, "timing repetitions per method")
        ->check(CLI::Range(3, 1000));
    bench_cmd->add_option("--out", bench_csv, "write records CSV here");

    std::uint64_t gen_seed = 1;
    int gen_obstacles = 12;
    std::string gen_out;
    auto* gen_cmd = app.add_subcommand("gen", "generate a random scenario");
    gen_cmd->add_option("--seed", gen_seed, "generator seed")->required();
    gen_cmd->add_option("--obstacles", gen_obstacles, "obstacle count");
    gen_cmd->add_option("--out", gen_out, "output file ('-' for stdout)");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "parse and validate a scenario");
    validate_cmd->add_option("scenario", validate_path, "scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan_cmd->parsed()) return run_plan(scenario_path, out_dir, svg);
        if (bench_cmd->parsed()) {
            if (bench_dir.empty() && bench_random <= 0) {
                std::fprintf(stderr, "bench: need --scenarios DIR or --random K\n");
                return kExitValidation;
            }
            return run_bench(bench_dir, bench_random, bench_seed, bench_obstacles, bench_reps,
                             bench_csv);
        }
        if (gen_cmd->parsed()) return run_gen(gen_seed, gen_obstacles, gen_out);
        if (validate_cmd->parsed()) return run_validate(validate_path);
    } catch (const agv::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const agv::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
    return kExitOk;
}
