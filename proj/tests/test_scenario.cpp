#include "agvplan/emit.hpp"
#include "agvplan/errors.hpp"
#include "agvplan/pipeline.hpp"
#include "agvplan/scenario.hpp"

#include <doctest.h>

#include <sstream>
#include <string>

using namespace agv;

TEST_CASE("load_scenario: minimal document takes the documented defaults") {
    const Scenario s = load_scenario("{\"schema_version\": 1}");
    CHECK(s.num_points == 80);
    CHECK(s.inflation.radius == doctest::Approx(0.4223));
    CHECK(s.inflation.precision == doctest::Approx(0.1));
    CHECK(s.map_bounds.x_max == doctest::Approx(20.0));
    CHECK(s.fsrc.max_extent == doctest::Approx(10.0));
    CHECK(s.fsrc.max_reuse == 8);
    CHECK(s.fsrc.growth_factor == doctest::Approx(2.0));
    CHECK(s.fsrc.linear_step_cap == doctest::Approx(0.2));
    CHECK(s.limits.speed_max == doctest::Approx(3.0));
    CHECK(s.limits.acceleration_max == doctest::Approx(1.8));
    CHECK(s.limits.angular_rate_max == doctest::Approx(2.5));
    CHECK(s.obstacles.empty());
    // Default heading points from start to goal.
    CHECK(s.boundary.start_heading == doctest::Approx(M_PI / 4.0));
}

TEST_CASE("load_scenario: missing num_points defaults to 80") {
    const Scenario s = load_scenario(R"({"start": {"x": 2, "y": 2}})");
    CHECK(s.num_points == 80);
}

TEST_CASE("load_scenario: start inside an inflated obstacle is rejected") {
    const std::string doc = R"({
        "start": {"x": 10, "y": 10},
        "goal": {"x": 19, "y": 19},
        "obstacles": [[[9, 9], [11, 9], [11, 11], [9, 11]]]
    })";
    CHECK_THROWS_WITH_AS(load_scenario(doc),
                         doctest::Contains("start inside inflated obstacle 0"),
                         ValidationError);
}

TEST_CASE("load_scenario: malformed JSON and unknown fields") {
    CHECK_THROWS_AS(load_scenario("{ not json"), ParseError);
    CHECK_THROWS_WITH_AS(load_scenario("{\"radiuss\": 1}"),
                         doctest::Contains("unknown field 'radiuss'"), ParseError);
    CHECK_THROWS_WITH_AS(load_scenario("{\"fsrc\": {\"gamma\": 2}}"),
                         doctest::Contains("unknown field 'gamma'"), ParseError);
    CHECK_THROWS_AS(load_scenario("{\"schema_version\": 99}"), ParseError);
    CHECK_THROWS_AS(load_scenario("{\"num_points\": -4}"), ParseError);
}

TEST_CASE("load_scenario: invariant violations carry the field name") {
    CHECK_THROWS_WITH_AS(load_scenario("{\"radius\": -1}"), doctest::Contains("radius"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(load_scenario("{\"map\": {\"x_min\": 5, \"x_max\": 2}}"),
                         doctest::Contains("map x bounds"), ValidationError);
    CHECK_THROWS_WITH_AS(
        load_scenario("{\"start\": {\"x\": -3, \"y\": 1}}"),
        doctest::Contains("start is outside the map bounds"), ValidationError);
    CHECK_THROWS_WITH_AS(load_scenario("{\"fsrc\": {\"growth_factor\": 1.0}}"),
                         doctest::Contains("growth_factor"), ValidationError);
}

TEST_CASE("scenario round-trip: load(emit(s)) reproduces s") {
    const Scenario original = random_scenario(910, 7);
    const Scenario reloaded = load_scenario(emit_scenario(original));
    CHECK(scenarios_equal(original, reloaded));
    // And the serialization itself is stable.
    CHECK(emit_scenario(reloaded) == emit_scenario(original));
}

TEST_CASE("plan: empty map runs every stage and converges") {
    Scenario s = load_scenario("{\"num_points\": 40}");
    const PlanResult result = plan(s);
    CHECK(result.trajectory.diagnostics.converged);
    CHECK(result.path.length == doctest::Approx(distance({1, 1}, {19, 19})));
    CHECK(result.validation.bound_violations == 0);
    CHECK(result.validation.containment_failures == 0);

    bool saw_total = false;
    double stage_sum = 0.0;
    for (const auto& r : result.records) {
        if (r.stage == "total") {
            saw_total = true;
            CHECK(r.wall_seconds >= stage_sum * 0.5);  // total covers the stages
        } else {
            stage_sum += r.wall_seconds;
        }
        CHECK(r.wall_seconds >= 0.0);
    }
    CHECK(saw_total);
    CHECK(result.records.size() == 5);
}

TEST_CASE("plan: walled-off goal fails in the path stage") {
    // A ring of boxes around the goal with no gap.
    const std::string doc = R"({
        "goal": {"x": 17, "y": 17},
        "obstacles": [
            [[14, 14], [20, 14], [20, 15], [14, 15]],
            [[14, 15], [15, 15], [15, 20], [14, 20]],
            [[15, 19], [20, 19], [20, 20], [15, 20]],
            [[19, 15], [20, 15], [20, 19], [19, 19]]
        ]
    })";
    const Scenario s = load_scenario(doc);
    CHECK_THROWS_WITH_AS(plan(s), doctest::Contains("path stage"), ValidationError);
    try {
        plan(s);
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("no path") != std::string::npos);
    }
}

TEST_CASE("bench_corridors: identical scenario gives identical corridors") {
    const Scenario s = random_scenario(31, 10);
    const CorridorBenchmark a = bench_corridors({s, s}, 3);
    REQUIRE(a.records.size() == 4);
    CHECK(a.records[0].method == "fsrc");
    CHECK(a.records[1].method == "stc");
    CHECK(a.records[0].boxes_built == a.records[2].boxes_built);
    CHECK(a.records[0].boxes_reused == a.records[2].boxes_reused);
    CHECK(a.mean_speedup > 0.0);
}

TEST_CASE("bench_corridors rejects too few repetitions") {
    CHECK_THROWS_AS(bench_corridors({random_scenario(32, 5)}, 2), ValidationError);
}

TEST_CASE("trajectory CSV: shape, time column, and round-trip digits") {
    Scenario s = load_scenario("{\"num_points\": 40}");
    const PlanResult result = plan(s);

    std::ostringstream out;
    write_trajectory_csv(result.trajectory, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x,y,v,theta,a,omega");

    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    REQUIRE(rows.size() == 40);

    // Last time value equals T exactly after re-parsing.
    const std::string& last = rows.back();
    const double t_last = std::stod(last.substr(0, last.find(',')));
    CHECK(t_last == result.trajectory.total_time);
}

TEST_CASE("corridor CSV: area column") {
    Scenario s = load_scenario("{\"num_points\": 10}");
    const PlanResult result = plan(s);
    std::ostringstream out;
    write_corridor_csv(result.corridor, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "i,cx,cy,L1,L2,L3,L4,area");
    int rows = 0;
    while (std::getline(in, line)) {
        // area = (L2+L4)*(L1+L3), re-derived from the row itself
        std::vector<double> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(std::stod(cell));
        REQUIRE(f.size() == 8);
        CHECK(f[7] == doctest::Approx((f[4] + f[6]) * (f[3] + f[5])).epsilon(1e-12));
        ++rows;
    }
    CHECK(rows == 10);
}

TEST_CASE("scene SVG contains the scene elements") {
    Scenario s = random_scenario(12, 4);
    s.num_points = 30;
    const PlanResult result = plan(s);
    std::ostringstream out;
    write_scene_svg(s, result.obstacles, result.path, result.corridor, &result.trajectory,
                    out);
    const std::string svg = out.str();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polygon") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("<rect") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}
