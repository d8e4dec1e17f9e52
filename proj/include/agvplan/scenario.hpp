#pragma once

#include "agvplan/corridor.hpp"
#include "agvplan/obstacles.hpp"
#include "agvplan/optimizer.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace agv {

// Parameter defaults applied when a scenario document omits a field.
inline constexpr double kDefaultRadius = 0.4223;  // half-diagonal of the AGV footprint
inline constexpr double kDefaultPrecision = 0.1;
inline constexpr std::size_t kDefaultNumPoints = 80;
inline constexpr double kDefaultPenaltyWeight = 1000.0;
inline constexpr int kSchemaVersion = 1;

// A complete planning problem: map, obstacles, endpoints, and every
// parameter the pipeline consumes.
struct Scenario {
    std::string name;
    Aabb map_bounds{0.0, 20.0, 0.0, 20.0};
    std::vector<Polygon2> obstacles;
    InflationConfig inflation{kDefaultRadius, kDefaultPrecision};
    std::size_t num_points = kDefaultNumPoints;
    FsrcConfig fsrc;
    OcpLimits limits;
    BoundaryConditions boundary;
    double weight_x = kDefaultPenaltyWeight;
    double weight_y = kDefaultPenaltyWeight;
    double time_min = 0.1;
    double time_max = 120.0;
    std::uint64_t seed = 0;
};

// Parses and fully validates a scenario document. Throws ParseError for
// malformed JSON or unknown/ill-typed fields, ValidationError for invariant
// violations (including endpoints inside inflated obstacles).
Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::filesystem::path& path);

// Serializes so that load_scenario(emit_scenario(s)) reproduces s exactly.
std::string emit_scenario(const Scenario& scenario);

bool scenarios_equal(const Scenario& a, const Scenario& b);

// Seeded random 20x20 scenario with star-shaped polygonal obstacles kept
// clear of the endpoints. Regenerates deterministically until the scenario
// admits a path.
Scenario random_scenario(std::uint64_t seed, std::size_t obstacle_count);

} // namespace agv
