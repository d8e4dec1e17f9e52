#include "agvplan/scenario.hpp"

#include "agvplan/errors.hpp"
#include "agvplan/visibility.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace agv {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ParseError("unknown field '" + key + "' in " + where);
        }
    }
}

double get_number(const json& obj, const std::string& where, const std::string& key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) {
        throw ParseError("field '" + key + "' in " + where + " must be a number");
    }
    return obj[key].get<double>();
}

const json& get_object(const json& obj, const std::string& key) {
    if (!obj[key].is_object()) {
        throw ParseError("field '" + key + "' must be an object");
    }
    return obj[key];
}

void validate_positive(double value, const std::string& what) {
    if (!(value > 0.0)) {
        throw ValidationError(what + " must be positive, got " + std::to_string(value));
    }
}

void validate_interval(double lo, double hi, const std::string& what) {
    if (!(lo < hi)) {
        throw ValidationError(what + " must satisfy min < max, got [" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "]");
    }
}

void validate_scenario(const Scenario& s) {
    validate_interval(s.map_bounds.x_min, s.map_bounds.x_max, "map x bounds");
    validate_interval(s.map_bounds.y_min, s.map_bounds.y_max, "map y bounds");
    validate_positive(s.inflation.radius, "radius");
    validate_positive(s.inflation.precision, "precision");
    if (s.num_points < 2) {
        throw ValidationError("num_points must be at least 2");
    }
    validate_positive(s.fsrc.initial_step, "fsrc.initial_step");
    if (!(s.fsrc.growth_factor > 1.0)) {
        throw ValidationError("fsrc.growth_factor must exceed 1");
    }
    validate_positive(s.fsrc.max_extent, "fsrc.max_extent");
    validate_positive(s.fsrc.linear_step_cap, "fsrc.linear_step_cap");
    if (s.fsrc.max_reuse < 0) {
        throw ValidationError("fsrc.max_reuse must be non-negative");
    }
    validate_interval(s.limits.speed_min, s.limits.speed_max, "speed limits");
    validate_interval(s.limits.acceleration_min, s.limits.acceleration_max,
                      "acceleration limits");
    validate_interval(s.limits.angular_rate_min, s.limits.angular_rate_max,
                      "angular rate limits");
    validate_positive(s.weight_x, "weights.x");
    validate_positive(s.weight_y, "weights.y");
    validate_positive(s.time_min, "time_bounds.min");
    validate_interval(s.time_min, s.time_max, "time_bounds");

    for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
        for (const Point2& v : s.obstacles[i].vertices()) {
            if (!point_in_aabb(v, s.map_bounds)) {
                throw ValidationError("obstacle " + std::to_string(i) +
                                      " has a vertex outside the map bounds");
            }
        }
    }
    if (!point_in_aabb(s.boundary.start, s.map_bounds)) {
        throw ValidationError("start is outside the map bounds");
    }
    if (!point_in_aabb(s.boundary.goal, s.map_bounds)) {
        throw ValidationError("goal is outside the map bounds");
    }

    const ObstacleSet set = process_obstacles(s.obstacles, s.inflation);
    for (std::size_t i = 0; i < set.inflated_polygons.size(); ++i) {
        if (point_strictly_inside_polygon(s.boundary.start, set.inflated_polygons[i])) {
            throw ValidationError("start inside inflated obstacle " + std::to_string(i));
        }
        if (point_strictly_inside_polygon(s.boundary.goal, set.inflated_polygons[i])) {
            throw ValidationError("goal inside inflated obstacle " + std::to_string(i));
        }
    }
}

} // namespace

Scenario load_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("scenario document must be a JSON object");
    }

    try {
        reject_unknown_keys(doc, "the scenario",
                            {"schema_version", "name", "map", "radius", "precision",
                             "num_points", "start", "goal", "obstacles", "fsrc", "limits",
                             "weights", "time_bounds", "seed"});

        if (doc.contains("schema_version") && doc["schema_version"].get<int>() != kSchemaVersion) {
            throw ParseError("unsupported schema_version " + doc["schema_version"].dump() +
                             ", expected " + std::to_string(kSchemaVersion));
        }

        Scenario s;
        if (doc.contains("name")) {
            if (!doc["name"].is_string()) throw ParseError("field 'name' must be a string");
            s.name = doc["name"].get<std::string>();
        }

        if (doc.contains("map")) {
            const json& m = get_object(doc, "map");
            reject_unknown_keys(m, "'map'", {"x_min", "x_max", "y_min", "y_max"});
            s.map_bounds.x_min = get_number(m, "'map'", "x_min", 0.0);
            s.map_bounds.x_max = get_number(m, "'map'", "x_max", 20.0);
            s.map_bounds.y_min = get_number(m, "'map'", "y_min", 0.0);
            s.map_bounds.y_max = get_number(m, "'map'", "y_max", 20.0);
        }

        s.inflation.radius = get_number(doc, "the scenario", "radius", kDefaultRadius);
        s.inflation.precision = get_number(doc, "the scenario", "precision", kDefaultPrecision);
        if (doc.contains("num_points")) {
            if (!doc["num_points"].is_number_unsigned()) {
                throw ParseError("field 'num_points' must be a non-negative integer");
            }
            s.num_points = doc["num_points"].get<std::size_t>();
        }

        Point2 default_start{1.0, 1.0};
        Point2 default_goal{19.0, 19.0};
        if (doc.contains("start")) {
            const json& st = get_object(doc, "start");
            reject_unknown_keys(st, "'start'", {"x", "y", "theta", "v", "a", "omega"});
            s.boundary.start.x = get_number(st, "'start'", "x", default_start.x);
            s.boundary.start.y = get_number(st, "'start'", "y", default_start.y);
            s.boundary.start_speed = get_number(st, "'start'", "v", 0.0);
            s.boundary.start_acceleration = get_number(st, "'start'", "a", 0.0);
            s.boundary.start_angular_rate = get_number(st, "'start'", "omega", 0.0);
        } else {
            s.boundary.start = default_start;
        }
        if (doc.contains("goal")) {
            const json& gl = get_object(doc, "goal");
            reject_unknown_keys(gl, "'goal'", {"x", "y", "v", "a", "omega"});
            s.boundary.goal.x = get_number(gl, "'goal'", "x", default_goal.x);
            s.boundary.goal.y = get_number(gl, "'goal'", "y", default_goal.y);
            s.boundary.goal_speed = get_number(gl, "'goal'", "v", 0.0);
            s.boundary.goal_acceleration = get_number(gl, "'goal'", "a", 0.0);
            s.boundary.goal_angular_rate = get_number(gl, "'goal'", "omega", 0.0);
        } else {
            s.boundary.goal = default_goal;
        }
        // Default heading points at the goal.
        const Point2 to_goal = s.boundary.goal - s.boundary.start;
        const double default_heading =
            norm(to_goal) > kGeomEps ? std::atan2(to_goal.y, to_goal.x) : 0.0;
        s.boundary.start_heading =
            doc.contains("start") ? get_number(doc["start"], "'start'", "theta", default_heading)
                                  : default_heading;

        if (doc.contains("obstacles")) {
            if (!doc["obstacles"].is_array()) {
                throw ParseError("field 'obstacles' must be an array of vertex lists");
            }
            std::size_t index = 0;
            for (const json& entry : doc["obstacles"]) {
                if (!entry.is_array() || entry.size() < 3) {
                    throw ParseError("obstacle " + std::to_string(index) +
                                     " must be an array of at least 3 [x, y] pairs");
                }
                std::vector<Point2> vertices;
                vertices.reserve(entry.size());
                for (const json& v : entry) {
                    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
                        !v[1].is_number()) {
                        throw ParseError("obstacle " + std::to_string(index) +
                                         " has a vertex that is not an [x, y] pair");
                    }
                    vertices.push_back({v[0].get<double>(), v[1].get<double>()});
                }
                try {
                    s.obstacles.emplace_back(std::move(vertices));
                } catch (const ValidationError& e) {
                    throw ValidationError("obstacle " + std::to_string(index) + ": " + e.what());
                }
                ++index;
            }
        }

        if (doc.contains("fsrc")) {
            const json& f = get_object(doc, "fsrc");
            reject_unknown_keys(f, "'fsrc'",
                                {"initial_step", "growth_factor", "max_extent",
                                 "linear_step_cap", "max_reuse"});
            s.fsrc.initial_step = get_number(f, "'fsrc'", "initial_step", s.fsrc.initial_step);
            s.fsrc.growth_factor = get_number(f, "'fsrc'", "growth_factor", s.fsrc.growth_factor);
            s.fsrc.max_extent = get_number(f, "'fsrc'", "max_extent", s.fsrc.max_extent);
            s.fsrc.linear_step_cap =
                get_number(f, "'fsrc'", "linear_step_cap", s.fsrc.linear_step_cap);
            s.fsrc.max_reuse = static_cast<int>(
                get_number(f, "'fsrc'", "max_reuse", static_cast<double>(s.fsrc.max_reuse)));
        }

        if (doc.contains("limits")) {
            const json& l = get_object(doc, "limits");
            reject_unknown_keys(l, "'limits'",
                                {"v_min", "v_max", "a_min", "a_max", "omega_min", "omega_max"});
            s.limits.speed_max = get_number(l, "'limits'", "v_max", s.limits.speed_max);
            s.limits.speed_min = get_number(l, "'limits'", "v_min", -s.limits.speed_max);
            s.limits.acceleration_max = get_number(l, "'limits'", "a_max", s.limits.acceleration_max);
            s.limits.acceleration_min =
                get_number(l, "'limits'", "a_min", -s.limits.acceleration_max);
            s.limits.angular_rate_max =
                get_number(l, "'limits'", "omega_max", s.limits.angular_rate_max);
            s.limits.angular_rate_min =
                get_number(l, "'limits'", "omega_min", -s.limits.angular_rate_max);
        }

        if (doc.contains("weights")) {
            const json& w = get_object(doc, "weights");
            reject_unknown_keys(w, "'weights'", {"x", "y"});
            s.weight_x = get_number(w, "'weights'", "x", s.weight_x);
            s.weight_y = get_number(w, "'weights'", "y", s.weight_y);
        }

        if (doc.contains("time_bounds")) {
            const json& t = get_object(doc, "time_bounds");
            reject_unknown_keys(t, "'time_bounds'", {"min", "max"});
            s.time_min = get_number(t, "'time_bounds'", "min", s.time_min);
            s.time_max = get_number(t, "'time_bounds'", "max", s.time_max);
        }

        if (doc.contains("seed")) {
            if (!doc["seed"].is_number_unsigned()) {
                throw ParseError("field 'seed' must be a non-negative integer");
            }
            s.seed = doc["seed"].get<std::uint64_t>();
        }

        validate_scenario(s);
        return s;
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario document is malformed: ") + e.what());
    }
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return load_scenario(buffer.str());
    } catch (ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string emit_scenario(const Scenario& s) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["name"] = s.name;
    doc["map"] = {{"x_min", s.map_bounds.x_min},
                  {"x_max", s.map_bounds.x_max},
                  {"y_min", s.map_bounds.y_min},
                  {"y_max", s.map_bounds.y_max}};
    doc["radius"] = s.inflation.radius;
    doc["precision"] = s.inflation.precision;
    doc["num_points"] = s.num_points;
    doc["start"] = {{"x", s.boundary.start.x},       {"y", s.boundary.start.y},
                    {"theta", s.boundary.start_heading}, {"v", s.boundary.start_speed},
                    {"a", s.boundary.start_acceleration},
                    {"omega", s.boundary.start_angular_rate}};
    doc["goal"] = {{"x", s.boundary.goal.x},
                   {"y", s.boundary.goal.y},
                   {"v", s.boundary.goal_speed},
                   {"a", s.boundary.goal_acceleration},
                   {"omega", s.boundary.goal_angular_rate}};
    doc["obstacles"] = json::array();
    for (const Polygon2& poly : s.obstacles) {
        json vertices = json::array();
        for (const Point2& v : poly.vertices()) {
            vertices.push_back({v.x, v.y});
        }
        doc["obstacles"].push_back(std::move(vertices));
    }
    doc["fsrc"] = {{"initial_step", s.fsrc.initial_step},
                   {"growth_factor", s.fsrc.growth_factor},
                   {"max_extent", s.fsrc.max_extent},
                   {"linear_step_cap", s.fsrc.linear_step_cap},
                   {"max_reuse", s.fsrc.max_reuse}};
    doc["limits"] = {{"v_min", s.limits.speed_min},
                     {"v_max", s.limits.speed_max},
                     {"a_min", s.limits.acceleration_min},
                     {"a_max", s.limits.acceleration_max},
                     {"omega_min", s.limits.angular_rate_min},
                     {"omega_max", s.limits.angular_rate_max}};
    doc["weights"] = {{"x", s.weight_x}, {"y", s.weight_y}};
    doc["time_bounds"] = {{"min", s.time_min}, {"max", s.time_max}};
    doc["seed"] = s.seed;
    return doc.dump(2) + "\n";
}

bool scenarios_equal(const Scenario& a, const Scenario& b) {
    if (a.obstacles.size() != b.obstacles.size()) return false;
    for (std::size_t i = 0; i < a.obstacles.size(); ++i) {
        if (a.obstacles[i].vertices().size() != b.obstacles[i].vertices().size()) return false;
        for (std::size_t j = 0; j < a.obstacles[i].vertices().size(); ++j) {
            if (!(a.obstacles[i].vertex(j) == b.obstacles[i].vertex(j))) return false;
        }
    }
    const auto& ba = a.boundary;
    const auto& bb = b.boundary;
    return a.name == b.name && a.map_bounds.x_min == b.map_bounds.x_min &&
           a.map_bounds.x_max == b.map_bounds.x_max &&
           a.map_bounds.y_min == b.map_bounds.y_min &&
           a.map_bounds.y_max == b.map_bounds.y_max &&
           a.inflation.radius == b.inflation.radius &&
           a.inflation.precision == b.inflation.precision && a.num_points == b.num_points &&
           a.fsrc.initial_step == b.fsrc.initial_step &&
           a.fsrc.growth_factor == b.fsrc.growth_factor &&
           a.fsrc.max_extent == b.fsrc.max_extent &&
           a.fsrc.linear_step_cap == b.fsrc.linear_step_cap &&
           a.fsrc.max_reuse == b.fsrc.max_reuse && a.limits.speed_min == b.limits.speed_min &&
           a.limits.speed_max == b.limits.speed_max &&
           a.limits.acceleration_min == b.limits.acceleration_min &&
           a.limits.acceleration_max == b.limits.acceleration_max &&
           a.limits.angular_rate_min == b.limits.angular_rate_min &&
           a.limits.angular_rate_max == b.limits.angular_rate_max &&
           ba.start == bb.start && ba.start_heading == bb.start_heading &&
           ba.start_speed == bb.start_speed &&
           ba.start_acceleration == bb.start_acceleration &&
           ba.start_angular_rate == bb.start_angular_rate && ba.goal == bb.goal &&
           ba.goal_speed == bb.goal_speed && ba.goal_acceleration == bb.goal_acceleration &&
           ba.goal_angular_rate == bb.goal_angular_rate && a.weight_x == b.weight_x &&
           a.weight_y == b.weight_y && a.time_min == b.time_min && a.time_max == b.time_max &&
           a.seed == b.seed;
}

namespace {

// Deterministic uniform helpers on top of the engine, so generated scenarios
// do not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    std::size_t uniform_index(std::size_t lo, std::size_t hi) {  // inclusive
        return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace

Scenario random_scenario(std::uint64_t seed, std::size_t obstacle_count) {
    constexpr int kMaxScenarioAttempts = 64;
    constexpr int kMaxObstacleAttempts = 256;
    constexpr double kMinRadius = 0.55;
    constexpr double kMaxRadius = 1.35;

    Rng rng(seed);
    for (int attempt = 0; attempt < kMaxScenarioAttempts; ++attempt) {
        Scenario s;
        s.name = "random-" + std::to_string(seed);
        s.seed = seed;
        s.boundary.start = {1.2, 1.2};
        s.boundary.goal = {18.8, 18.8};
        s.boundary.start_heading = std::atan2(s.boundary.goal.y - s.boundary.start.y,
                                              s.boundary.goal.x - s.boundary.start.x);

        const double clearance = kMaxRadius + s.inflation.radius + 0.35;
        bool obstacles_ok = true;
        for (std::size_t k = 0; k < obstacle_count && obstacles_ok; ++k) {
            bool placed = false;
            for (int tries = 0; tries < kMaxObstacleAttempts && !placed; ++tries) {
                const Point2 center{rng.uniform(2.2, 17.8), rng.uniform(2.2, 17.8)};
                if (distance(center, s.boundary.start) < clearance ||
                    distance(center, s.boundary.goal) < clearance) {
                    continue;
                }
                const std::size_t nv = rng.uniform_index(8, 20);
                std::vector<Point2> vertices;
                vertices.reserve(nv);
                bool in_map = true;
                for (std::size_t j = 0; j < nv; ++j) {
                    const double jitter = rng.uniform(-0.35, 0.35);
                    const double angle = 2.0 * M_PI *
                                         (static_cast<double>(j) + jitter) /
                                         static_cast<double>(nv);
                    const double r = rng.uniform(kMinRadius, kMaxRadius);
                    const Point2 v{center.x + r * std::cos(angle),
                                   center.y + r * std::sin(angle)};
                    if (v.x < s.map_bounds.x_min + 0.05 || v.x > s.map_bounds.x_max - 0.05 ||
                        v.y < s.map_bounds.y_min + 0.05 || v.y > s.map_bounds.y_max - 0.05) {
                        in_map = false;
                        break;
                    }
                    vertices.push_back(v);
                }
                if (!in_map) continue;
                try {
                    Polygon2 poly(vertices);
                    // The inflated hull must stay simple or the planner cannot
                    // use this obstacle.
                    auto [inflated, edges] = inflate_vertices(poly, s.inflation);
                    Polygon2 check(std::move(inflated));
                    (void)check;
                    (void)edges;
                    s.obstacles.push_back(std::move(poly));
                    placed = true;
                } catch (const ValidationError&) {
                    continue;
                }
            }
            if (!placed) obstacles_ok = false;
        }
        if (!obstacles_ok) continue;

        try {
            const ObstacleSet set = process_obstacles(s.obstacles, s.inflation);
            plan_path(s.boundary.start, s.boundary.goal, set, s.num_points);
            return s;
        } catch (const ValidationError&) {
            continue;  // walled off or endpoint swallowed; redraw
        }
    }
    throw ValidationError("random_scenario: could not generate a feasible scenario for seed " +
                          std::to_string(seed));
}

} // namespace agv
