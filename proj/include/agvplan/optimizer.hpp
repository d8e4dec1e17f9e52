#pragma once

#include "agvplan/corridor.hpp"
#include "agvplan/visibility.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace agv {

// Per-node residual tolerance the converged flag is held to, across all four
// kinematic coupling families.
inline constexpr double kKinematicTolerance = 1e-3;

struct OcpLimits {
    double speed_min = -3.0;
    double speed_max = 3.0;
    double acceleration_min = -1.8;
    double acceleration_max = 1.8;
    double angular_rate_min = -2.5;
    double angular_rate_max = 2.5;
};

// Fixed start pose/rates and goal position/rates. The goal heading stays
// free.
struct BoundaryConditions {
    Point2 start{};
    double start_heading = 0.0;
    double start_speed = 0.0;
    double start_acceleration = 0.0;
    double start_angular_rate = 0.0;
    Point2 goal{};
    double goal_speed = 0.0;
    double goal_acceleration = 0.0;
    double goal_angular_rate = 0.0;
};

// Box-constrained transcription over N nodes. Decision vector layout:
// [x_1..x_N, y_1..y_N, v_1..v_N, theta_1..theta_N, a_1..a_N, omega_1..omega_N, T].
// Fixed variables are encoded as equal lower/upper bounds.
struct TrajectoryProblem {
    std::size_t n = 0;
    double weight_x = 0.0;  // position-residual penalty weights
    double weight_y = 0.0;
    OcpLimits limits;
    BoundaryConditions boundary;
    double time_min = 0.1;
    double time_max = 120.0;
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dim() const { return 6 * n + 1; }
    std::size_t ix(std::size_t i) const { return i; }
    std::size_t iy(std::size_t i) const { return n + i; }
    std::size_t iv(std::size_t i) const { return 2 * n + i; }
    std::size_t ith(std::size_t i) const { return 3 * n + i; }
    std::size_t ia(std::size_t i) const { return 4 * n + i; }
    std::size_t iw(std::size_t i) const { return 5 * n + i; }
    std::size_t it() const { return 6 * n; }
};

// Lagrange multiplier estimates for the speed and heading coupling
// constraints (N-1 each).
struct Multipliers {
    std::vector<double> speed;
    std::vector<double> heading;
};

struct SolveDiagnostics {
    double objective = 0.0;              // soft-penalty objective at the returned iterate
    double max_kinematic_residual = 0.0; // worst per-node residual over all four families
    int outer_iterations = 0;
    int inner_iterations = 0;
    double wall_seconds = 0.0;
    bool converged = false;
    // (max AL residual, penalty weight) after each outer iteration.
    std::vector<std::pair<double, double>> outer_history;
};

struct Trajectory {
    std::vector<double> x, y, v, theta, a, omega;
    double total_time = 0.0;
    double dt = 0.0;
    SolveDiagnostics diagnostics;
};

struct TrajectoryValidation {
    double max_residual_x = 0.0;
    double max_residual_y = 0.0;
    double max_residual_speed = 0.0;
    double max_residual_heading = 0.0;
    std::size_t bound_violations = 0;
    double max_bound_violation = 0.0;
    std::size_t first_violation_node = static_cast<std::size_t>(-1);
    std::size_t containment_failures = 0;
    double path_length = 0.0;
};

// Builds the box-bounded problem from corridor bounds and boundary
// conditions. Throws ValidationError when the start or goal position
// violates its corridor box or a fixed rate falls outside its limit range.
TrajectoryProblem assemble(const Corridor& corridor, const BoundaryConditions& boundary,
                           const OcpLimits& limits, double weight_x, double weight_y,
                           std::size_t n);

// Augmented-Lagrangian objective: total time plus weighted squared position
// residuals, plus multiplier and quadratic terms for the speed/heading
// residuals. The analytic gradient includes the Delta_t = T/(N-1) coupling
// through the time variable.
double objective_and_gradient(std::span<const double> z, const Multipliers& multipliers,
                              double mu, const TrajectoryProblem& problem,
                              std::span<double> gradient);

// Positions from the path, headings from consecutive segments (unwrapped),
// constant mid-range speed, zero accelerations and angular rates, then
// projected into bounds.
std::vector<double> initial_guess(const PlannedPath& path, const TrajectoryProblem& problem);

// Augmented-Lagrangian outer loop with a projected L-BFGS inner solver.
// Always returns the best iterate found; converged reports whether all
// kinematic residuals meet kKinematicTolerance.
Trajectory solve(const TrajectoryProblem& problem, std::vector<double> guess);

// Re-evaluates the transcription constraints on a finished trajectory.
TrajectoryValidation validate(const Trajectory& trajectory, const Corridor& corridor,
                              const OcpLimits& limits);

} // namespace agv
