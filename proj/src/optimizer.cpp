#include "agvplan/optimizer.hpp"

#include "agvplan/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace agv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Outer augmented-Lagrangian loop.
constexpr int kMaxOuterIterations = 30;
constexpr double kConstraintTolerance = 1e-3;
constexpr double kPenaltyGrowth = 10.0;
constexpr double kPenaltyCap = 1e8;
constexpr double kPenaltyInitial = 10.0;
constexpr double kResidualDecrease = 0.5;  // required per-outer shrink factor

// Inner projected quasi-Newton loop.
constexpr int kMaxInnerIterations = 500;
constexpr double kProjectedGradientTolerance = 1e-6;
constexpr int kHistorySize = 10;
constexpr double kArmijoSlope = 1e-4;
constexpr int kMaxLineSearchSteps = 60;

void clamp_into_bounds(std::vector<double>& z, const TrajectoryProblem& p) {
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = std::clamp(z[i], p.lower[i], p.upper[i]);
    }
}

struct ResidualSet {
    std::vector<double> x, y, speed, heading;  // N-1 each

    double max_abs() const {
        double m = 0.0;
        for (const auto* v : {&x, &y, &speed, &heading}) {
            for (double r : *v) m = std::max(m, std::abs(r));
        }
        return m;
    }
};

ResidualSet kinematic_residuals(std::span<const double> z, const TrajectoryProblem& p) {
    const std::size_t n = p.n;
    const double dt = z[p.it()] / static_cast<double>(n - 1);
    ResidualSet r;
    r.x.resize(n - 1);
    r.y.resize(n - 1);
    r.speed.resize(n - 1);
    r.heading.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double c = std::cos(z[p.ith(i)]);
        const double s = std::sin(z[p.ith(i)]);
        r.x[i] = z[p.ix(i + 1)] - z[p.ix(i)] - z[p.iv(i)] * c * dt;
        r.y[i] = z[p.iy(i + 1)] - z[p.iy(i)] - z[p.iv(i)] * s * dt;
        r.speed[i] = z[p.iv(i + 1)] - z[p.iv(i)] - z[p.ia(i)] * dt;
        r.heading[i] = z[p.ith(i + 1)] - z[p.ith(i)] - z[p.iw(i)] * dt;
    }
    return r;
}

// Shared evaluator; gradient may be null for value-only calls.
double eval_augmented(std::span<const double> z, const Multipliers& lam, double mu,
                      const TrajectoryProblem& p, double* grad) {
    const std::size_t n = p.n;
    const double inv_segments = 1.0 / static_cast<double>(n - 1);
    const double t_total = z[p.it()];
    const double dt = t_total * inv_segments;

    if (grad != nullptr) {
        std::fill(grad, grad + p.dim(), 0.0);
    }

    double value = t_total;
    double grad_t = 1.0;

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double v = z[p.iv(i)];
        const double c = std::cos(z[p.ith(i)]);
        const double s = std::sin(z[p.ith(i)]);

        const double rx = z[p.ix(i + 1)] - z[p.ix(i)] - v * c * dt;
        const double ry = z[p.iy(i + 1)] - z[p.iy(i)] - v * s * dt;
        const double rv = z[p.iv(i + 1)] - z[p.iv(i)] - z[p.ia(i)] * dt;
        const double rt = z[p.ith(i + 1)] - z[p.ith(i)] - z[p.iw(i)] * dt;

        value += p.weight_x * rx * rx + p.weight_y * ry * ry;
        value += lam.speed[i] * rv + 0.5 * mu * rv * rv;
        value += lam.heading[i] * rt + 0.5 * mu * rt * rt;

        if (grad == nullptr) continue;

        const double gx = 2.0 * p.weight_x * rx;
        const double gy = 2.0 * p.weight_y * ry;
        grad[p.ix(i + 1)] += gx;
        grad[p.ix(i)] -= gx;
        grad[p.iy(i + 1)] += gy;
        grad[p.iy(i)] -= gy;
        grad[p.iv(i)] += gx * (-c * dt) + gy * (-s * dt);
        grad[p.ith(i)] += gx * (v * s * dt) + gy * (-v * c * dt);
        grad_t += gx * (-v * c * inv_segments) + gy * (-v * s * inv_segments);

        const double mv = lam.speed[i] + mu * rv;
        grad[p.iv(i + 1)] += mv;
        grad[p.iv(i)] -= mv;
        grad[p.ia(i)] += mv * (-dt);
        grad_t += mv * (-z[p.ia(i)] * inv_segments);

        const double mt = lam.heading[i] + mu * rt;
        grad[p.ith(i + 1)] += mt;
        grad[p.ith(i)] -= mt;
        grad[p.iw(i)] += mt * (-dt);
        grad_t += mt * (-z[p.iw(i)] * inv_segments);
    }

    if (grad != nullptr) {
        grad[p.it()] = grad_t;
    }
    return value;
}

// Diagonal of the Gauss-Newton Hessian of the augmented objective. Variable
// classes differ in curvature by orders of magnitude (positions carry the
// stiff soft penalties, controls only mu * dt^2), so the quasi-Newton seed
// must be per-variable or the soft directions crawl.
void gauss_newton_diagonal(std::span<const double> z, double mu, const TrajectoryProblem& p,
                           std::vector<double>& diag) {
    const std::size_t n = p.n;
    const double inv_segments = 1.0 / static_cast<double>(n - 1);
    const double dt = z[p.it()] * inv_segments;

    std::fill(diag.begin(), diag.end(), 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double v = z[p.iv(i)];
        const double c = std::cos(z[p.ith(i)]);
        const double s = std::sin(z[p.ith(i)]);

        const double wx = 2.0 * p.weight_x;
        const double wy = 2.0 * p.weight_y;
        diag[p.ix(i + 1)] += wx;
        diag[p.ix(i)] += wx;
        diag[p.iy(i + 1)] += wy;
        diag[p.iy(i)] += wy;
        diag[p.iv(i)] += wx * (c * dt) * (c * dt) + wy * (s * dt) * (s * dt);
        diag[p.ith(i)] += wx * (v * s * dt) * (v * s * dt) + wy * (v * c * dt) * (v * c * dt);
        diag[p.it()] += wx * (v * c * inv_segments) * (v * c * inv_segments) +
                        wy * (v * s * inv_segments) * (v * s * inv_segments);

        diag[p.iv(i + 1)] += mu;
        diag[p.iv(i)] += mu;
        diag[p.ia(i)] += mu * dt * dt;
        diag[p.ith(i + 1)] += mu;
        diag[p.ith(i)] += mu;
        diag[p.iw(i)] += mu * dt * dt;
        diag[p.it()] += mu * (z[p.ia(i)] * inv_segments) * (z[p.ia(i)] * inv_segments) +
                        mu * (z[p.iw(i)] * inv_segments) * (z[p.iw(i)] * inv_segments);
    }
}

// Gradient components that cannot make progress against an active bound are
// zeroed; convergence is measured on what remains.
void masked_gradient(const std::vector<double>& z, const std::vector<double>& g,
                     const TrajectoryProblem& p, std::vector<double>& out) {
    for (std::size_t i = 0; i < z.size(); ++i) {
        const bool at_lower = z[i] <= p.lower[i] && g[i] > 0.0;
        const bool at_upper = z[i] >= p.upper[i] && g[i] < 0.0;
        out[i] = (at_lower || at_upper) ? 0.0 : g[i];
    }
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

class LbfgsDirection {
public:
    explicit LbfgsDirection(std::size_t dim) : dim_(dim) {}

    void clear() { entries_.clear(); }

    void push(std::vector<double> s, std::vector<double> y) {
        const double sy = dot(s, y);
        const double guard = 1e-12 * std::sqrt(dot(s, s)) * std::sqrt(dot(y, y));
        if (sy < -guard) {
            // Negative curvature: restart rather than corrupt the
            // inverse-Hessian estimate.
            entries_.clear();
            return;
        }
        if (sy <= guard) {
            return;  // uninformative pair, keep the current estimate
        }
        entries_.push_back({std::move(s), std::move(y), 1.0 / sy});
        if (entries_.size() > kHistorySize) {
            entries_.erase(entries_.begin());
        }
    }

    // Two-loop recursion on the masked gradient, seeded with the inverse
    // Gauss-Newton diagonal; returns a descent direction.
    std::vector<double> compute(const std::vector<double>& g,
                                const std::vector<double>& hessian_diag) const {
        std::vector<double> q = g;
        std::vector<double> alpha(entries_.size(), 0.0);
        for (std::size_t k = entries_.size(); k-- > 0;) {
            alpha[k] = entries_[k].rho * dot(entries_[k].s, q);
            for (std::size_t i = 0; i < dim_; ++i) q[i] -= alpha[k] * entries_[k].y[i];
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            q[i] /= std::max(hessian_diag[i], 1e-8);
        }
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            const double beta = entries_[k].rho * dot(entries_[k].y, q);
            for (std::size_t i = 0; i < dim_; ++i) {
                q[i] += (alpha[k] - beta) * entries_[k].s[i];
            }
        }
        for (double& x : q) x = -x;
        return q;
    }

private:
    struct Entry {
        std::vector<double> s;
        std::vector<double> y;
        double rho;
    };

    std::size_t dim_;
    std::vector<Entry> entries_;
};

// Projected L-BFGS with Armijo backtracking along the projected path.
// Returns the number of iterations spent.
int minimize_inner(std::vector<double>& z, const Multipliers& lam, double mu,
                   const TrajectoryProblem& p) {
    const std::size_t dim = p.dim();
    LbfgsDirection history(dim);
    std::vector<double> g(dim), gm(dim), z_new(dim), g_new(dim), step(dim), diag(dim);

    double f = eval_augmented(z, lam, mu, p, g.data());
    int iter = 0;
    for (; iter < kMaxInnerIterations; ++iter) {
        masked_gradient(z, g, p, gm);
        if (inf_norm(gm) < kProjectedGradientTolerance) break;

        gauss_newton_diagonal(z, mu, p, diag);
        const auto scaled_descent = [&](std::vector<double>& out) {
            for (std::size_t i = 0; i < dim; ++i) {
                out[i] = -gm[i] / std::max(diag[i], 1e-8);
            }
        };
        std::vector<double> d = history.compute(gm, diag);
        for (std::size_t i = 0; i < dim; ++i) {
            if (gm[i] == 0.0) d[i] = 0.0;
        }
        if (dot(d, g) >= 0.0) {
            history.clear();
            scaled_descent(d);
        }

        bool accepted = false;
        double f_new = f;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            double alpha = 1.0;
            for (int ls = 0; ls < kMaxLineSearchSteps; ++ls) {
                for (std::size_t i = 0; i < dim; ++i) {
                    z_new[i] = std::clamp(z[i] + alpha * d[i], p.lower[i], p.upper[i]);
                    step[i] = z_new[i] - z[i];
                }
                const double slope = dot(g, step);
                if (slope < 0.0) {
                    f_new = eval_augmented(z_new, lam, mu, p, nullptr);
                    if (f_new <= f + kArmijoSlope * slope) {
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!accepted && attempt == 0) {
                // Quasi-Newton direction failed; retry with the scaled
                // steepest descent.
                history.clear();
                scaled_descent(d);
            }
        }
        if (!accepted) break;  // stalled

        double step_norm = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            step_norm = std::max(step_norm, std::abs(z_new[i] - z[i]));
        }
        if (step_norm == 0.0) break;  // progress below floating-point resolution

        eval_augmented(z_new, lam, mu, p, g_new.data());
        std::vector<double> s(dim), yv(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            s[i] = z_new[i] - z[i];
            yv[i] = g_new[i] - g[i];
        }
        history.push(std::move(s), std::move(yv));
        z.swap(z_new);
        g.swap(g_new);
        f = f_new;
    }
    return iter;
}

} // namespace

TrajectoryProblem assemble(const Corridor& corridor, const BoundaryConditions& boundary,
                           const OcpLimits& limits, double weight_x, double weight_y,
                           std::size_t n) {
    if (n < 2) {
        throw ValidationError("trajectory problem needs at least 2 nodes");
    }
    if (corridor.boxes.size() != n) {
        throw ValidationError("corridor has " + std::to_string(corridor.boxes.size()) +
                              " boxes, expected " + std::to_string(n));
    }
    if (weight_x <= 0.0 || weight_y <= 0.0) {
        throw ValidationError("penalty weights must be positive");
    }

    TrajectoryProblem p;
    p.n = n;
    p.weight_x = weight_x;
    p.weight_y = weight_y;
    p.limits = limits;
    p.boundary = boundary;
    p.lower.assign(p.dim(), -kInf);
    p.upper.assign(p.dim(), kInf);

    for (std::size_t i = 0; i < n; ++i) {
        const Aabb box = box_to_bounds(corridor.boxes[i]);
        p.lower[p.ix(i)] = box.x_min;
        p.upper[p.ix(i)] = box.x_max;
        p.lower[p.iy(i)] = box.y_min;
        p.upper[p.iy(i)] = box.y_max;
        p.lower[p.iv(i)] = limits.speed_min;
        p.upper[p.iv(i)] = limits.speed_max;
        p.lower[p.ia(i)] = limits.acceleration_min;
        p.upper[p.ia(i)] = limits.acceleration_max;
        p.lower[p.iw(i)] = limits.angular_rate_min;
        p.upper[p.iw(i)] = limits.angular_rate_max;
    }
    p.lower[p.it()] = p.time_min;
    p.upper[p.it()] = p.time_max;

    const auto fix = [&p](std::size_t idx, double value, const std::string& what) {
        if (value < p.lower[idx] - kGeomEps || value > p.upper[idx] + kGeomEps) {
            throw ValidationError(what + " = " + std::to_string(value) +
                                  " violates its bounds [" + std::to_string(p.lower[idx]) +
                                  ", " + std::to_string(p.upper[idx]) + "]");
        }
        p.lower[idx] = value;
        p.upper[idx] = value;
    };

    fix(p.ix(0), boundary.start.x, "start x (node 1)");
    fix(p.iy(0), boundary.start.y, "start y (node 1)");
    fix(p.ith(0), boundary.start_heading, "start heading");
    fix(p.iv(0), boundary.start_speed, "start speed");
    fix(p.ia(0), boundary.start_acceleration, "start acceleration");
    fix(p.iw(0), boundary.start_angular_rate, "start angular rate");
    fix(p.ix(n - 1), boundary.goal.x, "goal x (node " + std::to_string(n) + ")");
    fix(p.iy(n - 1), boundary.goal.y, "goal y (node " + std::to_string(n) + ")");
    fix(p.iv(n - 1), boundary.goal_speed, "goal speed");
    fix(p.ia(n - 1), boundary.goal_acceleration, "goal acceleration");
    fix(p.iw(n - 1), boundary.goal_angular_rate, "goal angular rate");
    return p;
}

double objective_and_gradient(std::span<const double> z, const Multipliers& multipliers,
                              double mu, const TrajectoryProblem& problem,
                              std::span<double> gradient) {
    if (z.size() != problem.dim() || gradient.size() != problem.dim()) {
        throw ValidationError("decision vector size does not match the problem layout");
    }
    return eval_augmented(z, multipliers, mu, problem, gradient.data());
}

std::vector<double> initial_guess(const PlannedPath& path, const TrajectoryProblem& problem) {
    const std::size_t n = problem.n;
    if (path.samples.size() != n) {
        throw ValidationError("path has " + std::to_string(path.samples.size()) +
                              " samples, expected " + std::to_string(n));
    }

    std::vector<double> z(problem.dim(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        z[problem.ix(i)] = path.samples[i].x;
        z[problem.iy(i)] = path.samples[i].y;
    }

    // Headings from consecutive samples, unwrapped to a continuous profile
    // anchored near the fixed start heading.
    double prev = problem.boundary.start_heading;
    for (std::size_t i = 0; i < n; ++i) {
        double heading = prev;
        if (i + 1 < n) {
            const Point2 d = path.samples[i + 1] - path.samples[i];
            if (norm(d) > kGeomEps) {
                heading = std::atan2(d.y, d.x);
            }
        }
        double delta = heading - prev;
        delta -= 2.0 * M_PI * std::round(delta / (2.0 * M_PI));
        z[problem.ith(i)] = prev + delta;
        prev = z[problem.ith(i)];
    }

    const double length = polyline_length(path.samples);
    double t0 = length / (0.5 * problem.limits.speed_max);
    t0 = std::clamp(t0, problem.time_min, problem.time_max);
    const double speed = length > kGeomEps ? length / t0 : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        z[problem.iv(i)] = speed;
    }
    z[problem.it()] = t0;

    clamp_into_bounds(z, problem);
    return z;
}

Trajectory solve(const TrajectoryProblem& problem, std::vector<double> guess) {
    if (guess.size() != problem.dim()) {
        throw ValidationError("initial guess size does not match the problem layout");
    }
    const auto start_time = std::chrono::steady_clock::now();
    const std::size_t n = problem.n;

    std::vector<double> z = std::move(guess);
    clamp_into_bounds(z, problem);

    Multipliers lam;
    lam.speed.assign(n - 1, 0.0);
    lam.heading.assign(n - 1, 0.0);
    double mu = kPenaltyInitial;

    SolveDiagnostics diag;
    std::vector<double> best_z = z;
    double best_residual = kInf;
    double best_objective = kInf;
    double previous_residual = kInf;

    const Multipliers no_multipliers{std::vector<double>(n - 1, 0.0),
                                     std::vector<double>(n - 1, 0.0)};

    for (int outer = 0; outer < kMaxOuterIterations; ++outer) {
        diag.inner_iterations += minimize_inner(z, lam, mu, problem);
        diag.outer_iterations = outer + 1;

        const ResidualSet res = kinematic_residuals(z, problem);
        double al_residual = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            al_residual = std::max(al_residual, std::abs(res.speed[i]));
            al_residual = std::max(al_residual, std::abs(res.heading[i]));
        }
        diag.outer_history.emplace_back(al_residual, mu);

        const double full_residual = res.max_abs();
        const double objective = eval_augmented(z, no_multipliers, 0.0, problem, nullptr);
        if (full_residual < best_residual ||
            (full_residual == best_residual && objective < best_objective)) {
            best_residual = full_residual;
            best_objective = objective;
            best_z = z;
        }

        if (al_residual < kConstraintTolerance) break;

        for (std::size_t i = 0; i + 1 < n; ++i) {
            lam.speed[i] += mu * res.speed[i];
            lam.heading[i] += mu * res.heading[i];
        }
        if (al_residual > kResidualDecrease * previous_residual) {
            mu = std::min(mu * kPenaltyGrowth, kPenaltyCap);
        }
        previous_residual = al_residual;
    }

    Trajectory traj;
    traj.x.resize(n);
    traj.y.resize(n);
    traj.v.resize(n);
    traj.theta.resize(n);
    traj.a.resize(n);
    traj.omega.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        traj.x[i] = best_z[problem.ix(i)];
        traj.y[i] = best_z[problem.iy(i)];
        traj.v[i] = best_z[problem.iv(i)];
        traj.theta[i] = best_z[problem.ith(i)];
        traj.a[i] = best_z[problem.ia(i)];
        traj.omega[i] = best_z[problem.iw(i)];
    }
    traj.total_time = best_z[problem.it()];
    traj.dt = traj.total_time / static_cast<double>(n - 1);

    diag.objective = best_objective;
    diag.max_kinematic_residual = best_residual;
    diag.converged = best_residual < kKinematicTolerance;
    diag.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    traj.diagnostics = std::move(diag);
    return traj;
}

TrajectoryValidation validate(const Trajectory& trajectory, const Corridor& corridor,
                              const OcpLimits& limits) {
    TrajectoryValidation report;
    const std::size_t n = trajectory.x.size();
    const double dt = trajectory.dt;

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double c = std::cos(trajectory.theta[i]);
        const double s = std::sin(trajectory.theta[i]);
        const double rx =
            trajectory.x[i + 1] - trajectory.x[i] - trajectory.v[i] * c * dt;
        const double ry =
            trajectory.y[i + 1] - trajectory.y[i] - trajectory.v[i] * s * dt;
        const double rv = trajectory.v[i + 1] - trajectory.v[i] - trajectory.a[i] * dt;
        const double rt =
            trajectory.theta[i + 1] - trajectory.theta[i] - trajectory.omega[i] * dt;
        report.max_residual_x = std::max(report.max_residual_x, std::abs(rx));
        report.max_residual_y = std::max(report.max_residual_y, std::abs(ry));
        report.max_residual_speed = std::max(report.max_residual_speed, std::abs(rv));
        report.max_residual_heading = std::max(report.max_residual_heading, std::abs(rt));
        report.path_length += std::hypot(trajectory.x[i + 1] - trajectory.x[i],
                                         trajectory.y[i + 1] - trajectory.y[i]);
    }

    const auto check_bound = [&report](std::size_t node, double value, double lo, double hi) {
        const double violation = std::max(lo - value, value - hi);
        if (violation > 0.0) {
            if (report.bound_violations == 0) report.first_violation_node = node;
            ++report.bound_violations;
            report.max_bound_violation = std::max(report.max_bound_violation, violation);
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        check_bound(i, trajectory.v[i], limits.speed_min, limits.speed_max);
        check_bound(i, trajectory.a[i], limits.acceleration_min, limits.acceleration_max);
        check_bound(i, trajectory.omega[i], limits.angular_rate_min, limits.angular_rate_max);
        if (i < corridor.boxes.size()) {
            const Aabb box = box_to_bounds(corridor.boxes[i]);
            if (!point_in_aabb({trajectory.x[i], trajectory.y[i]}, box)) {
                ++report.containment_failures;
            }
        }
    }
    return report;
}

} // namespace agv
