#pragma once

#include <Eigen/Dense>
#include <optional>

#include "mmnetloc/cost.hpp"
#include "mmnetloc/graph.hpp"
#include "mmnetloc/trace.hpp"

namespace mmnetloc {

struct SolverConfig {
  int max_iters = 2000;
  double tol_rel_cost = 1e-9;  // relative improvement below this, sustained
                               // over stop_window iterations, stops the run
  int stop_window = 10;
  std::optional<double> lipschitz_override;
  bool allow_unsafe_lipschitz = false;  // permit an override below the bound
};

// Windowed relative-improvement stopping rule shared by the centralized
// solver and the per-node simulation, so both stop on the same iteration.
class StopRule {
 public:
  StopRule(double tol_rel, int window) : tol_(tol_rel), window_(window) {}

  // Costs below this are indistinguishable from zero for unit-scale
  // coordinates in double precision; without the absolute floor, noise-level
  // wander around an exactly-zero optimum keeps resetting the streak and the
  // rule can never fire.
  static constexpr double kZeroCostFloor = 1e-18;

  // Feed the cost after each iteration; true once improvement has stayed
  // below tol for `window` consecutive iterations.
  bool should_stop(double cost) {
    if (has_prev_) {
      const double floor = std::max(std::abs(prev_), kZeroCostFloor);
      streak_ = (prev_ - cost > tol_ * floor) ? 0 : streak_ + 1;
    }
    prev_ = cost;
    has_prev_ = true;
    return streak_ >= window_;
  }

 private:
  double tol_;
  int window_;
  double prev_ = 0.0;
  bool has_prev_ = false;
  int streak_ = 0;
};

/// Distributable gradient Lipschitz bound 2*delta_max + max_i |A_i| + 2.
/// Every node can assemble it from flooded degree and anchor-count maxima.
double lipschitz_bound(const Network& net);

// Resolves the step constant from config: the bound, or a validated
// override. Throws if the override undercuts the bound without the unsafe
// flag; warns on stderr when the unsafe path is taken.
double resolve_lipschitz(const Network& net, const SolverConfig& cfg);

/// One projected-gradient sweep on the lifted variable with step 1/L:
///   x+ = (I - B/L) x + (1/L) A^T y + (1/L) E^T (w + alpha)
///   y+ = P_sphere((L-1)/L y + (1/L) A x)
///   w+ = P_sphere((L-1)/L w + (1/L) E x - alpha/L)
/// The x block is unconstrained; only y and w are projected.
StateZ mm_step(const Network& net, const Measurements& meas, const StateZ& z, double L);

struct SolveResult {
  Eigen::VectorXd x_hat;
  RunTrace trace;
};

/// Majorization-minimization solve: lift x0 to the feasible set, then apply
/// mm_step until the windowed stopping rule or max_iters. Each iteration
/// accounts p*n communicated scalars (one position broadcast per node).
SolveResult solve(const Network& net, const Measurements& meas,
                  const Eigen::VectorXd& x0, const SolverConfig& cfg);

// Mean per-sensor distance to the true positions; nullopt without truth.
std::optional<double> per_sensor_error(const Network& net, const Eigen::VectorXd& x);

}  // namespace mmnetloc
