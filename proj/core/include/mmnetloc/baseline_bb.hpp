#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mmnetloc/graph.hpp"
#include "mmnetloc/trace.hpp"

namespace mmnetloc {

// Distributed gradient descent with a Barzilai-Borwein step agreed on by
// average consensus. The comparison method for the main solver.
struct BBConfig {
  int T = 20;           // consensus rounds per iteration
  int max_iters = 2000;
  // Step used on the first iteration and whenever the BB ratio degenerates.
  // Unset means 1 / lipschitz_bound(net), resolved at solve time.
  std::optional<double> fallback_step{};
  double epsilon_guard = 1e-12;  // edge shorter than this contributes no gradient
  bool use_bb2 = false;          // <s,g>/<g,g> instead of <s,s>/<s,g>
};

/// Gradient of the range-residual cost. Edges (or anchor links) whose current
/// separation is below epsilon_guard contribute nothing, a valid descent
/// choice at the kink.
Eigen::VectorXd grad_original(const Network& net, const Measurements& meas,
                              const Eigen::VectorXd& x, double epsilon_guard = 1e-12);

/// One synchronous round of Metropolis-weighted averaging,
/// u_i += sum_j 1/(1 + max(deg_i, deg_j)) * (u_j - u_i) over neighbors j.
/// Preserves the mean; iterating converges every entry to it.
std::vector<double> metropolis_round(const Network& net, const std::vector<double>& u);

struct BBResult {
  Eigen::VectorXd x_hat;
  RunTrace trace;
  int fallback_count = 0;  // (iteration, node) pairs that used fallback_step
};

/// x^{t+1}_i = x^t_i - alpha^t_i * g^t_i. Each node's alpha comes from its own
/// consensus estimates of the two BB inner products (T rounds, 2 scalars per
/// node per round), so nodes may briefly disagree; with large T every alpha
/// matches the centralized BB step. Communication advances by n*(2T + p) per
/// iteration: 2T consensus scalars plus one position broadcast per node.
/// First iteration has no history and uses the fallback step.
BBResult bb_solve(const Network& net, const Measurements& meas,
                  const Eigen::VectorXd& x0, const BBConfig& cfg);

}  // namespace mmnetloc
