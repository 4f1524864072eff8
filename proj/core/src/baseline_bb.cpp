#include "mmnetloc/baseline_bb.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "mmnetloc/cost.hpp"
#include "mmnetloc/mm.hpp"

namespace mmnetloc {

namespace {

// Relative floor under the BB denominator; below it the ratio is treated as
// degenerate and the fallback step is used instead.
constexpr double kTinyDenominator = 1e-12;

inline auto block(const Eigen::VectorXd& v, int idx, int p) {
  return v.segment(static_cast<Eigen::Index>(idx) * p, p);
}

inline auto block(Eigen::VectorXd& v, int idx, int p) {
  return v.segment(static_cast<Eigen::Index>(idx) * p, p);
}

}  // namespace

Eigen::VectorXd grad_original(const Network& net, const Measurements& meas,
                              const Eigen::VectorXd& x, double epsilon_guard) {
  require_x_shape(net, x, "grad_original");
  const int p = net.p;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edges[e];
    const Eigen::VectorXd diff = block(x, ed.i, p) - block(x, ed.j, p);
    const double nd = diff.norm();
    if (nd < epsilon_guard) continue;
    const Eigen::VectorXd contrib = (1.0 - meas.d(e) / nd) * diff;
    block(g, ed.i, p) += contrib;
    block(g, ed.j, p) -= contrib;
  }
  for (int l = 0; l < net.link_count(); ++l) {
    const AnchorLink& lk = net.incidence.links[l];
    const Eigen::VectorXd diff = block(x, lk.sensor, p) - net.anchors[lk.anchor];
    const double nd = diff.norm();
    if (nd < epsilon_guard) continue;
    block(g, lk.sensor, p) += (1.0 - meas.r(l) / nd) * diff;
  }
  return g;
}

std::vector<double> metropolis_round(const Network& net, const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != net.n)
    throw std::invalid_argument("metropolis_round: one value per node required");
  std::vector<double> next(u.size());
  for (int i = 0; i < net.n; ++i) {
    double acc = u[i];
    for (const IncidentEdge& ie : net.incidence.node_edges[i]) {
      const double w = 1.0 / (1.0 + std::max(net.degree[i], net.degree[ie.neighbor]));
      acc += w * (u[ie.neighbor] - u[i]);
    }
    next[i] = acc;
  }
  return next;
}

BBResult bb_solve(const Network& net, const Measurements& meas,
                  const Eigen::VectorXd& x0, const BBConfig& cfg) {
  require_x_shape(net, x0, "bb_solve");
  if (cfg.T < 1) throw std::invalid_argument("bb_solve: T must be >= 1");
  if (cfg.max_iters < 1) throw std::invalid_argument("bb_solve: max_iters must be >= 1");
  if (cfg.fallback_step && !(*cfg.fallback_step > 0.0))
    throw std::invalid_argument("bb_solve: fallback_step must be positive");
  if (!(cfg.epsilon_guard > 0.0))
    throw std::invalid_argument("bb_solve: epsilon_guard must be positive");

  const int n = net.n;
  const int p = net.p;
  const double fallback =
      cfg.fallback_step ? *cfg.fallback_step : 1.0 / lipschitz_bound(net);
  const std::int64_t scalars_per_iter =
      static_cast<std::int64_t>(n) * (2 * cfg.T + p);

  BBResult res;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd g = grad_original(net, meas, x, cfg.epsilon_guard);
  Eigen::VectorXd prev_x, prev_g;

  res.trace.push_back({0, cost_original(net, meas, x) / n, std::nullopt, 0,
                       per_sensor_error(net, x)});

  std::vector<double> u(n), v(n), alpha(n);
  for (int t = 1; t <= cfg.max_iters; ++t) {
    if (t == 1) {
      std::fill(alpha.begin(), alpha.end(), fallback);
      res.fallback_count += n;
    } else {
      // Per-node shares of the two BB inner products, then T averaging
      // rounds; each node forms its step from its own (possibly still
      // disagreeing) estimates. The 1/n of the consensus mean cancels in the
      // ratio.
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd s = block(x, i, p) - block(prev_x, i, p);
        const Eigen::VectorXd gd = block(g, i, p) - block(prev_g, i, p);
        if (cfg.use_bb2) {
          u[i] = s.dot(gd);
          v[i] = gd.dot(gd);
        } else {
          u[i] = s.dot(s);
          v[i] = s.dot(gd);
        }
      }
      for (int r = 0; r < cfg.T; ++r) {
        u = metropolis_round(net, u);
        v = metropolis_round(net, v);
      }
      for (int i = 0; i < n; ++i) {
        bool degenerate = cfg.use_bb2 ? !(v[i] > kTinyDenominator * std::abs(u[i]))
                                      : !(v[i] > kTinyDenominator * u[i]);
        double a = degenerate ? fallback : u[i] / v[i];
        if (!std::isfinite(a) || !(a > 0.0)) {
          std::cerr << "warning: degenerate step at iteration " << t << ", node " << i
                    << "; using fallback\n";
          a = fallback;
          degenerate = true;
        }
        if (degenerate) ++res.fallback_count;
        alpha[i] = a;
      }
    }

    prev_x = x;
    prev_g = g;
    for (int i = 0; i < n; ++i) block(x, i, p) -= alpha[i] * block(g, i, p);
    g = grad_original(net, meas, x, cfg.epsilon_guard);

    res.trace.push_back({t, cost_original(net, meas, x) / n, std::nullopt,
                         t * scalars_per_iter, per_sensor_error(net, x)});
  }

  res.x_hat = std::move(x);
  return res;
}

}  // namespace mmnetloc
