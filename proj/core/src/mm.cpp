#include "mmnetloc/mm.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "mmnetloc/detail/update_rules.hpp"
#include "mmnetloc/projections.hpp"

namespace mmnetloc {

double lipschitz_bound(const Network& net) {
  const DegreeStats s = degree_stats(net);
  return 2.0 * s.delta_max + s.max_anchor_count + 2.0;
}

double resolve_lipschitz(const Network& net, const SolverConfig& cfg) {
  const double bound = lipschitz_bound(net);
  if (!cfg.lipschitz_override) return bound;
  const double L = *cfg.lipschitz_override;
  if (L <= 0.0) throw std::invalid_argument("lipschitz override must be positive");
  if (L < bound) {
    if (!cfg.allow_unsafe_lipschitz)
      throw std::invalid_argument(
          "lipschitz override is below the distributable bound; set "
          "allow_unsafe_lipschitz to use it anyway");
    std::cerr << "warning: step constant " << L << " is below the bound " << bound
              << "; descent is no longer guaranteed\n";
  }
  return L;
}

namespace {

inline auto block(const Eigen::VectorXd& v, int idx, int p) {
  return v.segment(static_cast<Eigen::Index>(idx) * p, p);
}

}  // namespace

StateZ mm_step(const Network& net, const Measurements& meas, const StateZ& z, double L) {
  require_shape(net, z, "mm_step");
  if (!(L > 0.0)) throw std::invalid_argument("mm_step: L must be positive");
  const int p = net.p;
  const double inv_L = 1.0 / L;
  const double decay = (L - 1.0) / L;
  const Eigen::VectorXd tie = default_tie_break(p);

  StateZ next = StateZ::zeros(net);
  // Node-major sweep: each sensor's blocks are produced from exactly the
  // state a node of the message-passing simulation holds, in the same order.
  Eigen::VectorXd acc(p);
  for (int i = 0; i < net.n; ++i) {
    acc.setZero();
    for (const IncidentEdge& ie : net.incidence.node_edges[i]) {
      acc += block(z.x, ie.neighbor, p) + ie.sign * block(z.y, ie.edge, p);
      // Both endpoints derive the bitwise-same canonical edge vector, so one
      // write per edge suffices here; the simulation keeps a copy per node.
      if (ie.sign > 0) {
        const Eigen::VectorXd diff = block(z.x, i, p) - block(z.x, ie.neighbor, p);
        next.y.segment(static_cast<Eigen::Index>(ie.edge) * p, p) = detail::y_update(
            block(z.y, ie.edge, p), diff, decay, inv_L, meas.d(ie.edge), tie);
      }
    }
    for (int l : net.incidence.node_links[i]) {
      const Eigen::VectorXd& a = net.anchors[net.incidence.links[l].anchor];
      acc += block(z.w, l, p) + a;
      next.w.segment(static_cast<Eigen::Index>(l) * p, p) =
          detail::w_update(block(z.w, l, p), block(z.x, i, p), a, decay, inv_L, meas.r(l), tie);
    }
    const double bi = detail::self_coefficient(
        L, net.degree[i], static_cast<int>(net.anchor_links[i].size()));
    next.x.segment(static_cast<Eigen::Index>(i) * p, p) =
        detail::x_update(block(z.x, i, p), bi, inv_L, acc);
  }
  return next;
}

std::optional<double> per_sensor_error(const Network& net, const Eigen::VectorXd& x) {
  if (!net.true_positions) return std::nullopt;
  const int p = net.p;
  double sum = 0.0;
  for (int i = 0; i < net.n; ++i)
    sum += (block(x, i, p) - block(*net.true_positions, i, p)).norm();
  return sum / net.n;
}

SolveResult solve(const Network& net, const Measurements& meas,
                  const Eigen::VectorXd& x0, const SolverConfig& cfg) {
  require_x_shape(net, x0, "solve");
  if (cfg.max_iters < 1) throw std::invalid_argument("solve: max_iters must be >= 1");
  const double L = resolve_lipschitz(net, cfg);
  const std::int64_t scalars_per_iter =
      static_cast<std::int64_t>(net.p) * net.n;  // one position broadcast per node

  StateZ z = reduce_to_x(net, meas, x0);
  RunTrace trace;
  StopRule rule(cfg.tol_rel_cost, cfg.stop_window);

  double cz = cost_z(net, meas, z);
  rule.should_stop(cz);
  trace.push_back({0, cost_original(net, meas, z.x) / net.n, cz, 0,
                   per_sensor_error(net, z.x)});

  for (int t = 1; t <= cfg.max_iters; ++t) {
    z = mm_step(net, meas, z, L);
    cz = cost_z(net, meas, z);
    trace.push_back({t, cost_original(net, meas, z.x) / net.n, cz,
                     t * scalars_per_iter, per_sensor_error(net, z.x)});
    if (rule.should_stop(cz)) break;
  }
  return {std::move(z.x), std::move(trace)};
}

}  // namespace mmnetloc
