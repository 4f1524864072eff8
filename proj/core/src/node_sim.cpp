#include "mmnetloc/node_sim.hpp"

#include <algorithm>
#include <cstring>
#include <string>
#include <utility>

#include "mmnetloc/detail/update_rules.hpp"
#include "mmnetloc/projections.hpp"

namespace mmnetloc {

std::int64_t MessageLog::total_scalars() const {
  std::int64_t s = 0;
  for (const Row& r : rows) s += r.scalars;
  return s;
}

std::int64_t MessageLog::round_scalars(int round) const {
  std::int64_t s = 0;
  for (const Row& r : rows)
    if (r.round == round) s += r.scalars;
  return s;
}

void MessageLog::write_csv(std::ostream& os) const {
  os << "round,sender,scalars\n";
  for (const Row& r : rows) os << r.round << ',' << r.sender << ',' << r.scalars << '\n';
}

Eigen::Ref<const Eigen::VectorXd> Inbox::x_of(int owner) const {
  const Network& net = sim_->net_;
  if (owner < 0 || owner >= net.n)
    throw LocalityViolation("inbox read of nonexistent node " + std::to_string(owner));
  if (owner == reader_)
    throw LocalityViolation("node " + std::to_string(reader_) +
                            " must use its own state, not the inbox");
  bool adjacent = false;
  for (const IncidentEdge& ie : net.incidence.node_edges[reader_])
    if (ie.neighbor == owner) {
      adjacent = true;
      break;
    }
  if (!adjacent)
    throw LocalityViolation("node " + std::to_string(reader_) + " read node " +
                            std::to_string(owner) + " outside its neighborhood");
  sim_->log_.cross_reads.insert({reader_, owner});
  return sim_->bcast_.segment(static_cast<Eigen::Index>(owner) * net.p, net.p);
}

std::vector<double> max_consensus_L(const Network& net, int rounds) {
  if (rounds < 0) throw std::invalid_argument("max_consensus_L: rounds must be >= 0");
  const int n = net.n;
  // Each node floods the pair (degree, anchor count); the two maxima travel
  // independently.
  std::vector<std::pair<int, int>> cur(n), next(n);
  for (int i = 0; i < n; ++i)
    cur[i] = {net.degree[i], static_cast<int>(net.anchor_links[i].size())};
  for (int r = 0; r < rounds; ++r) {
    for (int i = 0; i < n; ++i) {
      std::pair<int, int> best = cur[i];
      for (const IncidentEdge& ie : net.incidence.node_edges[i]) {
        best.first = std::max(best.first, cur[ie.neighbor].first);
        best.second = std::max(best.second, cur[ie.neighbor].second);
      }
      next[i] = best;
    }
    std::swap(cur, next);
  }
  std::vector<double> L(n);
  for (int i = 0; i < n; ++i) L[i] = 2.0 * cur[i].first + cur[i].second + 2.0;
  return L;
}

NodeSimulator::NodeSimulator(const Network& net, const Measurements& meas,
                             const Eigen::VectorXd& x0, const SolverConfig& cfg)
    : net_(net), meas_(meas), tie_(default_tie_break(net.p)) {
  require_x_shape(net, x0, "node simulation");
  const int n = net.n;
  const int p = net.p;

  // Setup phase, logged apart from the per-iteration traffic: every node
  // announces its initial position (n*p scalars), and unless the step
  // constant is supplied up front it is agreed on by flooding two integers
  // per node for n-1 rounds, enough to cover any connected topology.
  bcast_ = x0;
  log_.setup_scalars += static_cast<std::int64_t>(n) * p;

  std::vector<double> L(n);
  if (cfg.lipschitz_override) {
    const double fixed = resolve_lipschitz(net, cfg);
    L.assign(n, fixed);
  } else {
    const int rounds = n - 1;
    L = max_consensus_L(net, rounds);
    log_.setup_scalars += static_cast<std::int64_t>(rounds) * n * 2;
    for (int i = 1; i < n; ++i)
      if (L[i] != L[0])
        throw std::logic_error("step-constant consensus did not settle");
  }

  nodes_.resize(n);
  for (int i = 0; i < n; ++i) {
    NodeState& node = nodes_[i];
    node.id = i;
    node.x = x0.segment(static_cast<Eigen::Index>(i) * p, p);
    node.degree = net.degree[i];
    node.anchor_count = static_cast<int>(net.anchor_links[i].size());
    node.L = L[i];
    node.self_coef = detail::self_coefficient(node.L, node.degree, node.anchor_count);
    for (int l : net.incidence.node_links[i])
      node.anchors.push_back(net.anchors[net.incidence.links[l].anchor]);
  }

  // Initial edge and anchor variables: project the measured radius onto the
  // current separation. Both endpoints compute the canonical (tail - head)
  // difference from the same broadcast values, so their copies agree bitwise.
  for (int i = 0; i < n; ++i) {
    NodeState& node = nodes_[i];
    const Inbox inbox = inbox_of(i);
    node.y.reserve(net.incidence.node_edges[i].size());
    for (const IncidentEdge& ie : net.incidence.node_edges[i]) {
      const Eigen::VectorXd diff =
          ie.sign > 0 ? Eigen::VectorXd(node.x - inbox.x_of(ie.neighbor))
                      : Eigen::VectorXd(inbox.x_of(ie.neighbor) - node.x);
      node.y.push_back(project_sphere(diff, meas.d(ie.edge), tie_));
    }
    node.w.reserve(net.incidence.node_links[i].size());
    for (std::size_t s = 0; s < net.incidence.node_links[i].size(); ++s) {
      const int l = net.incidence.node_links[i][s];
      node.w.push_back(project_sphere(node.x - node.anchors[s], meas.r(l), tie_));
    }
  }

  // Slot of each edge in its two endpoints' local lists, for coherence checks.
  edge_slots_.assign(net.edge_count(), {-1, -1});
  for (int i = 0; i < n; ++i)
    for (std::size_t s = 0; s < net.incidence.node_edges[i].size(); ++s) {
      const IncidentEdge& ie = net.incidence.node_edges[i][s];
      if (ie.sign > 0)
        edge_slots_[ie.edge].first = static_cast<int>(s);
      else
        edge_slots_[ie.edge].second = static_cast<int>(s);
    }
}

void NodeSimulator::update_node(int i, NodeState& staged) const {
  const int p = net_.p;
  const NodeState& node = nodes_[i];
  const Inbox inbox = inbox_of(i);
  const double inv_L = 1.0 / node.L;
  const double decay = (node.L - 1.0) / node.L;

  staged.y.resize(node.y.size());
  staged.w.resize(node.w.size());

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(p);
  for (std::size_t s = 0; s < net_.incidence.node_edges[i].size(); ++s) {
    const IncidentEdge& ie = net_.incidence.node_edges[i][s];
    const auto xj = inbox.x_of(ie.neighbor);
    acc += xj + ie.sign * node.y[s];
    const Eigen::VectorXd diff =
        ie.sign > 0 ? Eigen::VectorXd(node.x - xj) : Eigen::VectorXd(xj - node.x);
    staged.y[s] = detail::y_update(node.y[s], diff, decay, inv_L, meas_.d(ie.edge), tie_);
  }
  for (std::size_t s = 0; s < net_.incidence.node_links[i].size(); ++s) {
    const int l = net_.incidence.node_links[i][s];
    acc += node.w[s] + node.anchors[s];
    staged.w[s] =
        detail::w_update(node.w[s], node.x, node.anchors[s], decay, inv_L, meas_.r(l), tie_);
  }
  staged.x = detail::x_update(node.x, node.self_coef, inv_L, acc);
}

void NodeSimulator::run_round() {
  std::vector<int> order(net_.n);
  for (int i = 0; i < net_.n; ++i) order[i] = i;
  run_round(order);
}

void NodeSimulator::run_round(const std::vector<int>& order) {
  const int n = net_.n;
  const int p = net_.p;
  if (static_cast<int>(order.size()) != n)
    throw std::invalid_argument("run_round: order must list every node once");
  std::vector<char> seen(n, 0);
  for (int i : order) {
    if (i < 0 || i >= n || seen[i])
      throw std::invalid_argument("run_round: order must list every node once");
    seen[i] = 1;
  }

  // Every read goes through the node's own state or the previous round's
  // broadcast buffer, so in-place commits cannot leak across nodes and the
  // order cannot matter.
  NodeState staged;
  for (int i : order) {
    update_node(i, staged);
    nodes_[i].x = std::move(staged.x);
    nodes_[i].y = std::move(staged.y);
    nodes_[i].w = std::move(staged.w);
  }

  ++round_;
  for (int i = 0; i < n; ++i) {
    bcast_.segment(static_cast<Eigen::Index>(i) * p, p) = nodes_[i].x;
    log_.rows.push_back({round_, i, p});
  }

  for (int e = 0; e < net_.edge_count(); ++e) {
    const Edge& ed = net_.edges[e];
    const auto [ts, hs] = edge_slots_[e];
    if (std::memcmp(nodes_[ed.i].y[ts].data(), nodes_[ed.j].y[hs].data(),
                    sizeof(double) * p) != 0)
      throw std::logic_error("edge variable copies diverged at edge " + std::to_string(e));
  }
}

StateZ NodeSimulator::gather() const {
  const int p = net_.p;
  StateZ z = StateZ::zeros(net_);
  for (int i = 0; i < net_.n; ++i)
    z.x.segment(static_cast<Eigen::Index>(i) * p, p) = nodes_[i].x;
  for (int e = 0; e < net_.edge_count(); ++e) {
    const Edge& ed = net_.edges[e];
    const auto [ts, hs] = edge_slots_[e];
    if (std::memcmp(nodes_[ed.i].y[ts].data(), nodes_[ed.j].y[hs].data(),
                    sizeof(double) * p) != 0)
      throw std::logic_error("edge variable copies diverged at edge " + std::to_string(e));
    z.y.segment(static_cast<Eigen::Index>(e) * p, p) = nodes_[ed.i].y[ts];
  }
  for (int i = 0; i < net_.n; ++i)
    for (std::size_t s = 0; s < net_.incidence.node_links[i].size(); ++s) {
      const int l = net_.incidence.node_links[i][s];
      z.w.segment(static_cast<Eigen::Index>(l) * p, p) = nodes_[i].w[s];
    }
  return z;
}

SimulateResult simulate(const Network& net, const Measurements& meas,
                        const Eigen::VectorXd& x0, const SolverConfig& cfg) {
  require_x_shape(net, x0, "simulate");
  if (cfg.max_iters < 1) throw std::invalid_argument("simulate: max_iters must be >= 1");
  NodeSimulator sim(net, meas, x0, cfg);
  const std::int64_t scalars_per_iter = static_cast<std::int64_t>(net.p) * net.n;

  RunTrace trace;
  StopRule rule(cfg.tol_rel_cost, cfg.stop_window);

  StateZ z = sim.gather();
  double cz = cost_z(net, meas, z);
  rule.should_stop(cz);
  trace.push_back({0, cost_original(net, meas, z.x) / net.n, cz, 0,
                   per_sensor_error(net, z.x)});

  for (int t = 1; t <= cfg.max_iters; ++t) {
    sim.run_round();
    z = sim.gather();
    cz = cost_z(net, meas, z);
    trace.push_back({t, cost_original(net, meas, z.x) / net.n, cz,
                     t * scalars_per_iter, per_sensor_error(net, z.x)});
    if (rule.should_stop(cz)) break;
  }
  return {std::move(z.x), std::move(trace), std::move(sim.log())};
}

}  // namespace mmnetloc
