#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <ostream>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mmnetloc/cost.hpp"
#include "mmnetloc/graph.hpp"
#include "mmnetloc/mm.hpp"
#include "mmnetloc/trace.hpp"

namespace mmnetloc {

// A node tried to read state it does not own and was not sent.
class LocalityViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Everything sensor i holds: its position estimate, its own copies of the
// edge variables for incident edges (canonical orientation shared with the
// far endpoint), its anchor variables, and the constants it can derive
// locally once L has been flooded.
struct NodeState {
  int id = 0;
  Eigen::VectorXd x;
  std::vector<Eigen::VectorXd> y;        // order: incidence.node_edges[id]
  std::vector<Eigen::VectorXd> w;        // order: incidence.node_links[id]
  std::vector<Eigen::VectorXd> anchors;  // positions of the linked anchors
  int degree = 0;
  int anchor_count = 0;
  double L = 0.0;
  double self_coef = 0.0;  // (L - degree - anchor_count) / L
};

// Broadcast accounting. Iteration rounds carry one p-vector broadcast per
// node; the setup phase (initial position exchange plus the L flood) is
// tallied separately, matching how the per-iteration cost is reported.
struct MessageLog {
  struct Row {
    int round = 0;
    int sender = 0;
    int scalars = 0;
  };
  std::vector<Row> rows;
  std::int64_t setup_scalars = 0;
  std::set<std::pair<int, int>> cross_reads;  // (reader, owner), audit trail

  std::int64_t total_scalars() const;
  std::int64_t round_scalars(int round) const;
  void write_csv(std::ostream& os) const;  // columns: round,sender,scalars
};

class NodeSimulator;

// Read-only window onto the previous round's broadcasts, scoped to one
// reader. Reads outside the reader's neighborhood throw; every read lands in
// the audit trail.
class Inbox {
 public:
  Eigen::Ref<const Eigen::VectorXd> x_of(int owner) const;

 private:
  friend class NodeSimulator;
  Inbox(const NodeSimulator* sim, int reader) : sim_(sim), reader_(reader) {}
  const NodeSimulator* sim_;
  int reader_;
};

// Synchronous rounds over per-node state. Nodes read only the previous
// round's broadcasts (double-buffered), so any processing order inside a
// round yields bitwise-identical results.
class NodeSimulator {
 public:
  NodeSimulator(const Network& net, const Measurements& meas,
                const Eigen::VectorXd& x0, const SolverConfig& cfg);

  void run_round();
  void run_round(const std::vector<int>& order);  // explicit node order

  int rounds_completed() const { return round_; }
  const NodeState& node(int i) const { return nodes_.at(i); }
  Inbox inbox_of(int reader) const { return Inbox(this, reader); }
  const MessageLog& log() const { return log_; }
  MessageLog& log() { return log_; }

  // Assembles the global state; edge variables come from the canonical
  // (smaller-index) endpoint after checking both copies agree bitwise.
  StateZ gather() const;

 private:
  friend class Inbox;
  const Network& net_;
  const Measurements& meas_;
  std::vector<NodeState> nodes_;
  Eigen::VectorXd bcast_;  // previous round's broadcast positions, stacked
  std::vector<std::pair<int, int>> edge_slots_;  // edge -> slot at (tail, head)
  int round_ = 0;
  mutable MessageLog log_;
  Eigen::VectorXd tie_;

  void update_node(int i, NodeState& staged) const;
};

struct SimulateResult {
  Eigen::VectorXd x_hat;
  RunTrace trace;
  MessageLog log;
};

/// Runs the per-node algorithm to the same stopping rule as the centralized
/// solver. The trace is semantically identical to solve()'s; the log carries
/// the real broadcast counts (p scalars per node per round).
SimulateResult simulate(const Network& net, const Measurements& meas,
                        const Eigen::VectorXd& x0, const SolverConfig& cfg);

/// Max-consensus flooding of (degree, anchor-count) maxima: after at least
/// diameter rounds every node returns 2*delta_max + max|A_i| + 2. With fewer
/// rounds nodes may still disagree; the caller decides what to assert.
std::vector<double> max_consensus_L(const Network& net, int rounds);

}  // namespace mmnetloc
