#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace mmnetloc {

// Undirected edge between sensors, stored canonically with i < j.
struct Edge {
  int i = 0;
  int j = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// One sensor-anchor range link; its position in the flattened link list is
// the row of the anchor-selection operator.
struct AnchorLink {
  int sensor = 0;
  int anchor = 0;
  friend bool operator==(const AnchorLink&, const AnchorLink&) = default;
};

// An edge as seen from one endpoint: row index into the edge list, the node
// at the other end, and this endpoint's incidence sign.
struct IncidentEdge {
  int edge = 0;
  int neighbor = 0;
  double sign = 1.0;
};

// Oriented incidence bookkeeping. Each edge row carries +1 at the node with
// the smaller index and -1 at the other, which pins the arc-node incidence
// matrix (and everything derived from it) deterministically.
struct IncidenceMap {
  std::vector<std::vector<IncidentEdge>> node_edges;  // per sensor
  std::vector<AnchorLink> links;                      // sensor-major flattening
  std::vector<std::vector<int>> node_links;           // per sensor -> link rows

  int link_count() const { return static_cast<int>(links.size()); }
  static double sign_at(const Edge& e, int node) { return node == e.i ? 1.0 : -1.0; }
};

struct Network {
  int n = 0;  // sensors
  int p = 2;  // spatial dimension, 2 or 3
  std::vector<Edge> edges;
  std::vector<Eigen::VectorXd> anchors;
  std::vector<std::vector<int>> anchor_links;     // per sensor, sorted anchor ids
  std::optional<Eigen::VectorXd> true_positions;  // stacked n*p, evaluation only

  IncidenceMap incidence;         // built by make_network
  std::vector<int> degree;        // per sensor

  int edge_count() const { return static_cast<int>(edges.size()); }
  int anchor_count() const { return static_cast<int>(anchors.size()); }
  int link_count() const { return incidence.link_count(); }

  Eigen::VectorXd anchor_stack() const;  // alpha: link-ordered anchor positions
};

struct Measurements {
  Eigen::VectorXd d;   // per edge row, same order as Network::edges
  Eigen::VectorXd r;   // per link row, same order as IncidenceMap::links
  double sigma = 0.0;  // noise std used to generate them (metadata)
};

struct DegreeStats {
  int delta_max = 0;
  int max_anchor_count = 0;
};

// Validates invariants (edge canonical form, index ranges, connectivity,
// 2 <= p <= 3) and fills in incidence/degree bookkeeping. Throws
// std::invalid_argument on violation.
Network make_network(int n, int p, std::vector<Edge> edges,
                     std::vector<Eigen::VectorXd> anchors,
                     std::vector<std::vector<int>> anchor_links,
                     std::optional<Eigen::VectorXd> true_positions);

bool is_connected(int n, const std::vector<Edge>& edges);

// Sensors drawn uniformly in [0,1]^p; an edge wherever two sensors are within
// `radius`, an anchor link wherever a sensor is within `anchor_range` of an
// anchor. Redraws positions (sub-seeded from rng_seed) until the graph is
// connected; throws after max_attempts with a radius-too-small message.
Network generate_geometric_network(int n, int p, double radius,
                                   const std::vector<Eigen::VectorXd>& anchor_positions,
                                   double anchor_range, std::uint64_t rng_seed,
                                   int max_attempts = 1000);

// Bisects the connection radius so the realized mean degree of the seed's
// first position draw lands within `slack` of target_mean_degree.
double calibrate_radius(int n, int p, double target_mean_degree,
                        std::uint64_t rng_seed, double slack = 0.5);

// d_ij = | ||x_i - x_j|| + nu |, r_ik = | ||x_i - a_k|| + eta |, noise iid
// N(0, sigma^2). Requires true positions.
Measurements generate_measurements(const Network& net, double sigma,
                                   std::uint64_t rng_seed);

DegreeStats degree_stats(const Network& net);

double mean_degree(const Network& net);

// 2^p corners of the unit box, ordered by bit pattern of the corner index.
std::vector<Eigen::VectorXd> unit_box_corners(int p);

}  // namespace mmnetloc
