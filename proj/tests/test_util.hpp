#pragma once

// Shared generators for randomized tests. Everything is driven by explicit
// seeds so failures replay exactly.

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "mmnetloc/graph.hpp"
#include "mmnetloc/random.hpp"

namespace testutil {

using namespace mmnetloc;

struct Instance {
  Network net;
  Measurements meas;
  Eigen::VectorXd x0;
};

// Connected graph on n nodes: random spanning tree plus extra edges, so
// connectivity holds by construction at any size.
inline std::vector<Edge> random_connected_edges(std::mt19937_64& rng, int n,
                                                double extra_edge_prob = 0.3) {
  std::vector<Edge> edges;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    const int u = pick(rng);
    edges.push_back({std::min(u, v), std::max(u, v)});
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool present = false;
      for (const Edge& e : edges)
        if (e.i == i && e.j == j) {
          present = true;
          break;
        }
      if (!present && coin(rng) < extra_edge_prob) edges.push_back({i, j});
    }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  return edges;
}

inline Network random_network(std::mt19937_64& rng, int n, int p, int max_anchors = 2) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges = random_connected_edges(rng, n);

  std::uniform_int_distribution<int> n_anchors(0, max_anchors);
  const int na = n_anchors(rng);
  std::vector<Eigen::VectorXd> anchors;
  for (int k = 0; k < na; ++k) {
    Eigen::VectorXd a(p);
    for (int c = 0; c < p; ++c) a(c) = unit(rng);
    anchors.push_back(std::move(a));
  }
  std::vector<std::vector<int>> anchor_links(n);
  if (na > 0) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < na; ++k)
        if (unit(rng) < 0.4) anchor_links[i].push_back(k);
  }

  Eigen::VectorXd truth(static_cast<Eigen::Index>(n) * p);
  for (Eigen::Index c = 0; c < truth.size(); ++c) truth(c) = unit(rng);

  return make_network(n, p, std::move(edges), std::move(anchors),
                      std::move(anchor_links), std::move(truth));
}

// Full random problem: network, noisy measurements, random starting point.
inline Instance random_instance(std::uint64_t seed, int n_min, int n_max,
                                double sigma = 0.05) {
  auto rng = make_rng(mix_seed(seed, 0x7465737475ULL));
  std::uniform_int_distribution<int> n_dist(n_min, n_max);
  std::uniform_int_distribution<int> p_dist(2, 3);
  const int n = n_dist(rng);
  const int p = p_dist(rng);

  Instance inst;
  inst.net = random_network(rng, n, p);
  inst.meas = generate_measurements(inst.net, sigma, mix_seed(seed, 77));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  inst.x0.resize(static_cast<Eigen::Index>(n) * p);
  for (Eigen::Index c = 0; c < inst.x0.size(); ++c) inst.x0(c) = unit(rng);
  return inst;
}

// Every labeled connected graph on n nodes, as edge lists in canonical order.
inline std::vector<std::vector<Edge>> connected_edge_sets(int n) {
  std::vector<Edge> all;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.push_back({i, j});
  const int m = static_cast<int>(all.size());
  std::vector<std::vector<Edge>> sets;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<Edge> edges;
    for (int b = 0; b < m; ++b)
      if (mask & (1u << b)) edges.push_back(all[b]);
    if (is_connected(n, edges)) sets.push_back(std::move(edges));
  }
  return sets;
}

}  // namespace testutil
