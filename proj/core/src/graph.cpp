#include "mmnetloc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

#include "mmnetloc/random.hpp"

namespace mmnetloc {

Eigen::VectorXd Network::anchor_stack() const {
  Eigen::VectorXd alpha(static_cast<Eigen::Index>(link_count()) * p);
  for (int l = 0; l < link_count(); ++l)
    alpha.segment(static_cast<Eigen::Index>(l) * p, p) = anchors[incidence.links[l].anchor];
  return alpha;
}

bool is_connected(int n, const std::vector<Edge>& edges) {
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        q.push(v);
      }
    }
  }
  return reached == n;
}

Network make_network(int n, int p, std::vector<Edge> edges,
                     std::vector<Eigen::VectorXd> anchors,
                     std::vector<std::vector<int>> anchor_links,
                     std::optional<Eigen::VectorXd> true_positions) {
  if (n < 1) throw std::invalid_argument("network: n must be >= 1");
  if (p < 2 || p > 3) throw std::invalid_argument("network: p must be 2 or 3");

  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
      throw std::invalid_argument("network: edge endpoint out of range");
    if (e.i == e.j) throw std::invalid_argument("network: self-loop");
    if (e.i > e.j) throw std::invalid_argument("network: edge must be stored with i < j");
    if (!seen.insert({e.i, e.j}).second)
      throw std::invalid_argument("network: duplicate edge");
  }
  if (!is_connected(n, edges)) throw std::invalid_argument("network: graph is not connected");

  for (const auto& a : anchors)
    if (a.size() != p) throw std::invalid_argument("network: anchor dimension mismatch");
  if (static_cast<int>(anchor_links.size()) != n)
    throw std::invalid_argument("network: anchor_links must have one entry per sensor");
  for (auto& links : anchor_links) {
    std::sort(links.begin(), links.end());
    if (std::adjacent_find(links.begin(), links.end()) != links.end())
      throw std::invalid_argument("network: duplicate anchor link");
    for (int k : links)
      if (k < 0 || k >= static_cast<int>(anchors.size()))
        throw std::invalid_argument("network: anchor link index out of range");
  }
  if (true_positions && true_positions->size() != static_cast<Eigen::Index>(n) * p)
    throw std::invalid_argument("network: true_positions must have n*p entries");

  Network net;
  net.n = n;
  net.p = p;
  net.edges = std::move(edges);
  net.anchors = std::move(anchors);
  net.anchor_links = std::move(anchor_links);
  net.true_positions = std::move(true_positions);

  net.incidence.node_edges.resize(n);
  net.degree.assign(n, 0);
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edges[e];
    net.incidence.node_edges[ed.i].push_back({e, ed.j, +1.0});
    net.incidence.node_edges[ed.j].push_back({e, ed.i, -1.0});
    ++net.degree[ed.i];
    ++net.degree[ed.j];
  }
  net.incidence.node_links.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int k : net.anchor_links[i]) {
      net.incidence.node_links[i].push_back(net.incidence.link_count());
      net.incidence.links.push_back({i, k});
    }
  }
  return net;
}

namespace {

std::vector<Eigen::VectorXd> draw_positions(int n, int p, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Eigen::VectorXd> pts(n);
  for (int i = 0; i < n; ++i) {
    pts[i] = Eigen::VectorXd(p);
    for (int c = 0; c < p; ++c) pts[i](c) = unit(rng);
  }
  return pts;
}

std::vector<Edge> edges_within(const std::vector<Eigen::VectorXd>& pts, double radius) {
  std::vector<Edge> edges;
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((pts[i] - pts[j]).norm() <= radius) edges.push_back({i, j});
  return edges;
}

}  // namespace

Network generate_geometric_network(int n, int p, double radius,
                                   const std::vector<Eigen::VectorXd>& anchor_positions,
                                   double anchor_range, std::uint64_t rng_seed,
                                   int max_attempts) {
  if (n < 1) throw std::invalid_argument("generate_geometric_network: n must be >= 1");
  if (radius <= 0.0) throw std::invalid_argument("generate_geometric_network: radius must be > 0");

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    auto pts = draw_positions(n, p, mix_seed(rng_seed, 0x6e65742cULL, attempt));
    auto edges = edges_within(pts, radius);
    if (!is_connected(n, edges)) continue;

    std::vector<std::vector<int>> links(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < static_cast<int>(anchor_positions.size()); ++k)
        if ((pts[i] - anchor_positions[k]).norm() <= anchor_range) links[i].push_back(k);

    Eigen::VectorXd truth(static_cast<Eigen::Index>(n) * p);
    for (int i = 0; i < n; ++i) truth.segment(static_cast<Eigen::Index>(i) * p, p) = pts[i];
    return make_network(n, p, std::move(edges), anchor_positions, std::move(links),
                        std::move(truth));
  }
  throw std::runtime_error(
      "generate_geometric_network: no connected draw in " + std::to_string(max_attempts) +
      " attempts; radius " + std::to_string(radius) + " is too small for n=" +
      std::to_string(n));
}

double calibrate_radius(int n, int p, double target_mean_degree,
                        std::uint64_t rng_seed, double slack) {
  if (n == 1) return std::sqrt(static_cast<double>(p));  // no pairs; any radius works
  auto pts = draw_positions(n, p, mix_seed(rng_seed, 0x6e65742cULL, 0));
  auto deg_at = [&](double r) {
    return 2.0 * static_cast<double>(edges_within(pts, r).size()) / n;
  };
  double lo = 0.0, hi = std::sqrt(static_cast<double>(p));
  double best = hi, best_err = std::abs(deg_at(hi) - target_mean_degree);
  for (int it = 0; it < 60 && best_err > slack; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double deg = deg_at(mid);
    const double err = std::abs(deg - target_mean_degree);
    if (err < best_err) {
      best = mid;
      best_err = err;
    }
    (deg < target_mean_degree ? lo : hi) = mid;
  }
  return best;
}

Measurements generate_measurements(const Network& net, double sigma,
                                   std::uint64_t rng_seed) {
  if (!net.true_positions)
    throw std::invalid_argument("generate_measurements: network has no true positions");
  const Eigen::VectorXd& x = *net.true_positions;
  auto rng = make_rng(mix_seed(rng_seed, 0x6d656173ULL));
  std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
  auto draw = [&] { return sigma > 0.0 ? noise(rng) : 0.0; };

  Measurements m;
  m.sigma = sigma;
  m.d.resize(net.edge_count());
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edges[e];
    const double dist = (x.segment(static_cast<Eigen::Index>(ed.i) * net.p, net.p) -
                         x.segment(static_cast<Eigen::Index>(ed.j) * net.p, net.p))
                            .norm();
    m.d(e) = std::abs(dist + draw());
  }
  m.r.resize(net.link_count());
  for (int l = 0; l < net.link_count(); ++l) {
    const AnchorLink& lk = net.incidence.links[l];
    const double dist = (x.segment(static_cast<Eigen::Index>(lk.sensor) * net.p, net.p) -
                         net.anchors[lk.anchor])
                            .norm();
    m.r(l) = std::abs(dist + draw());
  }
  return m;
}

DegreeStats degree_stats(const Network& net) {
  DegreeStats s;
  for (int i = 0; i < net.n; ++i) {
    s.delta_max = std::max(s.delta_max, net.degree[i]);
    s.max_anchor_count = std::max(s.max_anchor_count,
                                  static_cast<int>(net.anchor_links[i].size()));
  }
  return s;
}

double mean_degree(const Network& net) {
  return net.n > 0 ? 2.0 * net.edge_count() / net.n : 0.0;
}

std::vector<Eigen::VectorXd> unit_box_corners(int p) {
  std::vector<Eigen::VectorXd> corners;
  for (int k = 0; k < (1 << p); ++k) {
    Eigen::VectorXd a(p);
    for (int c = 0; c < p; ++c) a(c) = (k >> c) & 1;
    corners.push_back(std::move(a));
  }
  return corners;
}

}  // namespace mmnetloc
