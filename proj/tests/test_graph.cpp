#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>

#include "mmnetloc/graph.hpp"
#include "mmnetloc/random.hpp"
#include "test_util.hpp"

using namespace mmnetloc;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

// Path 0-1-2 with one anchor linked to nodes 0 and 2.
Network tiny_network() {
  Eigen::VectorXd truth(6);
  truth << 0.0, 0.0, 0.5, 0.0, 1.0, 0.0;
  return make_network(3, 2, {{0, 1}, {1, 2}}, {vec2(0.5, 1.0)}, {{0}, {}, {0}}, truth);
}

}  // namespace

TEST_CASE("incidence bookkeeping: signs, degrees, link flattening") {
  const Network net = tiny_network();
  CHECK(net.edge_count() == 2);
  CHECK(net.link_count() == 2);
  CHECK(net.degree == std::vector<int>{1, 2, 1});

  // node 0 is the smaller endpoint of edge 0, so its sign is +1
  REQUIRE(net.incidence.node_edges[0].size() == 1);
  CHECK(net.incidence.node_edges[0][0].edge == 0);
  CHECK(net.incidence.node_edges[0][0].neighbor == 1);
  CHECK(net.incidence.node_edges[0][0].sign == 1.0);

  REQUIRE(net.incidence.node_edges[1].size() == 2);
  CHECK(net.incidence.node_edges[1][0].sign == -1.0);  // head of edge (0,1)
  CHECK(net.incidence.node_edges[1][1].sign == 1.0);   // tail of edge (1,2)

  // links flatten sensor-major: (0, anchor 0) then (2, anchor 0)
  REQUIRE(net.incidence.links.size() == 2);
  CHECK(net.incidence.links[0].sensor == 0);
  CHECK(net.incidence.links[1].sensor == 2);
  CHECK(net.incidence.node_links[0] == std::vector<int>{0});
  CHECK(net.incidence.node_links[1].empty());
  CHECK(net.incidence.node_links[2] == std::vector<int>{1});

  Eigen::VectorXd alpha = net.anchor_stack();
  REQUIRE(alpha.size() == 4);
  CHECK(alpha(0) == 0.5);
  CHECK(alpha(1) == 1.0);
  CHECK(alpha(2) == 0.5);
  CHECK(alpha(3) == 1.0);
}

TEST_CASE("network validation rejects malformed inputs") {
  const Eigen::VectorXd truth = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(make_network(0, 2, {}, {}, {}, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(make_network(2, 1, {{0, 1}}, {}, {{}, {}}, std::nullopt),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_network(2, 4, {{0, 1}}, {}, {{}, {}}, std::nullopt),
                  std::invalid_argument);
  // endpoint out of range
  CHECK_THROWS_AS(make_network(2, 2, {{0, 2}}, {}, {{}, {}}, std::nullopt),
                  std::invalid_argument);
  // self-loop
  CHECK_THROWS_AS(make_network(2, 2, {{1, 1}}, {}, {{}, {}}, std::nullopt),
                  std::invalid_argument);
  // stored with i > j
  CHECK_THROWS_AS(make_network(2, 2, {{1, 0}}, {}, {{}, {}}, std::nullopt),
                  std::invalid_argument);
  // duplicate edge
  CHECK_THROWS_AS(make_network(2, 2, {{0, 1}, {0, 1}}, {}, {{}, {}}, std::nullopt),
                  std::invalid_argument);
  // disconnected
  CHECK_THROWS_AS(make_network(3, 2, {{0, 1}}, {}, {{}, {}, {}}, std::nullopt),
                  std::invalid_argument);
  // anchor dimension mismatch
  CHECK_THROWS_AS(make_network(2, 3, {{0, 1}}, {vec2(0, 0)}, {{0}, {}}, std::nullopt),
                  std::invalid_argument);
  // anchor_links row count
  CHECK_THROWS_AS(make_network(2, 2, {{0, 1}}, {}, {{}}, std::nullopt),
                  std::invalid_argument);
  // duplicate link
  CHECK_THROWS_AS(
      make_network(2, 2, {{0, 1}}, {vec2(0, 0)}, {{0, 0}, {}}, std::nullopt),
      std::invalid_argument);
  // link to a nonexistent anchor
  CHECK_THROWS_AS(make_network(2, 2, {{0, 1}}, {vec2(0, 0)}, {{1}, {}}, std::nullopt),
                  std::invalid_argument);
  // truth length mismatch
  CHECK_THROWS_AS(make_network(2, 2, {{0, 1}}, {}, {{}, {}}, Eigen::VectorXd::Zero(3)),
                  std::invalid_argument);
  // the same data shaped correctly is fine
  CHECK_NOTHROW(make_network(2, 2, {{0, 1}}, {}, {{}, {}}, truth));
}

TEST_CASE("connectivity check") {
  CHECK(is_connected(1, {}));
  CHECK(is_connected(2, {{0, 1}}));
  CHECK_FALSE(is_connected(2, {}));
  CHECK(is_connected(4, {{0, 1}, {1, 2}, {2, 3}}));
  CHECK_FALSE(is_connected(4, {{0, 1}, {2, 3}}));
}

TEST_CASE("connected graph enumeration matches known counts") {
  CHECK(testutil::connected_edge_sets(2).size() == 1);
  CHECK(testutil::connected_edge_sets(3).size() == 4);
  CHECK(testutil::connected_edge_sets(4).size() == 38);
  CHECK(testutil::connected_edge_sets(5).size() == 728);
}

TEST_CASE("geometric networks honor the radius and stay connected") {
  const auto anchors = unit_box_corners(2);
  const Network net = generate_geometric_network(30, 2, 0.35, anchors, 0.35, 99);
  REQUIRE(net.true_positions.has_value());
  const Eigen::VectorXd& x = *net.true_positions;

  CHECK(is_connected(net.n, net.edges));
  for (const Edge& e : net.edges) {
    const double dist = (x.segment(e.i * 2, 2) - x.segment(e.j * 2, 2)).norm();
    CHECK(dist <= 0.35);
  }
  // no qualifying pair is missing
  for (int i = 0; i < net.n; ++i)
    for (int j = i + 1; j < net.n; ++j) {
      const double dist = (x.segment(i * 2, 2) - x.segment(j * 2, 2)).norm();
      if (dist <= 0.35) {
        bool found = false;
        for (const Edge& e : net.edges)
          if (e.i == i && e.j == j) found = true;
        CHECK(found);
      }
    }
  // anchor links exactly the in-range pairs
  for (int i = 0; i < net.n; ++i) {
    for (int k = 0; k < net.anchor_count(); ++k) {
      const double dist = (x.segment(i * 2, 2) - net.anchors[k]).norm();
      const bool linked = std::find(net.anchor_links[i].begin(), net.anchor_links[i].end(),
                                    k) != net.anchor_links[i].end();
      CHECK(linked == (dist <= 0.35));
    }
  }
}

TEST_CASE("geometric generation is deterministic in the seed") {
  const auto anchors = unit_box_corners(2);
  const Network a = generate_geometric_network(20, 2, 0.4, anchors, 0.4, 7);
  const Network b = generate_geometric_network(20, 2, 0.4, anchors, 0.4, 7);
  CHECK(a.edges == b.edges);
  CHECK((*a.true_positions - *b.true_positions).norm() == 0.0);
  CHECK(a.anchor_links == b.anchor_links);
}

TEST_CASE("impossible radius reports failure after bounded attempts") {
  CHECK_THROWS_AS(generate_geometric_network(40, 2, 0.01, {}, 0.01, 3, 5),
                  std::runtime_error);
}

TEST_CASE("radius calibration hits the target mean degree") {
  const double r = calibrate_radius(50, 2, 6.0, 2024);
  const Network net = generate_geometric_network(50, 2, r, unit_box_corners(2), r, 2024);
  CHECK(mean_degree(net) == doctest::Approx(6.0).epsilon(0.25));
}

TEST_CASE("noiseless measurements equal true distances") {
  const Network net = tiny_network();
  const Measurements meas = generate_measurements(net, 0.0, 5);
  const Eigen::VectorXd& x = *net.true_positions;
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edges[e];
    const double dist = (x.segment(ed.i * 2, 2) - x.segment(ed.j * 2, 2)).norm();
    CHECK(meas.d(e) == doctest::Approx(dist).epsilon(1e-15));
  }
  for (int l = 0; l < net.link_count(); ++l) {
    const AnchorLink& lk = net.incidence.links[l];
    const double dist = (x.segment(lk.sensor * 2, 2) - net.anchors[lk.anchor]).norm();
    CHECK(meas.r(l) == doctest::Approx(dist).epsilon(1e-15));
  }
  CHECK(meas.sigma == 0.0);
}

TEST_CASE("noisy measurements: deterministic, nonnegative, near truth") {
  const Network net = tiny_network();
  const Measurements a = generate_measurements(net, 0.05, 11);
  const Measurements b = generate_measurements(net, 0.05, 11);
  const Measurements c = generate_measurements(net, 0.05, 12);
  CHECK((a.d - b.d).norm() == 0.0);
  CHECK((a.r - b.r).norm() == 0.0);
  CHECK((a.d - c.d).norm() > 0.0);
  CHECK((a.d.array() >= 0.0).all());
  CHECK((a.r.array() >= 0.0).all());
  const Measurements clean = generate_measurements(net, 0.0, 11);
  CHECK((a.d - clean.d).cwiseAbs().maxCoeff() < 0.05 * 6.0);  // within 6 sigma

  Network no_truth = make_network(2, 2, {{0, 1}}, {}, {{}, {}}, std::nullopt);
  CHECK_THROWS_AS(generate_measurements(no_truth, 0.0, 1), std::invalid_argument);
}

TEST_CASE("degree statistics and mean degree") {
  const Network net = tiny_network();
  const DegreeStats s = degree_stats(net);
  CHECK(s.delta_max == 2);
  CHECK(s.max_anchor_count == 1);
  CHECK(mean_degree(net) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("unit box corners enumerate bit patterns") {
  const auto c2 = unit_box_corners(2);
  REQUIRE(c2.size() == 4);
  CHECK((c2[0] - vec2(0, 0)).norm() == 0.0);
  CHECK((c2[1] - vec2(1, 0)).norm() == 0.0);
  CHECK((c2[2] - vec2(0, 1)).norm() == 0.0);
  CHECK((c2[3] - vec2(1, 1)).norm() == 0.0);
  CHECK(unit_box_corners(3).size() == 8);
}

TEST_CASE("random test networks satisfy the library invariants") {
  auto rng = make_rng(mix_seed(3, 3));
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = testutil::random_network(rng, 2 + trial % 9, 2 + trial % 2);
    CHECK(is_connected(net.n, net.edges));
    int total_links = 0;
    for (const auto& row : net.anchor_links) total_links += static_cast<int>(row.size());
    CHECK(net.link_count() == total_links);
  }
}
