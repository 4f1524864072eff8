#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "mmnetloc/projections.hpp"
#include "mmnetloc/random.hpp"

using namespace mmnetloc;

TEST_CASE("sphere projection lands on the sphere and keeps direction") {
  auto rng = make_rng(mix_seed(42, 1));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> rad(0.01, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + (trial % 2);
    Eigen::VectorXd v(dim);
    for (int c = 0; c < dim; ++c) v(c) = unit(rng);
    if (v.norm() < 1e-9) continue;
    const double r = rad(rng);
    const Eigen::VectorXd pv = project_sphere(v, r);
    CHECK(pv.norm() == doctest::Approx(r).epsilon(1e-12));
    // collinear and on the same side
    const double cosang = pv.dot(v) / (pv.norm() * v.norm());
    CHECK(cosang == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("projection is the nearest point on the sphere") {
  auto rng = make_rng(mix_seed(42, 2));
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXd v(3), q(3);
    for (int c = 0; c < 3; ++c) {
      v(c) = unit(rng);
      q(c) = unit(rng);
    }
    if (v.norm() < 1e-9 || q.norm() < 1e-12) continue;
    const double r = 1.3;
    const Eigen::VectorXd pv = project_sphere(v, r);
    const Eigen::VectorXd on_sphere = (r / q.norm()) * q;
    CHECK((v - pv).norm() <= (v - on_sphere).norm() + 1e-12);
  }
}

TEST_CASE("zero vector projects to the tie-break direction") {
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
  const Eigen::VectorXd pv = project_sphere(z, 2.5);
  CHECK(pv(0) == 2.5);
  CHECK(pv(1) == 0.0);
  CHECK(pv(2) == 0.0);

  Eigen::VectorXd tie(2);
  tie << 0.0, 1.0;
  const Eigen::VectorXd pv2 = project_sphere(Eigen::VectorXd::Zero(2), 0.7, tie);
  CHECK(pv2(0) == 0.0);
  CHECK(pv2(1) == 0.7);
}

TEST_CASE("radius zero collapses everything to the origin") {
  Eigen::VectorXd v(2);
  v << 3.0, -4.0;
  CHECK(project_sphere(v, 0.0).norm() == 0.0);
  CHECK(project_sphere(Eigen::VectorXd::Zero(2), 0.0).norm() == 0.0);
}

TEST_CASE("points already on the sphere stay put") {
  auto rng = make_rng(mix_seed(42, 3));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd v(2);
    v << unit(rng), unit(rng);
    if (v.norm() < 1e-6) continue;
    const double r = 2.0;
    const Eigen::VectorXd on = (r / v.norm()) * v;
    const Eigen::VectorXd back = project_sphere(on, r);
    CHECK((back - on).norm() <= 1e-14 * r);
  }
}

TEST_CASE("default tie-break is the first basis vector") {
  const Eigen::VectorXd t = default_tie_break(3);
  CHECK(t(0) == 1.0);
  CHECK(t(1) == 0.0);
  CHECK(t(2) == 0.0);
  CHECK(t.size() == 3);
}
