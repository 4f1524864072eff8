#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "mmnetloc/graph.hpp"

namespace mmnetloc {

Eigen::VectorXd init_truth(const Network& net);
Eigen::VectorXd init_perturbed_truth(const Network& net, double stddev, std::uint64_t seed);
Eigen::VectorXd init_random_uniform(const Network& net, std::uint64_t seed);

// Initializer selection as it appears in CLI flags and experiment specs:
// "truth" | "perturbed-truth:<std>" | "random" | "file:<path>".
struct InitSpec {
  enum class Kind { Truth, PerturbedTruth, RandomUniform, FromFile };
  Kind kind = Kind::PerturbedTruth;
  double stddev = 0.1;
  std::string path;

  std::string to_string() const;
};

InitSpec parse_init_spec(const std::string& text);

Eigen::VectorXd make_initial_positions(const Network& net, const InitSpec& spec,
                                       std::uint64_t seed);

}  // namespace mmnetloc
