#include "mmnetloc/init.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mmnetloc/network_io.hpp"
#include "mmnetloc/random.hpp"

namespace mmnetloc {

Eigen::VectorXd init_truth(const Network& net) {
  if (!net.true_positions)
    throw std::invalid_argument("init_truth: network has no true positions");
  return *net.true_positions;
}

Eigen::VectorXd init_perturbed_truth(const Network& net, double stddev,
                                     std::uint64_t seed) {
  Eigen::VectorXd x = init_truth(net);
  if (stddev > 0.0) {
    auto rng = make_rng(mix_seed(seed, 0x696e6974ULL));
    std::normal_distribution<double> noise(0.0, stddev);
    for (Eigen::Index c = 0; c < x.size(); ++c) x(c) += noise(rng);
  }
  return x;
}

Eigen::VectorXd init_random_uniform(const Network& net, std::uint64_t seed) {
  auto rng = make_rng(mix_seed(seed, 0x696e6974ULL));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd x(static_cast<Eigen::Index>(net.n) * net.p);
  for (Eigen::Index c = 0; c < x.size(); ++c) x(c) = unit(rng);
  return x;
}

std::string InitSpec::to_string() const {
  switch (kind) {
    case Kind::Truth:
      return "truth";
    case Kind::PerturbedTruth: {
      std::ostringstream os;
      os << "perturbed-truth:" << stddev;
      return os.str();
    }
    case Kind::RandomUniform:
      return "random";
    case Kind::FromFile:
      return "file:" + path;
  }
  return "?";
}

InitSpec parse_init_spec(const std::string& text) {
  InitSpec spec;
  if (text == "truth") {
    spec.kind = InitSpec::Kind::Truth;
  } else if (text == "random") {
    spec.kind = InitSpec::Kind::RandomUniform;
  } else if (text.rfind("perturbed-truth:", 0) == 0) {
    spec.kind = InitSpec::Kind::PerturbedTruth;
    const std::string num = text.substr(16);
    std::size_t used = 0;
    spec.stddev = std::stod(num, &used);
    if (used != num.size() || spec.stddev < 0.0)
      throw std::invalid_argument("init spec: bad std in '" + text + "'");
  } else if (text.rfind("file:", 0) == 0) {
    spec.kind = InitSpec::Kind::FromFile;
    spec.path = text.substr(5);
    if (spec.path.empty()) throw std::invalid_argument("init spec: empty file path");
  } else {
    throw std::invalid_argument(
        "init spec: expected truth | perturbed-truth:<std> | random | file:<path>, got '" +
        text + "'");
  }
  return spec;
}

Eigen::VectorXd make_initial_positions(const Network& net, const InitSpec& spec,
                                       std::uint64_t seed) {
  switch (spec.kind) {
    case InitSpec::Kind::Truth:
      return init_truth(net);
    case InitSpec::Kind::PerturbedTruth:
      return init_perturbed_truth(net, spec.stddev, seed);
    case InitSpec::Kind::RandomUniform:
      return init_random_uniform(net, seed);
    case InitSpec::Kind::FromFile: {
      // Positions of a saved document, used as a starting point.
      NetworkDocument doc = load_network(spec.path);
      if (!doc.net.true_positions)
        throw std::invalid_argument("init file has no positions: " + spec.path);
      if (doc.net.n != net.n || doc.net.p != net.p)
        throw std::invalid_argument("init file shape mismatch: " + spec.path);
      return *doc.net.true_positions;
    }
  }
  throw std::logic_error("unreachable init kind");
}

}  // namespace mmnetloc
