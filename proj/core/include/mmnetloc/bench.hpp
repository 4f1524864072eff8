#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmnetloc/baseline_bb.hpp"
#include "mmnetloc/graph.hpp"
#include "mmnetloc/init.hpp"
#include "mmnetloc/mm.hpp"

namespace mmnetloc {

// Random geometric network recipe. When radius is unset it is calibrated so
// the realized mean degree lands near target_degree.
struct NetworkConfig {
  int n = 50;
  int p = 2;
  std::optional<double> radius{};
  double target_degree = 6.0;
  std::optional<double> anchor_range{};  // unset: equal to the radius
  bool corner_anchors = true;            // anchors at the 2^p box corners
  int max_attempts = 1000;
};

Network build_network(const NetworkConfig& cfg, std::uint64_t seed);

// One Monte-Carlo study: a single network held fixed across trials, fresh
// noise and initializer draws per trial, both solvers on every trial.
struct ExperimentSpec {
  NetworkConfig network{};
  std::vector<double> sigmas{0.01, 0.05, 0.1};
  int trials = 100;
  InitSpec init{};  // defaults to perturbed truth, std 0.1
  SolverConfig mm{};
  BBConfig bb{};
  std::uint64_t master_seed = 1;
  std::string out_dir = "out";
  bool verbose = false;
};

// Mean positioning error per sensor over a batch of estimates:
// (1 / (n * trials)) * sum over trials and sensors of the position error.
double mpe(const std::vector<Eigen::VectorXd>& estimates, const Eigen::VectorXd& truth,
           int p);

struct SummaryRow {
  double sigma = 0.0;
  std::string method;
  double mpe = 0.0;
  double final_cost_per_sensor = 0.0;  // mean over trials
  int iters = 0;                       // slowest trial
  std::int64_t comm_scalars = 0;       // for that slowest trial
};

struct CurvePoint {
  int iter = 0;
  std::int64_t comm_scalars = 0;
  double mean_cost_per_sensor = 0.0;
  double mean_mpe = 0.0;
};

struct SigmaResult {
  double sigma = 0.0;
  SummaryRow mm_summary, bb_summary;
  std::vector<CurvePoint> mm_curve, bb_curve;
};

struct ExperimentResult {
  Network net;
  std::vector<SigmaResult> per_sigma;
  std::vector<std::string> files;  // everything written, absolute or as given
};

/// Runs the study and writes summary.csv plus one curve_<method>_<sigma>.csv
/// per method and noise level into spec.out_dir. Deterministic: the same spec
/// and seed produce byte-identical files regardless of thread count (trials
/// run in parallel, capped by MMNETLOC_THREADS, merged in trial order).
/// Curves average across trials at fixed iteration index; trials that stopped
/// early hold their final value.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Reads an ExperimentSpec from a JSON file; missing fields keep defaults.
ExperimentSpec load_experiment_spec(const std::string& path);

}  // namespace mmnetloc
