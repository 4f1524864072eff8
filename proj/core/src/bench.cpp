#include "mmnetloc/bench.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mmnetloc/cost.hpp"
#include "mmnetloc/network_io.hpp"
#include "mmnetloc/random.hpp"

namespace mmnetloc {

namespace {

// Short label for filenames and the sigma column; the values are study
// parameters like 0.05, not measured quantities, so shortest-form is right.
std::string sigma_label(double sigma) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", sigma);
  return buf;
}

int thread_cap() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const char* env = std::getenv("MMNETLOC_THREADS");
  if (!env) return static_cast<int>(hw);
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1)
    throw std::invalid_argument("MMNETLOC_THREADS must be a positive integer");
  return static_cast<int>(v);
}

struct TrialOutcome {
  RunTrace mm_trace, bb_trace;
  Eigen::VectorXd mm_x, bb_x;
};

// Runs fn(trial) for every trial index on up to thread_cap() threads. Each
// trial is self-contained (own seeds, own output slot), so scheduling cannot
// affect results.
template <class Fn>
void for_each_trial(int trials, Fn&& fn) {
  const int workers = std::min(thread_cap(), trials);
  if (workers <= 1) {
    for (int mc = 0; mc < trials; ++mc) fn(mc);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int mc = next.fetch_add(1); mc < trials; mc = next.fetch_add(1)) fn(mc);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

double padded_cost(const RunTrace& tr, int t) {
  const TracePoint& pt = t < static_cast<int>(tr.size()) ? tr[t] : tr.back();
  return pt.cost_per_sensor;
}

double padded_mpe(const RunTrace& tr, int t) {
  const TracePoint& pt = t < static_cast<int>(tr.size()) ? tr[t] : tr.back();
  return pt.mpe.value();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

}  // namespace

Network build_network(const NetworkConfig& cfg, std::uint64_t seed) {
  const double radius = cfg.radius
                            ? *cfg.radius
                            : calibrate_radius(cfg.n, cfg.p, cfg.target_degree, seed);
  std::vector<Eigen::VectorXd> anchors;
  if (cfg.corner_anchors) anchors = unit_box_corners(cfg.p);
  const double anchor_range = cfg.anchor_range.value_or(radius);
  return generate_geometric_network(cfg.n, cfg.p, radius, anchors, anchor_range, seed,
                                    cfg.max_attempts);
}

double mpe(const std::vector<Eigen::VectorXd>& estimates, const Eigen::VectorXd& truth,
           int p) {
  if (estimates.empty()) throw std::invalid_argument("mpe: no estimates");
  if (p < 1 || truth.size() % p != 0)
    throw std::invalid_argument("mpe: truth length must be a multiple of p");
  const int n = static_cast<int>(truth.size()) / p;
  double sum = 0.0;
  for (const Eigen::VectorXd& est : estimates) {
    if (est.size() != truth.size())
      throw std::invalid_argument("mpe: estimate and truth sizes differ");
    for (int i = 0; i < n; ++i)
      sum += (est.segment(static_cast<Eigen::Index>(i) * p, p) -
              truth.segment(static_cast<Eigen::Index>(i) * p, p))
                 .norm();
  }
  return sum / (static_cast<double>(n) * estimates.size());
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");
  for (double s : spec.sigmas)
    if (!(s >= 0.0)) throw std::invalid_argument("run_experiment: sigma must be >= 0");
  if (spec.sigmas.empty())
    throw std::invalid_argument("run_experiment: at least one sigma required");

  ExperimentResult result;
  result.net = build_network(spec.network, mix_seed(spec.master_seed, 1));
  const Network& net = result.net;
  const Eigen::VectorXd& truth = *net.true_positions;
  const int n = net.n;
  const int p = net.p;
  const std::int64_t mm_per_iter = static_cast<std::int64_t>(p) * n;
  const std::int64_t bb_per_iter = static_cast<std::int64_t>(n) * (2 * spec.bb.T + p);

  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + spec.out_dir + ": " +
                             ec.message());

  for (std::size_t si = 0; si < spec.sigmas.size(); ++si) {
    const double sigma = spec.sigmas[si];
    if (spec.verbose)
      std::cerr << "sigma " << sigma_label(sigma) << ": " << spec.trials
                << " trials...\n";

    std::vector<TrialOutcome> outcomes(spec.trials);
    for_each_trial(spec.trials, [&](int mc) {
      const Measurements meas = generate_measurements(
          net, sigma, mix_seed(spec.master_seed, 1000 + si, mc));
      const Eigen::VectorXd x0 = make_initial_positions(
          net, spec.init, mix_seed(spec.master_seed, 2000 + si, mc));
      SolveResult sr = solve(net, meas, x0, spec.mm);
      BBResult br = bb_solve(net, meas, x0, spec.bb);
      outcomes[mc] = {std::move(sr.trace), std::move(br.trace), std::move(sr.x_hat),
                      std::move(br.x_hat)};
    });

    SigmaResult sres;
    sres.sigma = sigma;
    for (int method = 0; method < 2; ++method) {
      const bool is_mm = method == 0;
      const std::int64_t per_iter = is_mm ? mm_per_iter : bb_per_iter;
      std::vector<Eigen::VectorXd> finals;
      finals.reserve(spec.trials);
      double final_cost = 0.0;
      int max_len = 0;
      for (const TrialOutcome& o : outcomes) {
        const RunTrace& tr = is_mm ? o.mm_trace : o.bb_trace;
        finals.push_back(is_mm ? o.mm_x : o.bb_x);
        final_cost += tr.back().cost_per_sensor;
        max_len = std::max(max_len, static_cast<int>(tr.size()));
      }
      SummaryRow row;
      row.sigma = sigma;
      row.method = is_mm ? "mm" : "bb";
      row.mpe = mpe(finals, truth, p);
      row.final_cost_per_sensor = final_cost / spec.trials;
      row.iters = max_len - 1;
      row.comm_scalars = static_cast<std::int64_t>(row.iters) * per_iter;

      std::vector<CurvePoint>& curve = is_mm ? sres.mm_curve : sres.bb_curve;
      curve.resize(max_len);
      for (int t = 0; t < max_len; ++t) {
        double c = 0.0, m = 0.0;
        for (const TrialOutcome& o : outcomes) {
          const RunTrace& tr = is_mm ? o.mm_trace : o.bb_trace;
          c += padded_cost(tr, t);
          m += padded_mpe(tr, t);
        }
        curve[t] = {t, t * per_iter, c / spec.trials, m / spec.trials};
      }
      (is_mm ? sres.mm_summary : sres.bb_summary) = std::move(row);

      const std::string path = spec.out_dir + "/curve_" + (is_mm ? "mm" : "bb") + "_" +
                               sigma_label(sigma) + ".csv";
      std::ofstream os = open_out(path);
      os << "iter,comm_scalars,mean_cost_per_sensor,mean_mpe\n";
      for (const CurvePoint& pt : curve)
        os << pt.iter << ',' << pt.comm_scalars << ','
           << format_double(pt.mean_cost_per_sensor) << ',' << format_double(pt.mean_mpe)
           << '\n';
      result.files.push_back(path);
    }
    result.per_sigma.push_back(std::move(sres));
  }

  const std::string summary_path = spec.out_dir + "/summary.csv";
  std::ofstream os = open_out(summary_path);
  os << "sigma,method,mpe,final_cost_per_sensor,iters,comm_scalars\n";
  for (const SigmaResult& sres : result.per_sigma)
    for (const SummaryRow* row : {&sres.mm_summary, &sres.bb_summary})
      os << sigma_label(row->sigma) << ',' << row->method << ',' << format_double(row->mpe)
         << ',' << format_double(row->final_cost_per_sensor) << ',' << row->iters << ','
         << row->comm_scalars << '\n';
  result.files.push_back(summary_path);
  return result;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError(path + ": cannot open");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }

  ExperimentSpec spec;
  try {
    if (j.contains("network")) {
      const auto& jn = j.at("network");
      spec.network.n = jn.value("n", spec.network.n);
      spec.network.p = jn.value("p", spec.network.p);
      if (jn.contains("radius") && !jn.at("radius").is_null())
        spec.network.radius = jn.at("radius").get<double>();
      spec.network.target_degree = jn.value("target_degree", spec.network.target_degree);
      if (jn.contains("anchor_range") && !jn.at("anchor_range").is_null())
        spec.network.anchor_range = jn.at("anchor_range").get<double>();
      spec.network.corner_anchors = jn.value("corner_anchors", spec.network.corner_anchors);
      spec.network.max_attempts = jn.value("max_attempts", spec.network.max_attempts);
    }
    if (j.contains("sigmas")) spec.sigmas = j.at("sigmas").get<std::vector<double>>();
    spec.trials = j.value("trials", spec.trials);
    if (j.contains("init")) spec.init = parse_init_spec(j.at("init").get<std::string>());
    if (j.contains("mm")) {
      const auto& jm = j.at("mm");
      spec.mm.max_iters = jm.value("max_iters", spec.mm.max_iters);
      spec.mm.tol_rel_cost = jm.value("tol_rel_cost", spec.mm.tol_rel_cost);
      spec.mm.stop_window = jm.value("stop_window", spec.mm.stop_window);
      if (jm.contains("lipschitz_override") && !jm.at("lipschitz_override").is_null())
        spec.mm.lipschitz_override = jm.at("lipschitz_override").get<double>();
      spec.mm.allow_unsafe_lipschitz =
          jm.value("allow_unsafe_lipschitz", spec.mm.allow_unsafe_lipschitz);
    }
    if (j.contains("bb")) {
      const auto& jb = j.at("bb");
      spec.bb.T = jb.value("T", spec.bb.T);
      spec.bb.max_iters = jb.value("max_iters", spec.bb.max_iters);
      if (jb.contains("fallback_step") && !jb.at("fallback_step").is_null())
        spec.bb.fallback_step = jb.at("fallback_step").get<double>();
      spec.bb.epsilon_guard = jb.value("epsilon_guard", spec.bb.epsilon_guard);
      spec.bb.use_bb2 = jb.value("use_bb2", spec.bb.use_bb2);
    }
    spec.master_seed = j.value("seed", spec.master_seed);
    spec.out_dir = j.value("out_dir", spec.out_dir);
    spec.verbose = j.value("verbose", spec.verbose);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return spec;
}

}  // namespace mmnetloc
