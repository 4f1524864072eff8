// Command-line front end: generate network instances, run one solve, or run
// the full Monte-Carlo study. Exit codes: 0 success, 2 usage or config
// error, 1 runtime failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmnetloc/baseline_bb.hpp"
#include "mmnetloc/bench.hpp"
#include "mmnetloc/cost.hpp"
#include "mmnetloc/graph.hpp"
#include "mmnetloc/init.hpp"
#include "mmnetloc/mm.hpp"
#include "mmnetloc/network_io.hpp"
#include "mmnetloc/node_sim.hpp"
#include "mmnetloc/trace.hpp"

namespace {

using namespace mmnetloc;

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

std::vector<Eigen::VectorXd> load_anchor_file(const std::string& path, int p) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError(path + ": cannot open");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!j.is_array()) throw ParseError(path + ": expected a JSON array of positions");
  std::vector<Eigen::VectorXd> anchors;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != p)
      throw ParseError(path + ": each anchor needs exactly " + std::to_string(p) +
                       " coordinates");
    Eigen::VectorXd a(p);
    for (int c = 0; c < p; ++c) a(c) = row.at(c).get<double>();
    anchors.push_back(std::move(a));
  }
  return anchors;
}

struct GenerateArgs {
  int n = 0;
  int p = 2;
  std::optional<double> radius{};
  double target_degree = 6.0;
  std::string anchors = "corners";
  std::optional<double> anchor_range{};
  double sigma = 0.0;
  std::uint64_t seed = 1;
  int max_attempts = 1000;
  std::string out = "network.json";
};

int cmd_generate(const GenerateArgs& a) {
  const double radius =
      a.radius ? *a.radius : calibrate_radius(a.n, a.p, a.target_degree, a.seed);
  std::vector<Eigen::VectorXd> anchors;
  if (a.anchors == "corners") {
    anchors = unit_box_corners(a.p);
  } else if (a.anchors == "none") {
    // leave empty
  } else if (a.anchors.rfind("file:", 0) == 0) {
    anchors = load_anchor_file(a.anchors.substr(5), a.p);
  } else {
    throw std::invalid_argument("--anchors expects corners | none | file:<path>");
  }

  NetworkDocument doc;
  doc.net = generate_geometric_network(a.n, a.p, radius, anchors,
                                       a.anchor_range.value_or(radius), a.seed,
                                       a.max_attempts);
  doc.meas = generate_measurements(doc.net, a.sigma, a.seed);
  doc.seed = a.seed;
  save_network(a.out, doc);

  std::cout << "wrote " << a.out << ": n=" << doc.net.n << " p=" << doc.net.p
            << " edges=" << doc.net.edge_count() << " anchor_links="
            << doc.net.link_count() << " mean_degree=" << mean_degree(doc.net)
            << " radius=" << radius << "\n";
  return 0;
}

struct SolveArgs {
  std::string network;
  std::string method = "mm";
  std::string init = "perturbed-truth:0.1";
  std::optional<double> sigma{};
  std::uint64_t seed = 1;
  std::string out = ".";
  SolverConfig mm{};
  BBConfig bb{};
};

void write_estimate(const std::string& path, const std::string& method,
                    const Network& net, const Eigen::VectorXd& x_hat,
                    const TracePoint& last) {
  std::ofstream os = open_out(path);
  os << "{\n";
  os << "  \"method\": \"" << method << "\",\n";
  os << "  \"n\": " << net.n << ",\n";
  os << "  \"p\": " << net.p << ",\n";
  os << "  \"iters\": " << last.iter << ",\n";
  os << "  \"comm_scalars\": " << last.comm_scalars << ",\n";
  os << "  \"final_cost_per_sensor\": " << format_double(last.cost_per_sensor) << ",\n";
  os << "  \"mpe\": " << (last.mpe ? format_double(*last.mpe) : "null") << ",\n";
  os << "  \"positions\": [\n";
  for (int i = 0; i < net.n; ++i) {
    os << "    [";
    for (int c = 0; c < net.p; ++c) {
      if (c) os << ", ";
      os << format_double(x_hat(static_cast<Eigen::Index>(i) * net.p + c));
    }
    os << (i + 1 < net.n ? "],\n" : "]\n");
  }
  os << "  ]\n}\n";
}

int cmd_solve(const SolveArgs& a) {
  NetworkDocument doc = load_network(a.network);
  const Network& net = doc.net;
  Measurements meas = doc.meas;
  if (a.sigma) meas = generate_measurements(net, *a.sigma, a.seed);

  const Eigen::VectorXd x0 =
      make_initial_positions(net, parse_init_spec(a.init), a.seed);

  std::error_code ec;
  std::filesystem::create_directories(a.out, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + a.out + ": " +
                             ec.message());

  Eigen::VectorXd x_hat;
  RunTrace trace;
  if (a.method == "mm") {
    SolveResult r = solve(net, meas, x0, a.mm);
    x_hat = std::move(r.x_hat);
    trace = std::move(r.trace);
  } else if (a.method == "mm-sim") {
    SimulateResult r = simulate(net, meas, x0, a.mm);
    x_hat = std::move(r.x_hat);
    trace = std::move(r.trace);
    std::ofstream ms = open_out(a.out + "/messages.csv");
    r.log.write_csv(ms);
  } else if (a.method == "bb") {
    BBConfig bb = a.bb;
    bb.max_iters = a.mm.max_iters;  // --max-iters caps every method
    BBResult r = bb_solve(net, meas, x0, bb);
    x_hat = std::move(r.x_hat);
    trace = std::move(r.trace);
  } else {
    throw std::invalid_argument("--method expects mm | mm-sim | bb");
  }

  const std::string trace_path = a.out + "/trace.csv";
  std::ofstream ts = open_out(trace_path);
  write_trace_csv(ts, trace);
  const std::string est_path = a.out + "/estimate.json";
  write_estimate(est_path, a.method, net, x_hat, trace.back());

  std::cout << a.method << ": " << trace.back().iter << " iterations, final cost/sensor "
            << format_double(trace.back().cost_per_sensor) << ", wrote " << est_path
            << " and " << trace_path << "\n";
  return 0;
}

int cmd_bench(const ExperimentSpec& spec) {
  ExperimentResult res = run_experiment(spec);
  for (const SigmaResult& sr : res.per_sigma)
    for (const SummaryRow* row : {&sr.mm_summary, &sr.bb_summary})
      std::cout << "sigma " << row->sigma << " " << row->method << ": mpe "
                << format_double(row->mpe) << ", final cost/sensor "
                << format_double(row->final_cost_per_sensor) << ", iters " << row->iters
                << "\n";
  for (const std::string& f : res.files) std::cout << "wrote " << f << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sensor network localization from noisy ranges: majorization-minimization "
      "solver, its per-node message-passing simulation, and a Barzilai-Borwein "
      "consensus baseline"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* g = app.add_subcommand("generate", "Generate a random geometric network file");
  g->add_option("--n", gen.n, "Number of sensors")->required();
  g->add_option("--p", gen.p, "Ambient dimension (2 or 3)")
      ->check(CLI::Range(2, 3))
      ->capture_default_str();
  auto* g_radius =
      g->add_option("--radius", gen.radius, "Connection radius (skips calibration)");
  g->add_option("--target-degree", gen.target_degree,
                "Mean degree to calibrate the radius for")
      ->excludes(g_radius)
      ->capture_default_str();
  g->add_option("--anchors", gen.anchors, "corners | none | file:<path>")
      ->capture_default_str();
  g->add_option("--anchor-range", gen.anchor_range,
                "Anchor link radius (default: connection radius)");
  g->add_option("--sigma", gen.sigma, "Range noise standard deviation")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  g->add_option("--seed", gen.seed, "Seed for every random draw")->capture_default_str();
  g->add_option("--max-attempts", gen.max_attempts,
                "Redraws allowed to find a connected graph")
      ->capture_default_str();
  g->add_option("--out", gen.out, "Output network file")->capture_default_str();

  SolveArgs sol;
  CLI::App* s =
      app.add_subcommand("solve", "Run one solver on a network file, write "
                                  "estimate.json and trace.csv");
  s->add_option("--network", sol.network, "Network file to solve")->required();
  s->add_option("--method", sol.method,
                "mm (centralized sweep) | mm-sim (per-node rounds, also writes "
                "messages.csv) | bb (gradient + Barzilai-Borwein consensus steps)")
      ->check(CLI::IsMember({"mm", "mm-sim", "bb"}))
      ->capture_default_str();
  s->add_option("--init", sol.init,
                "truth | perturbed-truth:<std> | random | file:<path>")
      ->capture_default_str();
  s->add_option("--sigma", sol.sigma,
                "Redraw measurements at this noise level instead of using the file's");
  s->add_option("--seed", sol.seed, "Seed for initializer and any redrawn noise")
      ->capture_default_str();
  s->add_option("--out", sol.out, "Output directory")->capture_default_str();
  s->add_option("--max-iters", sol.mm.max_iters, "Iteration cap (mm and bb)")
      ->capture_default_str();
  s->add_option("--tol", sol.mm.tol_rel_cost,
                "Relative surrogate-cost improvement treated as progress (mm)")
      ->capture_default_str();
  s->add_option("--window", sol.mm.stop_window,
                "Consecutive no-progress iterations before stopping (mm)")
      ->capture_default_str();
  s->add_option("--lipschitz", sol.mm.lipschitz_override,
                "Step constant override (mm); must be >= the distributable bound");
  s->add_flag("--unsafe-lipschitz", sol.mm.allow_unsafe_lipschitz,
              "Allow a step constant below the bound (mm; descent not guaranteed)");
  s->add_option("--T", sol.bb.T, "Consensus rounds per iteration (bb)")
      ->capture_default_str();
  s->add_option("--fallback-step", sol.bb.fallback_step,
                "Step used when the ratio degenerates (bb; default 1/L)");
  s->add_option("--epsilon-guard", sol.bb.epsilon_guard,
                "Separation below which an edge contributes no gradient (bb)")
      ->capture_default_str();
  s->add_flag("--bb2", sol.bb.use_bb2, "Use the <s,g>/<g,g> step variant (bb)");

  ExperimentSpec bench;
  std::string bench_spec_path;
  std::string bench_init = bench.init.to_string();
  bool bench_no_corners = false;
  CLI::App* b = app.add_subcommand(
      "bench", "Run the Monte-Carlo study and write summary.csv plus curve files");
  b->add_option("--spec", bench_spec_path,
                "JSON experiment spec; inline flags below override its fields");
  auto* b_n = b->add_option("--n", bench.network.n, "Sensors")->capture_default_str();
  auto* b_p = b->add_option("--p", bench.network.p, "Ambient dimension (2 or 3)")
                  ->check(CLI::Range(2, 3))
                  ->capture_default_str();
  auto* b_radius =
      b->add_option("--radius", bench.network.radius, "Connection radius (skips calibration)");
  auto* b_deg = b->add_option("--target-degree", bench.network.target_degree,
                              "Mean degree to calibrate the radius for")
                    ->capture_default_str();
  auto* b_ar = b->add_option("--anchor-range", bench.network.anchor_range,
                             "Anchor link radius (default: connection radius)");
  auto* b_nca = b->add_flag("--no-corner-anchors", bench_no_corners,
                            "Generate without the corner anchors");
  auto* b_trials =
      b->add_option("--trials", bench.trials, "Monte-Carlo trials per sigma")
          ->capture_default_str();
  auto* b_sigmas = b->add_option("--sigma", bench.sigmas,
                                 "Noise levels (repeatable; default 0.01 0.05 0.1)");
  auto* b_init =
      b->add_option("--init", bench_init,
                    "truth | perturbed-truth:<std> | random | file:<path>")
          ->capture_default_str();
  auto* b_seed =
      b->add_option("--seed", bench.master_seed, "Master seed")->capture_default_str();
  auto* b_out =
      b->add_option("--out", bench.out_dir, "Output directory")->capture_default_str();
  auto* b_mi = b->add_option("--max-iters", bench.mm.max_iters,
                             "Iteration cap for the proposed method")
                   ->capture_default_str();
  auto* b_tol = b->add_option("--tol", bench.mm.tol_rel_cost,
                              "Relative-improvement stopping tolerance")
                    ->capture_default_str();
  auto* b_win = b->add_option("--window", bench.mm.stop_window,
                              "Consecutive no-progress iterations before stopping")
                    ->capture_default_str();
  auto* b_T =
      b->add_option("--T", bench.bb.T, "Consensus rounds per baseline iteration")
          ->capture_default_str();
  auto* b_bmi = b->add_option("--bb-max-iters", bench.bb.max_iters,
                              "Iteration cap for the baseline")
                    ->capture_default_str();
  auto* b_verbose = b->add_flag("--verbose", bench.verbose, "Progress to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (g->parsed()) return cmd_generate(gen);
    if (s->parsed()) return cmd_solve(sol);
    if (b->parsed()) {
      if (!bench_spec_path.empty()) {
        ExperimentSpec from_file = load_experiment_spec(bench_spec_path);
        // Explicit inline flags win over the file.
        if (*b_n) from_file.network.n = bench.network.n;
        if (*b_p) from_file.network.p = bench.network.p;
        if (*b_radius) from_file.network.radius = bench.network.radius;
        if (*b_deg) from_file.network.target_degree = bench.network.target_degree;
        if (*b_ar) from_file.network.anchor_range = bench.network.anchor_range;
        if (*b_nca) from_file.network.corner_anchors = !bench_no_corners;
        if (*b_trials) from_file.trials = bench.trials;
        if (*b_sigmas) from_file.sigmas = bench.sigmas;
        if (*b_init) from_file.init = parse_init_spec(bench_init);
        if (*b_seed) from_file.master_seed = bench.master_seed;
        if (*b_out) from_file.out_dir = bench.out_dir;
        if (*b_mi) from_file.mm.max_iters = bench.mm.max_iters;
        if (*b_tol) from_file.mm.tol_rel_cost = bench.mm.tol_rel_cost;
        if (*b_win) from_file.mm.stop_window = bench.mm.stop_window;
        if (*b_T) from_file.bb.T = bench.bb.T;
        if (*b_bmi) from_file.bb.max_iters = bench.bb.max_iters;
        if (*b_verbose) from_file.verbose = bench.verbose;
        bench = std::move(from_file);
      } else {
        bench.network.corner_anchors = !bench_no_corners;
        bench.init = parse_init_spec(bench_init);
      }
      return cmd_bench(bench);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
