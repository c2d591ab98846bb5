// Copyright 2026 The madiff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>

#include "CLI11.hpp"
#include "csv_io.hpp"
#include "json.hpp"
#include "madiff/covariance.hpp"
#include "madiff/errors.hpp"
#include "madiff/metrics.hpp"
#include "madiff/model_selection.hpp"
#include "madiff/oracle.hpp"
#include "madiff/pipeline_real.hpp"
#include "madiff/solver.hpp"
#include "madiff/synthetic.hpp"

#ifndef MADIFF_VERSION
#define MADIFF_VERSION "unknown"
#endif

namespace madiff::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SolverFlags {
  std::string solver = "admm";
  bool sa = false;
  double rho0 = 2.0;
  double mu = 10.0;
  double tol_abs = 1e-4;
  double tol_rel = 1e-4;
  double eps = 1e-3;
  std::optional<int> max_iter;
  int jobs = 1;

  GroupMode mode() const {
    return sa ? GroupMode::kSingleAttribute : GroupMode::kMultiAttribute;
  }

  SolverConfig config() const {
    if (solver == "pgd") {
      PgdConfig c;
      c.eps = eps;
      if (max_iter) c.max_iter = *max_iter;
      c.mode = mode();
      return c;
    }
    AdmmConfig c;
    c.rho0 = rho0;
    c.mu = mu;
    c.tol_abs = tol_abs;
    c.tol_rel = tol_rel;
    if (max_iter) c.max_iter = *max_iter;
    c.mode = mode();
    return c;
  }

  json to_json() const {
    json j{{"solver", solver}, {"sa", sa}, {"jobs", jobs}};
    if (solver == "pgd") {
      j["eps"] = eps;
    } else {
      j["rho0"] = rho0;
      j["mu"] = mu;
      j["tol_abs"] = tol_abs;
      j["tol_rel"] = tol_rel;
    }
    j["max_iter"] = max_iter ? json(*max_iter) : json(nullptr);
    return j;
  }

  void add_to(CLI::App& app) {
    app.add_option("--solver", solver, "Optimizer")
        ->check(CLI::IsMember({"admm", "pgd"}))
        ->capture_default_str();
    app.add_flag("--sa", sa, "Single-attribute penalty (group size 1)");
    app.add_option("--rho0", rho0, "Initial ADMM penalty")->capture_default_str();
    app.add_option("--mu", mu, "ADMM residual balancing ratio")->capture_default_str();
    app.add_option("--tol-abs", tol_abs, "ADMM absolute tolerance")->capture_default_str();
    app.add_option("--tol-rel", tol_rel, "ADMM relative tolerance")->capture_default_str();
    app.add_option("--eps", eps, "PGD relative objective tolerance")->capture_default_str();
    app.add_option("--max-iter", max_iter, "Iteration cap (1000 ADMM, 5000 PGD)");
    app.add_option("--jobs", jobs, "Worker threads for lambda sweeps")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out;

  void add_to(CLI::App& app) {
    app.add_option("--seed", seed, "RNG seed; drawn and recorded when absent");
    app.add_option("--out", out, "Output directory")->required();
  }

  std::uint64_t resolve_seed() const {
    if (seed) return *seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
};

fs::path prepare_dir(const std::string& out) {
  const fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : ""));
  }
  return dir;
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  fs::path add(const std::string& name) {
    names_.push_back(name);
    return dir_ / name;
  }

  void write_manifest(const std::string& command, json params, std::uint64_t seed,
                      std::chrono::steady_clock::time_point start) const {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    const json manifest{{"command", command},        {"params", std::move(params)},
                        {"seed", seed},              {"version", MADIFF_VERSION},
                        {"duration_seconds", elapsed.count()}, {"outputs", names_}};
    write_text(dir_ / "manifest.json", manifest.dump(2) + "\n");
  }

  std::size_t count() const { return names_.size() + 1; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

MultiAttributeDataset load_dataset(const std::string& path, int m) {
  CsvTable table = read_csv(path, true);
  const auto cols = table.values.cols();
  if (m < 1 || cols % m != 0) {
    throw ArgumentError("--m " + std::to_string(m) + " does not divide the " +
                        std::to_string(cols) + " columns of " + path);
  }
  return MultiAttributeDataset(std::move(table.values), m, static_cast<int>(cols / m));
}

std::string mode_name(GroupMode mode) {
  return mode == GroupMode::kMultiAttribute ? "multi_attribute" : "single_attribute";
}

json report_json(const SolverReport& r) {
  return json{{"iterations", r.iterations},
              {"converged", r.converged},
              {"final_rho", r.final_rho},
              {"primal_residuals", r.primal_residuals},
              {"dual_residuals", r.dual_residuals},
              {"primal_tolerances", r.primal_tolerances},
              {"dual_tolerances", r.dual_tolerances},
              {"objective_trace", r.objective_trace}};
}

std::string edges_csv(const EstimateResult& fit) {
  std::string text = "k,l,norm\n";
  for (const auto& [k, l] : fit.edges) {
    text += std::to_string(k + 1) + "," + std::to_string(l + 1) + "," +
            format_double(fit.delta_sym.block(k, l).norm()) + "\n";
  }
  return text;
}

EdgeSet read_truth(const std::string& path, int& m, int& p) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
    m = j.at("m").get<int>();
    p = j.at("p").get<int>();
    EdgeSet edges;
    for (const auto& e : j.at("edges")) {
      const int k = e.at(0).get<int>();
      const int l = e.at(1).get<int>();
      if (k < 1 || l < 1 || k > p || l > p) {
        throw ParseError(path + ": edge {" + std::to_string(k) + "," + std::to_string(l) +
                         "} outside 1.." + std::to_string(p));
      }
      edges.insert(k - 1, l - 1);
    }
    return edges;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ArgumentError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// simulate -------------------------------------------------------------------

struct SimulateArgs {
  Common common;
  int m = 3;
  int p = 100;
  int n = 300;
  std::string kind = "er";
  double er_prob = 0.5;
  double mean_degree = 2.0;
  double delta_prob = 0.05;
};

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = a.common.resolve_seed();
  GraphSpec spec;
  spec.kind = a.kind == "ba" ? GraphKind::kBarabasiAlbert : GraphKind::kErdosRenyi;
  spec.p = a.p;
  spec.er_prob = a.er_prob;
  spec.mean_degree = a.mean_degree;
  if (a.n < 1) throw ArgumentError("--n must be positive");
  if (!(a.delta_prob >= 0.0 && a.delta_prob <= 1.0)) {
    throw ArgumentError("--delta-prob must lie in [0, 1]");
  }

  Rng rng(seed);
  const GroundTruth truth = make_pair(spec, a.m, a.delta_prob, rng);
  const auto x = sample_gaussian(truth.omega_x, a.n, rng);
  const auto y = sample_gaussian(truth.omega_y, a.n, rng);

  Outputs files(prepare_dir(a.common.out));
  const auto header = dataset_header(a.m, a.p);
  write_csv(files.add("x.csv"), x.samples(), header);
  write_csv(files.add("y.csv"), y.samples(), header);
  write_csv(files.add("omega_x.csv"), truth.omega_x.data());
  write_csv(files.add("omega_y.csv"), truth.omega_y.data());

  json edges = json::array();
  for (const auto& [k, l] : truth.support) edges.push_back({k + 1, l + 1});
  const json spec_json{{"kind", a.kind},
                       {"p", a.p},
                       {"er_prob", a.er_prob},
                       {"mean_degree", a.mean_degree},
                       {"delta_prob", a.delta_prob}};
  const json truth_json{{"m", a.m},   {"p", a.p},          {"n", a.n},
                        {"gamma", truth.gamma}, {"edges", edges}, {"spec", spec_json},
                        {"seed", seed}};
  write_text(files.add("truth.json"), dump(truth_json));

  json params = spec_json;
  params["m"] = a.m;
  params["n"] = a.n;
  params["out"] = a.common.out;
  files.write_manifest("simulate", params, seed, start);
  out << "simulate: " << truth.support.size() << " true edges, wrote " << files.count()
      << " files to " << a.common.out << "\n";
}

// estimate -------------------------------------------------------------------

struct EstimateArgs {
  Common common;
  SolverFlags solver;
  std::string x;
  std::string y;
  int m = 1;
  std::optional<double> lambda;
  bool bic = false;
  int grid_size = 15;
  bool check_kkt = false;
};

void cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = a.common.resolve_seed();
  if (a.lambda.has_value() == a.bic) {
    throw ArgumentError("give exactly one of --lambda and --bic");
  }
  const auto x = load_dataset(a.x, a.m);
  const auto y = load_dataset(a.y, a.m);
  if (x.p() != y.p()) {
    throw ArgumentError("x has " + std::to_string(x.samples().cols()) + " columns, y has " +
                        std::to_string(y.samples().cols()));
  }
  const BlockMatrix sx = sample_covariance(x);
  const BlockMatrix sy = sample_covariance(y);
  const SolverConfig config = a.solver.config();
  const GroupMode mode = a.solver.mode();

  json report{{"solver", a.solver.solver},
              {"mode", mode_name(mode)},
              {"m", x.m()},
              {"p", x.p()},
              {"n_x", x.n()},
              {"n_y", y.n()},
              {"lambda_max", lambda_max(sx, sy, mode)}};

  EstimateResult fit = [&] {
    if (!a.bic) return solve(sx, sy, *a.lambda, config);
    Selection sel = select_lambda(sx, sy, static_cast<std::size_t>(x.n()),
                                  static_cast<std::size_t>(y.n()), a.grid_size, config,
                                  a.solver.jobs);
    json rows = json::array();
    std::size_t best = 0;
    for (std::size_t i = 0; i < sel.table.rows.size(); ++i) {
      const auto& row = sel.table.rows[i];
      if (row.lambda == sel.lambda) best = i;
      rows.push_back({{"lambda", row.lambda},
                      {"bic", row.bic},
                      {"nonzero_count", row.nonzero_count},
                      {"edge_count", row.result.edges.size()},
                      {"iterations", row.result.report.iterations},
                      {"converged", row.result.report.converged}});
    }
    report["bic"] = {{"scaling", sel.table.scaling},
                     {"lambda_sm", sel.grid.lambda_sm},
                     {"grid", sel.grid.values},
                     {"selected_lambda", sel.lambda},
                     {"search_solves", sel.search_solves},
                     {"grid_solves", sel.grid_solves},
                     {"rows", rows}};
    return std::move(sel.table.rows[best].result);
  }();

  report["lambda"] = fit.lambda;
  report["edge_count"] = fit.edges.size();
  report["report"] = report_json(fit.report);

  Outputs files(prepare_dir(a.common.out));
  write_csv(files.add("delta.csv"), fit.delta_sym.data());
  write_text(files.add("edges.csv"), edges_csv(fit));
  write_text(files.add("report.json"), dump(report));
  if (a.check_kkt) {
    // Optimality conditions hold for the raw iterate, not its symmetrization.
    const oracle::KktReport kkt = oracle::kkt_residual(fit.delta, sx, sy, fit.lambda, mode);
    const json kkt_json{{"lambda", fit.lambda},
                        {"max_active_violation", kkt.max_active_violation},
                        {"max_inactive_violation", kkt.max_inactive_violation},
                        {"relative_active_violation", kkt.max_active_violation / fit.lambda},
                        {"relative_inactive_violation", kkt.max_inactive_violation / fit.lambda},
                        {"active_groups", kkt.active_groups}};
    write_text(files.add("kkt.json"), dump(kkt_json));
  }

  json params = a.solver.to_json();
  params["x"] = a.x;
  params["y"] = a.y;
  params["m"] = a.m;
  params["lambda"] = a.lambda ? json(*a.lambda) : json(nullptr);
  params["bic"] = a.bic;
  params["grid_size"] = a.grid_size;
  params["check_kkt"] = a.check_kkt;
  params["out"] = a.common.out;
  files.write_manifest("estimate", params, seed, start);
  out << "estimate: lambda " << format_double(fit.lambda) << ", " << fit.edges.size()
      << " edges, " << fit.report.iterations << " iterations"
      << (fit.report.converged ? "" : " (not converged)") << "\n";
}

// roc ------------------------------------------------------------------------

struct RocArgs {
  Common common;
  SolverFlags solver;
  std::string x;
  std::string y;
  std::string truth;
  std::optional<int> m;
  std::vector<double> lambdas;
  int grid_size = 15;
  double min_ratio = 0.01;
};

void cmd_roc(const RocArgs& a, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = a.common.resolve_seed();
  int truth_m = 0;
  int truth_p = 0;
  const EdgeSet truth = read_truth(a.truth, truth_m, truth_p);
  const int m = a.m.value_or(truth_m);
  if (m != truth_m) {
    throw ArgumentError("--m " + std::to_string(m) + " disagrees with m=" +
                        std::to_string(truth_m) + " in " + a.truth);
  }
  const auto x = load_dataset(a.x, m);
  const auto y = load_dataset(a.y, m);
  if (x.p() != truth_p || y.p() != truth_p) {
    throw ArgumentError("datasets do not have the p=" + std::to_string(truth_p) +
                        " nodes declared in " + a.truth);
  }
  const BlockMatrix sx = sample_covariance(x);
  const BlockMatrix sy = sample_covariance(y);

  std::vector<double> lambdas = a.lambdas;
  if (lambdas.empty()) {
    if (!(a.min_ratio > 0.0 && a.min_ratio <= 1.0)) {
      throw ArgumentError("--lambda-min-ratio must lie in (0, 1]");
    }
    const double top = lambda_max(sx, sy, a.solver.mode());
    if (!(top > 0.0)) throw DegenerateInputError("x and y have identical covariances");
    lambdas = log_spaced(a.min_ratio * top, top, a.grid_size);
  }
  const RocCurve curve = roc_sweep(sx, sy, truth, lambdas, a.solver.config(), a.solver.jobs);

  Outputs files(prepare_dir(a.common.out));
  std::string text = "lambda,tpr,fpr,f1\n";
  for (const auto& pt : curve.points) {
    text += format_double(pt.lambda) + "," + format_double(pt.tpr) + "," +
            format_double(pt.fpr) + "," + format_double(pt.f1) + "\n";
  }
  write_text(files.add("roc.csv"), text);

  json params = a.solver.to_json();
  params["x"] = a.x;
  params["y"] = a.y;
  params["truth"] = a.truth;
  params["m"] = m;
  params["lambdas"] = lambdas;
  params["out"] = a.common.out;
  files.write_manifest("roc", params, seed, start);
  out << "roc: " << curve.points.size() << " points, auc " << format_double(roc_auc(curve))
      << "\n";
}

// preprocess -----------------------------------------------------------------

struct PreprocessArgs {
  Common common;
  std::string config;
  std::string output_name = "x.csv";
};

struct NodeConfig {
  std::string name;
  fs::path file;
  std::vector<std::string> columns;
  pipeline::AffineMap premap;
};

Eigen::MatrixXd select_columns(const CsvTable& table, const NodeConfig& node) {
  if (node.columns.empty()) return table.values;
  Eigen::MatrixXd out(table.values.rows(), static_cast<Eigen::Index>(node.columns.size()));
  for (std::size_t r = 0; r < node.columns.size(); ++r) {
    const auto it = std::find(table.header.begin(), table.header.end(), node.columns[r]);
    if (it == table.header.end()) {
      throw ArgumentError("node '" + node.name + "': column '" + node.columns[r] +
                          "' not found in " + node.file.string());
    }
    out.col(static_cast<Eigen::Index>(r)) =
        table.values.col(static_cast<Eigen::Index>(it - table.header.begin()));
  }
  return out;
}

void cmd_preprocess(const PreprocessArgs& a, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = a.common.resolve_seed();
  std::ifstream in(a.config);
  if (!in) throw IoError("cannot open " + a.config);

  double floor = 1e-6;
  bool has_header = true;
  std::vector<NodeConfig> nodes;
  try {
    const json cfg = json::parse(in);
    floor = cfg.value("positivity_floor", 1e-6);
    has_header = cfg.value("header", true);
    const fs::path base = fs::path(a.config).parent_path();
    for (const auto& n : cfg.at("nodes")) {
      NodeConfig node;
      node.name = n.at("name").get<std::string>();
      node.file = base / n.at("file").get<std::string>();
      node.columns = n.value("columns", std::vector<std::string>{});
      node.premap.scale = n.value("scale", 1.0);
      node.premap.offset = n.value("offset", 0.0);
      nodes.push_back(std::move(node));
    }
  } catch (const json::exception& e) {
    throw ParseError(a.config + ": " + e.what());
  }
  if (nodes.empty()) throw ArgumentError(a.config + ": no nodes configured");
  if (!(floor > 0.0)) throw ArgumentError("positivity_floor must be positive");

  std::vector<Eigen::MatrixXd> processed;
  json node_names = json::array();
  for (const auto& node : nodes) {
    const CsvTable table = read_csv(node.file, has_header);
    if (!has_header && !node.columns.empty()) {
      throw ArgumentError("node '" + node.name + "': column names need header rows");
    }
    processed.push_back(
        pipeline::process_feature(node.name, select_columns(table, node), node.premap, floor));
    node_names.push_back(node.name);
  }
  const MultiAttributeDataset data = pipeline::assemble(processed);

  Outputs files(prepare_dir(a.common.out));
  write_csv(files.add(a.output_name), data.samples(), dataset_header(data.m(), data.p()));
  const json params{{"config", a.config},        {"nodes", node_names},
                    {"positivity_floor", floor}, {"m", data.m()},
                    {"p", data.p()},             {"out", a.common.out}};
  files.write_manifest("preprocess", params, seed, start);
  out << "preprocess: " << data.n() << " rows, " << data.p() << " nodes x " << data.m()
      << " attributes\n";
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-attribute differential graph estimation", "madiff"};
  app.set_version_flag("--version", MADIFF_VERSION);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw a ground-truth pair and Gaussian samples");
  sim.common.add_to(*simulate);
  simulate->add_option("--m", sim.m, "Attributes per node")->capture_default_str();
  simulate->add_option("--p", sim.p, "Nodes")->capture_default_str();
  simulate->add_option("--n", sim.n, "Samples per population")->capture_default_str();
  simulate->add_option("--kind", sim.kind, "Graph for Omega_x")
      ->check(CLI::IsMember({"er", "ba"}))
      ->capture_default_str();
  simulate->add_option("--er-prob", sim.er_prob, "ER edge probability")->capture_default_str();
  simulate->add_option("--mean-degree", sim.mean_degree, "BA mean degree")
      ->capture_default_str();
  simulate->add_option("--delta-prob", sim.delta_prob, "Differential edge probability")
      ->capture_default_str();

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the differential graph");
  est.common.add_to(*estimate);
  est.solver.add_to(*estimate);
  estimate->add_option("--x", est.x, "Dataset CSV for population x")->required();
  estimate->add_option("--y", est.y, "Dataset CSV for population y")->required();
  estimate->add_option("--m", est.m, "Attributes per node")->required();
  auto* lambda_opt = estimate->add_option("--lambda", est.lambda, "Penalty");
  auto* bic_opt = estimate->add_flag("--bic", est.bic, "Select the penalty by BIC");
  lambda_opt->excludes(bic_opt);
  estimate->add_option("--grid-size", est.grid_size, "BIC grid points")->capture_default_str();
  estimate->add_flag("--check-kkt", est.check_kkt, "Write optimality residuals to kkt.json");

  RocArgs roc;
  auto* roc_cmd = app.add_subcommand("roc", "Sweep the penalty and score against the truth");
  roc.common.add_to(*roc_cmd);
  roc.solver.add_to(*roc_cmd);
  roc_cmd->add_option("--x", roc.x, "Dataset CSV for population x")->required();
  roc_cmd->add_option("--y", roc.y, "Dataset CSV for population y")->required();
  roc_cmd->add_option("--truth", roc.truth, "truth.json from simulate")->required();
  roc_cmd->add_option("--m", roc.m, "Attributes per node (defaults to the truth file)");
  roc_cmd->add_option("--lambdas", roc.lambdas, "Explicit penalties")->delimiter(',');
  roc_cmd->add_option("--grid-size", roc.grid_size, "Log-spaced grid points")
      ->capture_default_str();
  roc_cmd->add_option("--lambda-min-ratio", roc.min_ratio,
                      "Smallest grid value as a fraction of lambda_max")
      ->capture_default_str();

  PreprocessArgs pre;
  auto* preprocess = app.add_subcommand("preprocess", "Turn raw series into a dataset CSV");
  pre.common.add_to(*preprocess);
  preprocess->add_option("--config", pre.config, "JSON node configuration")->required();
  preprocess->add_option("--output-name", pre.output_name, "Dataset file name")
      ->capture_default_str();

  std::vector<std::string> argv_store{"madiff"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << MADIFF_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (simulate->parsed()) cmd_simulate(sim, out);
    if (estimate->parsed()) cmd_estimate(est, out);
    if (roc_cmd->parsed()) cmd_roc(roc, out);
    if (preprocess->parsed()) cmd_preprocess(pre, out);
  } catch (const Error& e) {
    err << "error: " << e.category() << ": " << one_line(e.what()) << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: io: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace madiff::cli
