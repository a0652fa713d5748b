#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netinf/csv.hpp"
#include "netinf/dataset.hpp"
#include "netinf/effects.hpp"
#include "netinf/errors.hpp"
#include "netinf/graph.hpp"
#include "netinf/serialize.hpp"
#include "netinf/simulate.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct GraphFlags {
  bool directed = false;
  bool transpose = false;
  std::string normalize = "none";
  std::string nodes_path;
  std::optional<netinf::Index> n_hint;
  int power = 1;
};

void add_graph_flags(CLI::App* cmd, GraphFlags& flags) {
  cmd->add_flag("--directed", flags.directed, "treat edge records as one-directional");
  cmd->add_flag("--transpose", flags.transpose,
                "flip orientation for files stored influencer->influencee");
  cmd->add_option("--normalize", flags.normalize, "row weight normalization")
      ->check(CLI::IsMember({"none", "row"}))
      ->capture_default_str();
  cmd->add_option("--nodes", flags.nodes_path, "nodes CSV (header `label`) fixing label order");
  cmd->add_option("--power", flags.power, "replace each graph by its k-th matrix power")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

netinf::AdjacencyMatrix load_graph(const std::string& path, const GraphFlags& flags) {
  netinf::EdgeListOptions opts;
  opts.directed = flags.directed;
  opts.transpose = flags.transpose;
  opts.row_normalize = flags.normalize == "row";
  opts.nodes_path = flags.nodes_path;
  opts.n_hint = flags.n_hint;
  netinf::AdjacencyMatrix g = netinf::load_edge_list_file(path, opts);
  if (flags.power > 1) g = netinf::matrix_power(g, flags.power);
  return g;
}

void write_artifact(const std::string& out_path, const std::string& payload) {
  std::ofstream out(out_path);
  if (!out) throw netinf::DataError("cannot write '" + out_path + "'");
  out << payload;
}

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  // allow both repeated flags and comma-joined values
  std::vector<std::string> items;
  for (const auto& entry : raw) {
    std::size_t start = 0;
    while (start <= entry.size()) {
      const std::size_t comma = entry.find(',', start);
      const std::string piece = entry.substr(start, comma - start);
      if (!piece.empty()) items.push_back(piece);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return items;
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
  std::string data_path;
  std::vector<std::string> edges_paths;
  std::string outcome;
  std::string treatment;
  std::vector<std::string> covariates_raw;
  std::string estimator = "full";
  std::string vcov = "classical";
  double alpha = 0.05;
  double hc5_k = 0.7;
  bool neighbor_intercept = false;
  bool no_intercept = false;
  std::string degree_column;
  std::optional<double> gls_a;
  std::optional<double> gls_b;
  std::optional<double> er_p;
  GraphFlags graph_flags;
  std::string out_path;
  std::string format = "json";
};

int cmd_estimate(const EstimateOptions& opt) {
  const netinf::csv::Table table = netinf::csv::read_csv_file(opt.data_path);
  const std::vector<std::string> covariates = split_list(opt.covariates_raw);
  const netinf::Dataset data =
      netinf::dataset_from_table(table, opt.outcome, opt.treatment, covariates);

  std::vector<netinf::AdjacencyMatrix> graphs;
  graphs.reserve(opt.edges_paths.size());
  for (const auto& path : opt.edges_paths) {
    netinf::AdjacencyMatrix g = load_graph(path, opt.graph_flags);
    if (g.size() != data.n()) {
      throw netinf::ValidationError("graph '" + path + "' has " + std::to_string(g.size()) +
                                    " nodes but the data has " + std::to_string(data.n()) +
                                    " rows");
    }
    graphs.push_back(std::move(g));
  }

  netinf::VcovSpec vcov{netinf::vcov_from_string(opt.vcov), opt.hc5_k, std::nullopt};
  if (opt.gls_a || opt.gls_b) {
    if (!(opt.gls_a && opt.gls_b)) {
      throw netinf::ValidationError("--gls-a and --gls-b must be given together");
    }
    if (vcov.kind != netinf::VcovKind::gls) {
      throw netinf::ValidationError("--gls-a/--gls-b require --vcov gls");
    }
    vcov.gls_known = std::make_pair(*opt.gls_a, *opt.gls_b);
  }

  netinf::EffectEstimate est;
  if (opt.estimator == "full" || opt.estimator == "multi") {
    if (graphs.empty()) {
      throw netinf::ValidationError("estimator '" + opt.estimator + "' needs at least one --edges");
    }
    est = netinf::estimate_total_known(data, graphs, vcov, opt.alpha, opt.neighbor_intercept,
                                       !opt.no_intercept);
  } else if (opt.estimator == "partial") {
    Eigen::VectorXd degrees;
    if (!opt.degree_column.empty()) {
      degrees = table.numeric_column(opt.degree_column);
    } else if (graphs.size() == 1) {
      degrees = netinf::degree_summary(graphs[0]).degrees;
    } else {
      throw netinf::ValidationError(
          "estimator 'partial' needs either --degree-column or exactly one --edges");
    }
    est = netinf::estimate_partially_known(data, degrees, vcov, opt.alpha);
  } else {  // naive
    est = netinf::estimate_naive(data, vcov, opt.alpha, !opt.no_intercept);
  }

  if (opt.er_p) {
    est.diagnostics["er_variance_bias"] =
        netinf::er_variance_bias(est.beta_as, est.n, *opt.er_p);
  }

  std::cout << est.estimator << ": psi_hat=" << est.psi << " se=" << est.se << " ci"
            << static_cast<int>((1.0 - est.alpha) * 100.0 + 0.5) << "=[" << est.ci_lo << ", "
            << est.ci_hi << "] n=" << est.n << " vcov=" << est.vcov << "\n";
  for (const auto& warning : est.warnings) std::cout << "warning: " << warning << "\n";

  if (!opt.out_path.empty()) {
    write_artifact(opt.out_path,
                   opt.format == "json" ? netinf::to_json(est) : netinf::to_csv(est));
  }
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  netinf::Index n = 400;
  std::string graph = "er";
  double p = 0.01;
  bool directed = false;
  double ba_power = 0.05;
  netinf::Index ba_m = 1;
  netinf::Index nei = 10;
  double p_rewire = 0.05;
  std::string errors = "homo";
  double a = 3.0;
  double b = 1.5;
  std::vector<std::string> estimators_raw;
  int reps = 100;
  std::uint64_t seed = 1;
  bool fixed_graph = false;
  double alpha = 0.05;
  int threads = 1;
  std::string out_path;
  std::string format = "json";
};

int cmd_simulate(const SimulateOptions& opt) {
  netinf::SimConfig config;
  config.n = opt.n;
  if (opt.graph == "er") {
    config.graph.family = netinf::GraphFamily::er;
    config.graph.er_p = opt.p;
    config.graph.er_directed = opt.directed;
  } else if (opt.graph == "ba") {
    config.graph.family = netinf::GraphFamily::ba;
    config.graph.ba_power = opt.ba_power;
    config.graph.ba_m = opt.ba_m;
  } else {
    config.graph.family = netinf::GraphFamily::ws;
    config.graph.ws_nei = opt.nei;
    config.graph.ws_p_rewire = opt.p_rewire;
  }
  config.errors = opt.errors == "homo" ? netinf::ErrorSpec::homoscedastic()
                                       : netinf::ErrorSpec::correlated(opt.a, opt.b);

  const std::vector<std::string> names = split_list(opt.estimators_raw);
  if (names.empty()) {
    // the two experiment arms: interference-aware vs naive under iid errors,
    // correlation-aware vs correlation-ignoring under correlated errors
    config.estimators =
        opt.errors == "homo"
            ? std::vector{netinf::EstimatorKind::full, netinf::EstimatorKind::partial,
                          netinf::EstimatorKind::naive}
            : std::vector{netinf::EstimatorKind::full_gls, netinf::EstimatorKind::full};
  } else {
    config.estimators.clear();
    for (const auto& name : names) {
      config.estimators.push_back(netinf::estimator_from_string(name));
    }
  }
  config.reps = opt.reps;
  config.base_seed = opt.seed;
  config.fixed_graph = opt.fixed_graph;
  config.alpha = opt.alpha;
  config.threads = opt.threads;
  config.validate();

  const netinf::SimulationReport report = netinf::run_simulation(config);
  for (const auto& s : report.estimators) {
    std::cout << netinf::estimator_name(s.estimator) << ": bias=" << s.mean_bias
              << " sd=" << s.empirical_sd << " mean_se=" << s.mean_se
              << " coverage=" << s.coverage << " reps=" << s.reps_used
              << " failures=" << s.failures << "\n";
  }
  for (const auto& r : report.replicates) {
    if (r.failed) {
      std::cout << "first failure (" << netinf::estimator_name(r.estimator) << ", replicate "
                << r.rep_index << "): " << r.error << "\n";
      break;
    }
  }
  if (!opt.out_path.empty()) {
    write_artifact(opt.out_path,
                   opt.format == "json" ? netinf::to_json(report) : netinf::to_csv(report));
  }
  return 0;
}

// --------------------------------------------------------------- graph-info

struct GraphInfoOptions {
  std::string edges_path;
  GraphFlags graph_flags;
  long long n_hint = -1;
};

int cmd_graph_info(const GraphInfoOptions& opt) {
  GraphFlags flags = opt.graph_flags;
  if (opt.n_hint >= 0) flags.n_hint = static_cast<netinf::Index>(opt.n_hint);
  const netinf::AdjacencyMatrix g = load_graph(opt.edges_path, flags);
  const netinf::DegreeSummary deg = netinf::degree_summary(g);

  double sd = 0.0;
  if (g.size() > 1) {
    const Eigen::ArrayXd centered = deg.degrees.array() - deg.mean_degree;
    sd = std::sqrt(centered.square().sum() / static_cast<double>(g.size() - 1));
  }
  std::cout << "n: " << g.size() << "\n"
            << "total_weight: " << deg.total_weight << "\n"
            << "mean_degree: " << deg.mean_degree << "\n"
            << "min_degree: " << deg.degrees.minCoeff() << "\n"
            << "max_degree: " << deg.degrees.maxCoeff() << "\n"
            << "sd_degree: " << sd << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"total, within-unit, and spillover effects from linear models "
               "under network interference"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");

  EstimateOptions est;
  CLI::App* estimate = app.add_subcommand("estimate", "estimate effects from a data file");
  estimate->add_option("--data", est.data_path, "data CSV (header row, one row per unit)")
      ->required();
  estimate->add_option("--edges", est.edges_paths,
                       "edge-list CSV src,dst[,weight]; repeat for multiple networks");
  estimate->add_option("--outcome", est.outcome, "outcome column")->required();
  estimate->add_option("--treatment", est.treatment, "treatment column")->required();
  estimate->add_option("--covariates", est.covariates_raw, "covariate columns (comma separated)");
  estimate->add_option("--estimator", est.estimator)
      ->check(CLI::IsMember({"full", "partial", "naive", "multi"}))
      ->capture_default_str();
  estimate->add_option("--vcov", est.vcov)
      ->check(CLI::IsMember({"classical", "hc0", "hc1", "hc2", "hc3", "hc4", "hc5", "gls"}))
      ->capture_default_str();
  estimate->add_option("--alpha", est.alpha, "1 - confidence level")->capture_default_str();
  estimate->add_option("--hc5-k", est.hc5_k, "hc5 leverage constant")->capture_default_str();
  estimate->add_flag("--neighbor-intercept", est.neighbor_intercept,
                     "add each network's weighted-degree column");
  estimate->add_flag("--no-intercept", est.no_intercept, "drop the intercept column");
  estimate->add_option("--degree-column", est.degree_column,
                       "observed weighted-degree column (partial estimator)");
  estimate->add_option("--gls-a", est.gls_a, "known error covariance: diagonal weight a");
  estimate->add_option("--gls-b", est.gls_b, "known error covariance: graph weight b");
  estimate->add_option("--er-p", est.er_p,
                       "report the variance-bias diagnostic for a random ER(p) graph hypothesis");
  add_graph_flags(estimate, est.graph_flags);
  estimate->add_option("--out", est.out_path, "write the estimate to this path");
  estimate->add_option("--format", est.format)
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  SimulateOptions sim;
  CLI::App* simulate =
      app.add_subcommand("simulate", "measure estimator operating characteristics");
  simulate->add_option("--n", sim.n, "units per replicate")->capture_default_str();
  simulate->add_option("--graph", sim.graph)
      ->check(CLI::IsMember({"er", "ba", "ws"}))
      ->capture_default_str();
  simulate->add_option("--p", sim.p, "er edge probability")->capture_default_str();
  simulate->add_flag("--directed", sim.directed, "directed er graphs");
  simulate->add_option("--ba-power", sim.ba_power, "preferential-attachment exponent")
      ->capture_default_str();
  simulate->add_option("--ba-m", sim.ba_m, "edges per new node")->capture_default_str();
  simulate->add_option("--nei", sim.nei, "ws lattice radius")->capture_default_str();
  simulate->add_option("--p-rewire", sim.p_rewire, "ws rewiring probability")
      ->capture_default_str();
  simulate->add_option("--errors", sim.errors)
      ->check(CLI::IsMember({"homo", "corr"}))
      ->capture_default_str();
  simulate->add_option("--a", sim.a, "correlated errors: diagonal weight")->capture_default_str();
  simulate->add_option("--b", sim.b, "correlated errors: graph weight")->capture_default_str();
  simulate->add_option("--estimators", sim.estimators_raw,
                       "subset of full,partial,naive,full_gls (default per error model)");
  simulate->add_option("--reps", sim.reps, "replicate count")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "base seed")->capture_default_str();
  simulate->add_flag("--fixed-graph", sim.fixed_graph, "freeze the replicate-0 graph");
  simulate->add_option("--alpha", sim.alpha)->capture_default_str();
  simulate->add_option("--threads", sim.threads, "replicate workers")->capture_default_str();
  simulate->add_option("--out", sim.out_path, "write the report to this path");
  simulate->add_option("--format", sim.format)
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  GraphInfoOptions info;
  CLI::App* graph_info = app.add_subcommand("graph-info", "degree report for an edge list");
  graph_info->add_option("--edges", info.edges_path, "edge-list CSV")->required();
  graph_info->add_option("--n-hint", info.n_hint, "node count when trailing nodes are isolated");
  add_graph_flags(graph_info, info.graph_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*estimate) return cmd_estimate(est);
    if (*simulate) return cmd_simulate(sim);
    return cmd_graph_info(info);
  } catch (const netinf::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const netinf::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const netinf::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
