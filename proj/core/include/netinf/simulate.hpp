#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "netinf/dataset.hpp"
#include "netinf/graph.hpp"

namespace netinf {

enum class GraphFamily { er, ba, ws };

struct GraphSpec {
  GraphFamily family = GraphFamily::er;
  double er_p = 0.01;
  bool er_directed = false;
  double ba_power = 0.05;
  Index ba_m = 1;
  Index ws_nei = 10;
  double ws_p_rewire = 0.05;
};

std::string graph_family_name(GraphFamily family);

// Error model for the data-generating process: Sigma = a I + b G.
// homo is (a, b) = (1, 0); corr defaults to (3, 1.5); none draws no noise
// at all (degenerate, for exactness tests).
enum class ErrorModel { homo, corr, none };

struct ErrorSpec {
  ErrorModel model = ErrorModel::homo;
  double a = 1.0;
  double b = 0.0;

  static ErrorSpec homoscedastic() { return {ErrorModel::homo, 1.0, 0.0}; }
  static ErrorSpec correlated(double a = 3.0, double b = 1.5) {
    return {ErrorModel::corr, a, b};
  }
  static ErrorSpec noiseless() { return {ErrorModel::none, 0.0, 0.0}; }
};

enum class EstimatorKind { full, partial, naive, full_gls };

std::string estimator_name(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& name);

struct SimConfig {
  Index n = 400;
  GraphSpec graph;
  ErrorSpec errors;
  std::vector<EstimatorKind> estimators{EstimatorKind::full};
  int reps = 100;
  std::uint64_t base_seed = 1;
  bool fixed_graph = false;
  double alpha = 0.05;
  int threads = 1;

  void validate() const;  // throws ValidationError
};

struct ReplicateResult {
  EstimatorKind estimator;
  double psi_hat = 0.0;
  double se_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool covered = false;   // ci contains the replicate's true psi
  double true_psi = 0.0;  // 1 + F_bar of the replicate's graph
  std::uint64_t seed = 0;
  int rep_index = 0;
  bool failed = false;
  std::string error;
};

struct EstimatorSummary {
  EstimatorKind estimator;
  int reps_used = 0;
  int failures = 0;
  double mean_bias = 0.0;
  double empirical_sd = 0.0;  // SD of psi_hat - true_psi across replicates
  double mean_se = 0.0;
  double coverage = 0.0;
  double mean_true_psi = 0.0;
};

struct SimulationReport {
  SimConfig config;
  std::vector<EstimatorSummary> estimators;
  std::vector<ReplicateResult> replicates;  // every estimator x replicate
};

// Four covariate columns: Gamma(3,1), Poisson(1), Beta(2,5), Bernoulli(0.6).
Eigen::MatrixXd sample_covariates(Index n, std::mt19937_64& rng);

// Draw from N(0, aI + bG) via Cholesky; throws NumericError naming
// `family_label` with remediation hints when aI + bG is not positive
// definite.
Eigen::VectorXd sample_correlated_normal(Index n, double a, double b, const AdjacencyMatrix& g,
                                         std::mt19937_64& rng,
                                         const std::string& family_label = "graph");

struct DgpDraw {
  Dataset data;
  double true_psi = 0.0;     // 1 + F_bar
  Eigen::VectorXd degrees;   // F of the realized graph
};

// A = L theta + eps_A, Y = A + L theta + G A + eps_Y with
// theta = (1, 2, 3, 4) and eps ~ N(0, aI + bG) per the error spec.
DgpDraw generate_dgp(Index n, const AdjacencyMatrix& g, const ErrorSpec& errors,
                     std::mt19937_64& rng, const std::string& family_label = "graph");

// One replicate: deterministic in (config, rep_index). Estimator failures
// are recorded in the result, not thrown.
std::vector<ReplicateResult> run_replicate(const SimConfig& config, int rep_index);

// All replicates plus per-estimator aggregates. Output is a pure function
// of the config, independent of thread count and scheduling.
SimulationReport run_simulation(const SimConfig& config);

}  // namespace netinf
