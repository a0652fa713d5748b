#include "netinf/simulate.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "netinf/effects.hpp"
#include "netinf/errors.hpp"
#include "netinf/rng.hpp"

namespace netinf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Shared Cholesky factor of aI + bG, so one replicate can draw both error
// vectors from a single factorization.
class CorrelatedSampler {
public:
  CorrelatedSampler(double a, double b, const AdjacencyMatrix& g,
                    const std::string& family_label) {
    if (g.directed()) {
      throw ValidationError("correlated errors need an undirected graph: a*I + b*G must be symmetric");
    }
    Eigen::MatrixXd sigma = b * g.dense();
    sigma.diagonal().array() += a;
    llt_.compute(sigma);
    if (llt_.info() != Eigen::Success) {
      throw NumericError("error covariance a*I + b*G is not positive definite for the " +
                         family_label + " graph (n = " + std::to_string(g.size()) +
                         ", a = " + std::to_string(a) + ", b = " + std::to_string(b) +
                         "); shrink b or row-normalize the graph");
    }
  }

  Eigen::VectorXd sample(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(llt_.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    return llt_.matrixL() * z;
  }

private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

AdjacencyMatrix make_graph(Index n, const GraphSpec& spec, std::uint64_t seed) {
  switch (spec.family) {
    case GraphFamily::er:
      return generate_er(n, spec.er_p, seed, spec.er_directed);
    case GraphFamily::ba:
      return generate_ba(n, spec.ba_power, spec.ba_m, seed);
    case GraphFamily::ws:
      return generate_ws(n, 1, spec.ws_nei, spec.ws_p_rewire, seed);
  }
  throw ValidationError("unknown graph family");
}

ReplicateResult failed_result(EstimatorKind kind, double true_psi, std::uint64_t seed,
                              int rep_index, const std::string& message) {
  ReplicateResult r;
  r.estimator = kind;
  r.psi_hat = kNaN;
  r.se_hat = kNaN;
  r.ci_lo = kNaN;
  r.ci_hi = kNaN;
  r.covered = false;
  r.true_psi = true_psi;
  r.seed = seed;
  r.rep_index = rep_index;
  r.failed = true;
  r.error = message;
  return r;
}

}  // namespace

std::string graph_family_name(GraphFamily family) {
  switch (family) {
    case GraphFamily::er: return "er";
    case GraphFamily::ba: return "ba";
    case GraphFamily::ws: return "ws";
  }
  return "?";
}

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::full: return "full";
    case EstimatorKind::partial: return "partial";
    case EstimatorKind::naive: return "naive";
    case EstimatorKind::full_gls: return "full_gls";
  }
  return "?";
}

EstimatorKind estimator_from_string(const std::string& name) {
  if (name == "full") return EstimatorKind::full;
  if (name == "partial") return EstimatorKind::partial;
  if (name == "naive") return EstimatorKind::naive;
  if (name == "full_gls") return EstimatorKind::full_gls;
  throw ValidationError("unknown estimator '" + name + "'");
}

void SimConfig::validate() const {
  if (n < 1) throw ValidationError("simulation needs n >= 1");
  if (reps < 1) throw ValidationError("simulation needs at least one replicate");
  if (estimators.empty()) throw ValidationError("simulation needs a nonempty estimator set");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie strictly in (0, 1)");
  if (threads < 1) throw ValidationError("threads must be at least 1");
  if (errors.model != ErrorModel::none && !(errors.a > 0.0)) {
    throw ValidationError("error covariance needs a > 0");
  }
  switch (graph.family) {
    case GraphFamily::er:
      if (!(graph.er_p >= 0.0 && graph.er_p <= 1.0)) {
        throw ValidationError("er graph needs p in [0, 1]");
      }
      break;
    case GraphFamily::ba:
      if (graph.ba_m < 1) throw ValidationError("ba graph needs m >= 1");
      break;
    case GraphFamily::ws:
      if (graph.ws_nei < 1) throw ValidationError("ws graph needs nei >= 1");
      if (n <= 2 * graph.ws_nei) throw ValidationError("ws graph needs n > 2*nei");
      if (!(graph.ws_p_rewire >= 0.0 && graph.ws_p_rewire <= 1.0)) {
        throw ValidationError("ws graph needs p_rewire in [0, 1]");
      }
      break;
  }
}

Eigen::MatrixXd sample_covariates(Index n, std::mt19937_64& rng) {
  if (n < 1) throw ValidationError("sample_covariates needs n >= 1");
  Eigen::MatrixXd L(n, 4);
  std::gamma_distribution<double> gamma31(3.0, 1.0);
  std::poisson_distribution<int> pois1(1.0);
  std::gamma_distribution<double> gamma2(2.0, 1.0);
  std::gamma_distribution<double> gamma5(5.0, 1.0);
  for (Index i = 0; i < n; ++i) L(i, 0) = gamma31(rng);
  for (Index i = 0; i < n; ++i) L(i, 1) = static_cast<double>(pois1(rng));
  for (Index i = 0; i < n; ++i) {
    const double g1 = gamma2(rng), g2 = gamma5(rng);
    L(i, 2) = g1 / (g1 + g2);
  }
  for (Index i = 0; i < n; ++i) L(i, 3) = uniform01(rng) < 0.6 ? 1.0 : 0.0;
  return L;
}

Eigen::VectorXd sample_correlated_normal(Index n, double a, double b, const AdjacencyMatrix& g,
                                         std::mt19937_64& rng, const std::string& family_label) {
  if (g.size() != n) throw ValidationError("graph node count does not match n");
  const CorrelatedSampler sampler(a, b, g, family_label);
  return sampler.sample(rng);
}

DgpDraw generate_dgp(Index n, const AdjacencyMatrix& g, const ErrorSpec& errors,
                     std::mt19937_64& rng, const std::string& family_label) {
  if (g.size() != n) throw ValidationError("graph node count does not match n");

  DgpDraw draw;
  const Eigen::MatrixXd L = sample_covariates(n, rng);
  const Eigen::Vector4d theta(1.0, 2.0, 3.0, 4.0);

  Eigen::VectorXd eps_a = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd eps_y = Eigen::VectorXd::Zero(n);
  switch (errors.model) {
    case ErrorModel::none:
      break;
    case ErrorModel::homo: {
      std::normal_distribution<double> normal;
      for (Index i = 0; i < n; ++i) eps_a[i] = normal(rng);
      for (Index i = 0; i < n; ++i) eps_y[i] = normal(rng);
      break;
    }
    case ErrorModel::corr: {
      const CorrelatedSampler sampler(errors.a, errors.b, g, family_label);
      eps_a = sampler.sample(rng);
      eps_y = sampler.sample(rng);
      break;
    }
  }

  const Eigen::VectorXd a = L * theta + eps_a;
  const Eigen::VectorXd y = a + L * theta + exposure(g, a) + eps_y;

  draw.data.outcome = y;
  draw.data.treatment = a;
  draw.data.covariates = L;
  draw.data.covariate_names = {"L1", "L2", "L3", "L4"};
  draw.degrees = degree_summary(g).degrees;
  draw.true_psi = 1.0 + draw.degrees.mean();
  return draw;
}

std::vector<ReplicateResult> run_replicate(const SimConfig& config, int rep_index) {
  config.validate();
  if (rep_index < 0 || rep_index >= config.reps) {
    throw ValidationError("replicate index out of range");
  }
  const std::uint64_t rep_seed = derive_seed(config.base_seed, static_cast<std::uint64_t>(rep_index));
  const std::uint64_t graph_seed =
      config.fixed_graph ? derive_seed(derive_seed(config.base_seed, 0), 0)
                         : derive_seed(rep_seed, 0);
  const std::string family = graph_family_name(config.graph.family);

  std::vector<ReplicateResult> results;
  results.reserve(config.estimators.size());

  AdjacencyMatrix g = make_graph(config.n, config.graph, graph_seed);
  std::mt19937_64 rng(derive_seed(rep_seed, 1));

  DgpDraw draw;
  bool dgp_ok = true;
  std::string dgp_error;
  try {
    draw = generate_dgp(config.n, g, config.errors, rng, family);
  } catch (const Error& e) {
    dgp_ok = false;
    dgp_error = e.what();
  }
  if (!dgp_ok) {
    for (const EstimatorKind kind : config.estimators) {
      results.push_back(failed_result(kind, kNaN, rep_seed, rep_index, dgp_error));
    }
    return results;
  }

  VcovSpec classical;
  VcovSpec gls;
  gls.kind = VcovKind::gls;
  for (const EstimatorKind kind : config.estimators) {
    try {
      EffectEstimate est;
      switch (kind) {
        case EstimatorKind::full:
          est = estimate_total_known(draw.data, {g}, classical, config.alpha);
          break;
        case EstimatorKind::full_gls:
          est = estimate_total_known(draw.data, {g}, gls, config.alpha);
          break;
        case EstimatorKind::partial:
          est = estimate_partially_known(draw.data, draw.degrees, classical, config.alpha);
          break;
        case EstimatorKind::naive:
          est = estimate_naive(draw.data, classical, config.alpha);
          break;
      }
      ReplicateResult r;
      r.estimator = kind;
      r.psi_hat = est.psi;
      r.se_hat = est.se;
      r.ci_lo = est.ci_lo;
      r.ci_hi = est.ci_hi;
      r.true_psi = draw.true_psi;
      r.covered = est.ci_lo <= draw.true_psi && draw.true_psi <= est.ci_hi;
      r.seed = rep_seed;
      r.rep_index = rep_index;
      results.push_back(std::move(r));
    } catch (const Error& e) {
      results.push_back(failed_result(kind, draw.true_psi, rep_seed, rep_index, e.what()));
    }
  }
  return results;
}

SimulationReport run_simulation(const SimConfig& config) {
  config.validate();
  std::vector<std::vector<ReplicateResult>> per_rep(static_cast<std::size_t>(config.reps));

  const int threads = std::min<int>(config.threads, config.reps);
  if (threads <= 1) {
    for (int rep = 0; rep < config.reps; ++rep) {
      per_rep[static_cast<std::size_t>(rep)] = run_replicate(config, rep);
    }
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int rep = next.fetch_add(1); rep < config.reps; rep = next.fetch_add(1)) {
        per_rep[static_cast<std::size_t>(rep)] = run_replicate(config, rep);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SimulationReport report;
  report.config = config;
  for (auto& rep : per_rep) {
    for (auto& r : rep) report.replicates.push_back(std::move(r));
  }

  for (const EstimatorKind kind : config.estimators) {
    EstimatorSummary s;
    s.estimator = kind;
    double bias_sum = 0.0, se_sum = 0.0, true_sum = 0.0;
    double covered = 0.0;
    std::vector<double> errors;
    for (const auto& r : report.replicates) {
      if (r.estimator != kind) continue;
      if (r.failed) {
        ++s.failures;
        continue;
      }
      ++s.reps_used;
      errors.push_back(r.psi_hat - r.true_psi);
      bias_sum += r.psi_hat - r.true_psi;
      se_sum += r.se_hat;
      true_sum += r.true_psi;
      covered += r.covered ? 1.0 : 0.0;
    }
    if (s.reps_used > 0) {
      const double m = static_cast<double>(s.reps_used);
      s.mean_bias = bias_sum / m;
      s.mean_se = se_sum / m;
      s.coverage = covered / m;
      s.mean_true_psi = true_sum / m;
      if (s.reps_used > 1) {
        double ss = 0.0;
        for (const double e : errors) ss += (e - s.mean_bias) * (e - s.mean_bias);
        s.empirical_sd = std::sqrt(ss / (m - 1.0));
      }
    } else {
      s.mean_bias = kNaN;
      s.empirical_sd = kNaN;
      s.mean_se = kNaN;
      s.coverage = kNaN;
      s.mean_true_psi = kNaN;
    }
    report.estimators.push_back(s);
  }
  return report;
}

}  // namespace netinf
