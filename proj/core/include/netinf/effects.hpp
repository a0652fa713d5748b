#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "netinf/dataset.hpp"
#include "netinf/graph.hpp"
#include "netinf/regress.hpp"

namespace netinf {

// Total-effect estimate with its plug-in variance and Wald interval.
struct EffectEstimate {
  std::string estimator;  // "naive" | "full" | "partial" | "multi"
  double psi = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double alpha = 0.05;
  double beta_a = 0.0;             // within-unit coefficient
  std::vector<double> beta_as;     // spillover coefficient per network
  std::vector<double> f_bar;       // mean weighted degree per network
  std::string vcov;                // covariance provenance
  Eigen::Index n = 0;
  std::vector<std::string> dropped;
  std::vector<std::string> warnings;
  std::map<std::string, double> diagnostics;  // optional extras (never in CI)
};

// psi = beta_a + sum_k beta_as[k] * f_bar[k].
double plug_in_psi(double beta_a, std::span<const double> beta_as, std::span<const double> f_bar);

// c' V c with contrast c = (1, f_bar_1, ..., f_bar_K); V is the covariance
// of (beta_a, beta_as_1, ..., beta_as_K) and must be symmetric PSD.
double plug_in_variance(const Eigen::Ref<const Eigen::MatrixXd>& vcov_sub,
                        std::span<const double> f_bar);

// Standard-normal quantile, rational approximation polished to ~1e-12
// (documented tolerance 1e-9).
double normal_quantile(double p);

// psi -/+ z_{1-alpha/2} * sqrt(variance).
std::pair<double, double> wald_ci(double psi, double variance, double alpha);

// Fits the interference-aware design over one or more graphs and assembles
// the plug-in total effect. vcov = gls fits against graphs[0]; dropped
// spillover columns contribute zero coefficient and covariance, with a
// warning.
EffectEstimate estimate_total_known(const Dataset& data,
                                    const std::vector<AdjacencyMatrix>& graphs,
                                    const VcovSpec& vcov, double alpha = 0.05,
                                    bool include_neighbor_intercept = false,
                                    bool include_intercept = true);

// Degree-only estimator: fits Y ~ 1 + A + L + F and returns
// psi = beta_a (1 + F_bar) with variance (1 + F_bar)^2 Var(beta_a).
EffectEstimate estimate_partially_known(const Dataset& data,
                                        const Eigen::Ref<const Eigen::VectorXd>& degrees,
                                        const VcovSpec& vcov, double alpha = 0.05);

// Interference-ignoring estimator: Y ~ 1 + A + L, psi = beta_a.
EffectEstimate estimate_naive(const Dataset& data, const VcovSpec& vcov, double alpha = 0.05,
                              bool include_intercept = true);

// Expected shortfall of the plug-in variance when the graph is a random
// directed Erdos-Renyi draw: -sum_k beta_as[k]^2 * n(n-1)p(1-p) / n^2.
// Diagnostic only; never folded into confidence intervals.
double er_variance_bias(std::span<const double> beta_as, Eigen::Index n, double p);

}  // namespace netinf
