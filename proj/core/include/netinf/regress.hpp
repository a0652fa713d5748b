#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "netinf/design.hpp"
#include "netinf/graph.hpp"

namespace netinf {

enum class VcovKind { classical, hc0, hc1, hc2, hc3, hc4, hc5, gls };

VcovKind vcov_from_string(const std::string& name);
std::string vcov_to_string(VcovKind kind);

struct VcovSpec {
  VcovKind kind = VcovKind::classical;
  double hc5_k = 0.7;
  // For kind == gls: pin the error covariance to a*I + b*G instead of
  // profiling it out of the likelihood.
  std::optional<std::pair<double, double>> gls_known;
};

// A fitted linear model. `beta`, `vcov` and `columns` cover only the columns
// that survived the rank check; collinear columns are listed in `dropped`
// and get no coefficient.
struct FitResult {
  Eigen::VectorXd beta;
  Eigen::MatrixXd vcov;
  Eigen::VectorXd residuals;   // y - X beta, original scale
  Eigen::VectorXd leverages;   // hat-matrix diagonal (weighted space for GLS)
  double sigma2 = 0.0;         // OLS: RSS/(n-rank); GLS: ML profile estimate
  double rho = 0.0;            // network correlation sigma2*theta; 0 for OLS
  double loglik = 0.0;         // Gaussian ML log-likelihood; +inf if RSS == 0
  Eigen::Index n = 0;
  Eigen::Index k = 0;          // number of estimated coefficients (rank)
  std::vector<DesignColumn> columns;
  std::vector<DesignColumn> dropped;
  std::vector<Eigen::Index> kept_indices;  // into the design's columns
  int n_variance_params = 1;   // sigma2 (and theta for profiled GLS)
  double theta = 0.0;          // GLS correlation parameter in I + theta*G
  double theta_lo = 0.0;       // feasible theta interval (GLS fits only)
  double theta_hi = 0.0;

  std::optional<Eigen::Index> coef_index(ColumnRole role, int network = -1) const;
};

// Least squares via column-pivoted QR; columns whose pivot falls below
// 1e-10 times the leading pivot are dropped and reported.
FitResult fit_ols(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y);

// Gaussian ML for Var(eps) = sigma2 * (I + theta G), sigma2 profiled out in
// closed form. theta is searched over the interval where I + theta G is
// positive definite; requires an undirected G.
FitResult fit_gls_network(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y,
                          const AdjacencyMatrix& g);

// GLS with a fully known error covariance a*I + b*G (no variance parameters
// estimated); vcov is (X' Sigma^-1 X)^-1 exactly.
FitResult fit_gls_known(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y,
                        const AdjacencyMatrix& g, double a, double b);

// Feasible theta interval (-1/lambda_max, -1/lambda_min) for I + theta G.
std::pair<double, double> gls_theta_interval(const AdjacencyMatrix& g);

// Heteroscedasticity-consistent covariance of an OLS fit:
// (X'X)^-1 X' diag(omega) X (X'X)^-1 with omega per kind. `classical`
// returns the fit's own covariance.
Eigen::MatrixXd sandwich_vcov(const FitResult& fit, const DesignMatrix& design,
                              const VcovSpec& spec);

// -2 loglik + 2 (k + number of variance parameters), ML likelihoods.
double aic(const FitResult& fit);

}  // namespace netinf
