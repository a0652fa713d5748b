#include "netinf/effects.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "netinf/design.hpp"
#include "netinf/errors.hpp"

namespace netinf {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie strictly between 0 and 1");
  }
}

// Inverse standard-normal CDF: Acklam's rational approximation followed by
// one Halley step against erfc. Absolute error well below the documented
// 1e-9 tolerance.
double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

struct FitWithVcov {
  FitResult fit;
  Eigen::MatrixXd vcov;
};

FitWithVcov fit_design(const DesignMatrix& design, const Eigen::VectorXd& y,
                       const VcovSpec& spec, const AdjacencyMatrix* gls_graph) {
  FitWithVcov out;
  if (spec.kind == VcovKind::gls) {
    if (gls_graph == nullptr) {
      throw ValidationError("gls vcov needs the full interference graph");
    }
    out.fit = spec.gls_known
                  ? fit_gls_known(design, y, *gls_graph, spec.gls_known->first,
                                  spec.gls_known->second)
                  : fit_gls_network(design, y, *gls_graph);
    out.vcov = out.fit.vcov;
  } else {
    out.fit = fit_ols(design, y);
    out.vcov = spec.kind == VcovKind::classical ? out.fit.vcov
                                                : sandwich_vcov(out.fit, design, spec);
  }
  return out;
}

std::vector<std::string> dropped_names(const DesignMatrix& design, const FitResult& fit) {
  std::vector<std::string> names;
  for (const auto& col : design.dropped) names.push_back(col.name);
  for (const auto& col : fit.dropped) names.push_back(col.name);
  return names;
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("normal quantile needs p strictly between 0 and 1");
  }
  double x = acklam(p);
  const double err = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = err * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

std::pair<double, double> wald_ci(double psi, double variance, double alpha) {
  check_alpha(alpha);
  if (variance < 0.0) throw ValidationError("variance must be nonnegative");
  const double half_width = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(variance);
  return {psi - half_width, psi + half_width};
}

double plug_in_psi(double beta_a, std::span<const double> beta_as,
                   std::span<const double> f_bar) {
  if (beta_as.size() != f_bar.size()) {
    throw ValidationError("spillover coefficients and mean degrees differ in length");
  }
  double psi = beta_a;
  for (std::size_t k = 0; k < beta_as.size(); ++k) psi += beta_as[k] * f_bar[k];
  return psi;
}

double plug_in_variance(const Eigen::Ref<const Eigen::MatrixXd>& vcov_sub,
                        std::span<const double> f_bar) {
  const Eigen::Index dim = vcov_sub.rows();
  if (vcov_sub.cols() != dim || dim != static_cast<Eigen::Index>(f_bar.size()) + 1) {
    throw ValidationError("covariance block must be (K+1) x (K+1) for K mean degrees");
  }
  const double scale = std::max(1.0, vcov_sub.cwiseAbs().maxCoeff());
  if ((vcov_sub - vcov_sub.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw NumericError("coefficient covariance block is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(vcov_sub, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-8 * scale) {
    throw NumericError("coefficient covariance block is not positive semidefinite");
  }
  Eigen::VectorXd contrast(dim);
  contrast[0] = 1.0;
  for (Eigen::Index k = 1; k < dim; ++k) contrast[k] = f_bar[static_cast<std::size_t>(k - 1)];
  return std::max(0.0, contrast.dot(vcov_sub * contrast));
}

EffectEstimate estimate_total_known(const Dataset& data,
                                    const std::vector<AdjacencyMatrix>& graphs,
                                    const VcovSpec& vcov, double alpha,
                                    bool include_neighbor_intercept, bool include_intercept) {
  check_alpha(alpha);
  if (graphs.empty()) {
    throw ValidationError("totally-known estimator needs at least one graph");
  }
  const DesignMatrix design = build_design(data, graphs, DesignSpec::full,
                                           include_neighbor_intercept, include_intercept);
  const FitWithVcov fitted = fit_design(design, data.outcome, vcov, &graphs[0]);
  const FitResult& fit = fitted.fit;

  EffectEstimate est;
  est.estimator = graphs.size() > 1 ? "multi" : "full";
  est.alpha = alpha;
  est.vcov = vcov_to_string(vcov.kind);
  est.n = data.n();
  est.dropped = dropped_names(design, fit);

  const auto a_idx = fit.coef_index(ColumnRole::treatment);
  if (!a_idx) {
    throw NumericError("treatment column was dropped for collinearity; "
                       "the within-unit effect is not identified");
  }
  est.beta_a = fit.beta[*a_idx];

  const std::size_t n_nets = graphs.size();
  est.beta_as.resize(n_nets, 0.0);
  est.f_bar.resize(n_nets, 0.0);
  std::vector<Eigen::Index> block{*a_idx};  // -1 marks a dropped spillover column
  for (std::size_t k = 0; k < n_nets; ++k) {
    est.f_bar[k] = degree_summary(graphs[k]).mean_degree;
    const auto s_idx = fit.coef_index(ColumnRole::exposure_treatment, static_cast<int>(k + 1));
    if (s_idx) {
      est.beta_as[k] = fit.beta[*s_idx];
      block.push_back(*s_idx);
    } else {
      block.push_back(-1);
      est.warnings.push_back("spillover column G" + std::to_string(k + 1) +
                             ":A dropped; coefficient treated as 0");
    }
  }

  const Eigen::Index dim = static_cast<Eigen::Index>(block.size());
  Eigen::MatrixXd vsub = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (block[static_cast<std::size_t>(r)] >= 0 && block[static_cast<std::size_t>(c)] >= 0) {
        vsub(r, c) = fitted.vcov(block[static_cast<std::size_t>(r)],
                                 block[static_cast<std::size_t>(c)]);
      }
    }
  }

  est.psi = plug_in_psi(est.beta_a, est.beta_as, est.f_bar);
  const double variance = plug_in_variance(vsub, est.f_bar);
  est.se = std::sqrt(variance);
  std::tie(est.ci_lo, est.ci_hi) = wald_ci(est.psi, variance, alpha);
  return est;
}

EffectEstimate estimate_partially_known(const Dataset& data,
                                        const Eigen::Ref<const Eigen::VectorXd>& degrees,
                                        const VcovSpec& vcov, double alpha) {
  check_alpha(alpha);
  if (degrees.size() != data.n()) {
    throw ValidationError("degree vector length does not match dataset rows");
  }
  if (degrees.minCoeff() < 0.0) {
    throw ValidationError("weighted degrees must be nonnegative");
  }
  if (vcov.kind == VcovKind::gls) {
    throw ValidationError("gls vcov needs the full graph; the degree-only estimator has none");
  }
  const DesignMatrix design = build_partial_design(data, degrees);
  const FitWithVcov fitted = fit_design(design, data.outcome, vcov, nullptr);
  const FitResult& fit = fitted.fit;

  EffectEstimate est;
  est.estimator = "partial";
  est.alpha = alpha;
  est.vcov = vcov_to_string(vcov.kind);
  est.n = data.n();
  est.dropped = dropped_names(design, fit);
  for (const auto& col : design.dropped) {
    if (col.role == ColumnRole::degree) {
      est.warnings.push_back("degree column is constant; dropped as collinear with the intercept");
    }
  }

  const auto a_idx = fit.coef_index(ColumnRole::treatment);
  if (!a_idx) {
    throw NumericError("treatment column was dropped for collinearity; "
                       "the within-unit effect is not identified");
  }
  const double f_bar = degrees.mean();
  est.beta_a = fit.beta[*a_idx];
  est.beta_as = {est.beta_a};  // equal-effects assumption
  est.f_bar = {f_bar};
  est.psi = est.beta_a * (1.0 + f_bar);
  const double variance = (1.0 + f_bar) * (1.0 + f_bar) * fitted.vcov(*a_idx, *a_idx);
  est.se = std::sqrt(variance);
  std::tie(est.ci_lo, est.ci_hi) = wald_ci(est.psi, variance, alpha);
  return est;
}

EffectEstimate estimate_naive(const Dataset& data, const VcovSpec& vcov, double alpha,
                              bool include_intercept) {
  check_alpha(alpha);
  if (vcov.kind == VcovKind::gls) {
    throw ValidationError("gls vcov needs an interference graph; the naive estimator has none");
  }
  const DesignMatrix design = build_design(data, {}, DesignSpec::naive, false, include_intercept);
  const FitWithVcov fitted = fit_design(design, data.outcome, vcov, nullptr);
  const FitResult& fit = fitted.fit;

  EffectEstimate est;
  est.estimator = "naive";
  est.alpha = alpha;
  est.vcov = vcov_to_string(vcov.kind);
  est.n = data.n();
  est.dropped = dropped_names(design, fit);

  const auto a_idx = fit.coef_index(ColumnRole::treatment);
  if (!a_idx) {
    throw NumericError("treatment column was dropped for collinearity; "
                       "the within-unit effect is not identified");
  }
  est.beta_a = fit.beta[*a_idx];
  est.psi = est.beta_a;
  const double variance = fitted.vcov(*a_idx, *a_idx);
  est.se = std::sqrt(variance);
  std::tie(est.ci_lo, est.ci_hi) = wald_ci(est.psi, variance, alpha);
  return est;
}

double er_variance_bias(std::span<const double> beta_as, Eigen::Index n, double p) {
  if (n < 2) throw ValidationError("variance-bias diagnostic needs n >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p must lie in [0, 1]");
  const double var_w = static_cast<double>(n) * static_cast<double>(n - 1) * p * (1.0 - p);
  double total = 0.0;
  for (const double beta : beta_as) total += beta * beta;
  return -total * var_w / (static_cast<double>(n) * static_cast<double>(n));
}

}  // namespace netinf
