#include "netinf/regress.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "netinf/errors.hpp"

namespace netinf {

namespace {

constexpr double kPivotTolerance = 1e-10;  // relative to the leading pivot

struct KeptColumns {
  std::vector<Eigen::Index> kept;
  std::vector<DesignColumn> kept_meta;
  std::vector<DesignColumn> dropped_meta;
  Eigen::MatrixXd X;  // kept columns, original order
};

// Rank-revealing pass: column-pivoted QR, drop pivots below
// kPivotTolerance * |leading pivot|.
KeptColumns select_columns(const DesignMatrix& design) {
  const Eigen::Index k = design.n_cols();
  if (k == 0) throw ValidationError("design matrix has no columns");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.X);
  qr.setThreshold(kPivotTolerance);
  const Eigen::Index rank = qr.rank();

  const auto& piv = qr.colsPermutation().indices();
  std::vector<bool> keep(static_cast<std::size_t>(k), false);
  for (Eigen::Index j = 0; j < rank; ++j) {
    keep[static_cast<std::size_t>(piv(j))] = true;
  }

  KeptColumns out;
  out.X.resize(design.n_rows(), rank);
  Eigen::Index c = 0;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (keep[static_cast<std::size_t>(j)]) {
      out.X.col(c++) = design.X.col(j);
      out.kept.push_back(j);
      out.kept_meta.push_back(design.columns[static_cast<std::size_t>(j)]);
    } else {
      out.dropped_meta.push_back(design.columns[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

double gaussian_loglik(Eigen::Index n, double rss, double log_det = 0.0) {
  if (rss <= 0.0) return std::numeric_limits<double>::infinity();
  const double s2 = rss / static_cast<double>(n);
  return -0.5 * (static_cast<double>(n) * (std::log(2.0 * std::numbers::pi * s2) + 1.0) + log_det);
}

// Weighted least squares in an orthogonally transformed basis. Returns the
// pieces every GLS path needs for one set of weights d (Var = diag(d)).
struct WlsFit {
  Eigen::VectorXd beta;
  Eigen::MatrixXd xtx_inv;  // (X' D^-1 X)^-1
  Eigen::VectorXd leverages;
  double rss_weighted = 0.0;
};

WlsFit weighted_fit(const Eigen::MatrixXd& xt, const Eigen::VectorXd& yt,
                    const Eigen::VectorXd& d) {
  const Eigen::ArrayXd inv_sqrt = d.array().rsqrt();
  const Eigen::MatrixXd xw = inv_sqrt.matrix().asDiagonal() * xt;
  const Eigen::VectorXd yw = inv_sqrt.matrix().asDiagonal() * yt;

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(xw);
  WlsFit fit;
  fit.beta = qr.solve(yw);
  fit.rss_weighted = (yw - xw * fit.beta).squaredNorm();

  const Eigen::MatrixXd r =
      qr.matrixQR().topRows(xw.cols()).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(xw.cols(), xw.cols()));
  fit.xtx_inv = r_inv * r_inv.transpose();

  Eigen::MatrixXd thin_q = qr.householderQ() * Eigen::MatrixXd::Identity(xw.rows(), xw.cols());
  fit.leverages = thin_q.rowwise().squaredNorm();
  return fit;
}

double profile_loglik(const Eigen::MatrixXd& xt, const Eigen::VectorXd& yt,
                      const Eigen::VectorXd& lambda, double theta) {
  const Eigen::Index n = yt.size();
  const Eigen::VectorXd d = (1.0 + theta * lambda.array()).matrix();
  if (d.minCoeff() <= 0.0) return -std::numeric_limits<double>::infinity();
  const WlsFit fit = weighted_fit(xt, yt, d);
  return gaussian_loglik(n, fit.rss_weighted, d.array().log().sum());
}

// Golden-section maximization to `tol` absolute on theta.
template <typename F>
double golden_section(const F& f, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

void check_symmetric_graph(const AdjacencyMatrix& g) {
  if (g.directed()) {
    throw ValidationError("network GLS needs an undirected (symmetric) graph");
  }
}

Eigen::MatrixXd symmetrize(Eigen::MatrixXd m) {
  return 0.5 * (m + m.transpose());
}

}  // namespace

VcovKind vcov_from_string(const std::string& name) {
  if (name == "classical") return VcovKind::classical;
  if (name == "hc0") return VcovKind::hc0;
  if (name == "hc1") return VcovKind::hc1;
  if (name == "hc2") return VcovKind::hc2;
  if (name == "hc3") return VcovKind::hc3;
  if (name == "hc4") return VcovKind::hc4;
  if (name == "hc5") return VcovKind::hc5;
  if (name == "gls") return VcovKind::gls;
  throw ValidationError("unknown vcov kind '" + name + "'");
}

std::string vcov_to_string(VcovKind kind) {
  switch (kind) {
    case VcovKind::classical: return "classical";
    case VcovKind::hc0: return "hc0";
    case VcovKind::hc1: return "hc1";
    case VcovKind::hc2: return "hc2";
    case VcovKind::hc3: return "hc3";
    case VcovKind::hc4: return "hc4";
    case VcovKind::hc5: return "hc5";
    case VcovKind::gls: return "gls";
  }
  return "?";
}

std::optional<Eigen::Index> FitResult::coef_index(ColumnRole role, int network) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].role == role && (network < 0 || columns[i].network == network)) {
      return static_cast<Eigen::Index>(i);
    }
  }
  return std::nullopt;
}

FitResult fit_ols(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::Index n = design.n_rows();
  if (y.size() != n) throw ValidationError("outcome length does not match design rows");

  KeptColumns sel = select_columns(design);
  const Eigen::Index rank = sel.X.cols();
  if (n <= rank) {
    throw NumericError("no residual degrees of freedom: n = " + std::to_string(n) +
                       " <= rank(X) = " + std::to_string(rank));
  }

  const WlsFit wls = weighted_fit(sel.X, y, Eigen::VectorXd::Ones(n));

  FitResult fit;
  fit.beta = wls.beta;
  fit.residuals = y - sel.X * wls.beta;
  fit.leverages = wls.leverages.cwiseMax(0.0).cwiseMin(1.0);
  const double rss = fit.residuals.squaredNorm();
  fit.sigma2 = rss / static_cast<double>(n - rank);
  fit.vcov = symmetrize(fit.sigma2 * wls.xtx_inv);
  fit.rho = 0.0;
  fit.theta = 0.0;
  fit.loglik = gaussian_loglik(n, rss);
  fit.n = n;
  fit.k = rank;
  fit.columns = std::move(sel.kept_meta);
  fit.dropped = std::move(sel.dropped_meta);
  fit.kept_indices = std::move(sel.kept);
  fit.n_variance_params = 1;
  return fit;
}

std::pair<double, double> gls_theta_interval(const AdjacencyMatrix& g) {
  check_symmetric_graph(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.dense(), Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  const double inf = std::numeric_limits<double>::infinity();
  // zero trace: a nonzero symmetric hollow matrix has eigenvalues of both signs
  return {lmax > 0.0 ? -1.0 / lmax : -inf, lmin < 0.0 ? -1.0 / lmin : inf};
}

FitResult fit_gls_network(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y,
                          const AdjacencyMatrix& g) {
  check_symmetric_graph(g);
  const Eigen::Index n = design.n_rows();
  if (y.size() != n) throw ValidationError("outcome length does not match design rows");
  if (g.size() != n) throw ValidationError("graph node count does not match design rows");

  KeptColumns sel = select_columns(design);
  const Eigen::Index rank = sel.X.cols();
  if (n <= rank) {
    throw NumericError("no residual degrees of freedom: n = " + std::to_string(n) +
                       " <= rank(X) = " + std::to_string(rank));
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.dense());
  if (eig.info() != Eigen::Success) {
    throw NumericError("eigendecomposition of the interference graph failed");
  }
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const Eigen::MatrixXd xt = eig.eigenvectors().transpose() * sel.X;
  const Eigen::VectorXd yt = eig.eigenvectors().transpose() * y;

  const double lambda_scale = lambda.cwiseAbs().maxCoeff();
  double theta_hat = 0.0;
  double theta_lo = -std::numeric_limits<double>::infinity();
  double theta_hi = std::numeric_limits<double>::infinity();

  if (lambda_scale > 1e-12) {
    std::tie(theta_lo, theta_hi) = [&] {
      const double lmin = lambda.minCoeff(), lmax = lambda.maxCoeff();
      return std::pair<double, double>{-1.0 / lmax, -1.0 / lmin};
    }();
    const double width = theta_hi - theta_lo;
    if (!(width > 1e-12)) {
      throw NumericError("no feasible theta interval for I + theta*G");
    }
    const double margin = 1e-7 * width;
    const double lo = theta_lo + margin, hi = theta_hi - margin;

    auto loglik_at = [&](double t) { return profile_loglik(xt, yt, lambda, t); };

    // coarse interior grid, then golden section around the best cell
    constexpr int grid_points = 5;
    double best_grid = lo;
    double best_value = -std::numeric_limits<double>::infinity();
    std::array<double, grid_points + 2> grid;
    grid.front() = lo;
    grid.back() = hi;
    for (int j = 1; j <= grid_points; ++j) {
      grid[static_cast<std::size_t>(j)] = theta_lo + width * j / (grid_points + 1);
    }
    int best_j = 1;
    for (int j = 1; j <= grid_points; ++j) {
      const double value = loglik_at(grid[static_cast<std::size_t>(j)]);
      if (value > best_value) {
        best_value = value;
        best_j = j;
        best_grid = grid[static_cast<std::size_t>(j)];
      }
    }
    const double bracket_lo = grid[static_cast<std::size_t>(best_j - 1)];
    const double bracket_hi = grid[static_cast<std::size_t>(best_j + 1)];
    theta_hat = golden_section(loglik_at, bracket_lo, bracket_hi, 1e-6);
    if (loglik_at(best_grid) > loglik_at(theta_hat)) theta_hat = best_grid;
    if (loglik_at(0.0) >= loglik_at(theta_hat)) theta_hat = 0.0;  // never worse than OLS
  }

  const Eigen::VectorXd d = (1.0 + theta_hat * lambda.array()).matrix();
  const WlsFit wls = weighted_fit(xt, yt, d);

  FitResult fit;
  fit.beta = wls.beta;
  fit.residuals = y - sel.X * wls.beta;
  fit.leverages = wls.leverages.cwiseMax(0.0).cwiseMin(1.0);
  fit.sigma2 = wls.rss_weighted / static_cast<double>(n);  // ML profile estimate
  fit.vcov = symmetrize(fit.sigma2 * wls.xtx_inv);
  fit.theta = theta_hat;
  fit.rho = fit.sigma2 * theta_hat;
  fit.loglik = gaussian_loglik(n, wls.rss_weighted, d.array().log().sum());
  fit.n = n;
  fit.k = rank;
  fit.columns = std::move(sel.kept_meta);
  fit.dropped = std::move(sel.dropped_meta);
  fit.kept_indices = std::move(sel.kept);
  fit.n_variance_params = 2;  // sigma2 and theta
  fit.theta_lo = theta_lo;
  fit.theta_hi = theta_hi;
  return fit;
}

FitResult fit_gls_known(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y,
                        const AdjacencyMatrix& g, double a, double b) {
  check_symmetric_graph(g);
  const Eigen::Index n = design.n_rows();
  if (y.size() != n) throw ValidationError("outcome length does not match design rows");
  if (g.size() != n) throw ValidationError("graph node count does not match design rows");
  if (!(a > 0.0)) throw ValidationError("known covariance needs a > 0");

  KeptColumns sel = select_columns(design);
  const Eigen::Index rank = sel.X.cols();
  if (n <= rank) {
    throw NumericError("no residual degrees of freedom: n = " + std::to_string(n) +
                       " <= rank(X) = " + std::to_string(rank));
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.dense());
  const Eigen::VectorXd d = (a + b * eig.eigenvalues().array()).matrix();
  if (d.minCoeff() <= 0.0) {
    throw NumericError("known covariance a*I + b*G is not positive definite");
  }
  const Eigen::MatrixXd xt = eig.eigenvectors().transpose() * sel.X;
  const Eigen::VectorXd yt = eig.eigenvectors().transpose() * y;
  const WlsFit wls = weighted_fit(xt, yt, d);

  FitResult fit;
  fit.beta = wls.beta;
  fit.residuals = y - sel.X * wls.beta;
  fit.leverages = wls.leverages.cwiseMax(0.0).cwiseMin(1.0);
  fit.sigma2 = a;
  fit.vcov = symmetrize(wls.xtx_inv);  // exact: (X' Sigma^-1 X)^-1
  fit.theta = b / a;
  fit.rho = b;
  fit.loglik = -0.5 * (static_cast<double>(n) * std::log(2.0 * std::numbers::pi) +
                       d.array().log().sum() + wls.rss_weighted);
  fit.n = n;
  fit.k = rank;
  fit.columns = std::move(sel.kept_meta);
  fit.dropped = std::move(sel.dropped_meta);
  fit.kept_indices = std::move(sel.kept);
  fit.n_variance_params = 0;
  return fit;
}

Eigen::MatrixXd sandwich_vcov(const FitResult& fit, const DesignMatrix& design,
                              const VcovSpec& spec) {
  if (spec.kind == VcovKind::classical) return fit.vcov;
  if (spec.kind == VcovKind::gls) {
    throw ValidationError("gls is a fitting method; use fit_gls_network, not sandwich_vcov");
  }
  if (fit.n_variance_params != 1 || fit.theta != 0.0) {
    throw ValidationError("sandwich covariances need an OLS fit");
  }
  if (design.n_rows() != fit.n) {
    throw ValidationError("design does not match the fit");
  }

  const Eigen::Index n = fit.n;
  const Eigen::Index k = fit.k;
  Eigen::MatrixXd x(n, k);
  for (Eigen::Index c = 0; c < k; ++c) x.col(c) = design.X.col(fit.kept_indices[static_cast<std::size_t>(c)]);

  const Eigen::ArrayXd e2 = fit.residuals.array().square();
  const Eigen::ArrayXd h = fit.leverages.array();
  const double h_bar = h.mean();
  const double h_max = h.maxCoeff();

  const bool needs_leverage = spec.kind == VcovKind::hc2 || spec.kind == VcovKind::hc3 ||
                              spec.kind == VcovKind::hc4 || spec.kind == VcovKind::hc5;
  if (needs_leverage) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (h(i) >= 1.0 - 1e-12) {
        throw NumericError("leverage is 1 at unit " + std::to_string(i) +
                           "; " + vcov_to_string(spec.kind) + " weights are undefined");
      }
    }
  }

  Eigen::ArrayXd omega;
  switch (spec.kind) {
    case VcovKind::hc0:
      omega = e2;
      break;
    case VcovKind::hc1:
      omega = e2 * (static_cast<double>(n) / static_cast<double>(n - k));
      break;
    case VcovKind::hc2:
      omega = e2 / (1.0 - h);
      break;
    case VcovKind::hc3:
      omega = e2 / (1.0 - h).square();
      break;
    case VcovKind::hc4: {
      const Eigen::ArrayXd delta = (h / h_bar).min(4.0);
      omega = e2 / (1.0 - h).pow(delta);
      break;
    }
    case VcovKind::hc5: {
      const double cap = std::max(4.0, spec.hc5_k * h_max / h_bar);
      const Eigen::ArrayXd delta = (h / h_bar).min(cap);
      omega = e2 / (1.0 - h).pow(delta).sqrt();
      break;
    }
    default:
      throw ValidationError("unhandled vcov kind");
  }

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd bread = r_inv * r_inv.transpose();
  const Eigen::MatrixXd meat = x.transpose() * omega.matrix().asDiagonal() * x;
  return symmetrize(bread * meat * bread);
}

double aic(const FitResult& fit) {
  if (!std::isfinite(fit.loglik)) {
    throw NumericError("degenerate likelihood (zero residual variance); AIC is undefined");
  }
  return -2.0 * fit.loglik + 2.0 * (static_cast<double>(fit.k) + fit.n_variance_params);
}

}  // namespace netinf
