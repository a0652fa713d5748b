#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "netinf/dataset.hpp"
#include "netinf/graph.hpp"
#include "netinf/rng.hpp"

namespace testutil {

inline netinf::AdjacencyMatrix from_dense(const Eigen::MatrixXd& m, bool directed = false) {
  std::vector<netinf::AdjacencyMatrix::Triplet> triplets;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) triplets.emplace_back(i, j, m(i, j));
    }
  }
  return netinf::AdjacencyMatrix(m.rows(), triplets, directed);
}

// 3-node example used across modules: F = (1,3,2), F_bar = 2, W = 6.
inline netinf::AdjacencyMatrix three_node_graph() {
  Eigen::MatrixXd m(3, 3);
  m << 0, 1, 0,
       1, 0, 2,
       0, 2, 0;
  return from_dense(m);
}

// Disjoint-pairs matching: eigenvalues are +/-1, so a*I + b*G stays positive
// definite whenever a > |b|.
inline netinf::AdjacencyMatrix matching_graph(Eigen::Index n) {
  std::vector<netinf::AdjacencyMatrix::Triplet> triplets;
  for (Eigen::Index i = 0; i + 1 < n; i += 2) {
    triplets.emplace_back(i, i + 1, 1.0);
    triplets.emplace_back(i + 1, i, 1.0);
  }
  return netinf::AdjacencyMatrix(n, triplets, false);
}

// Disjoint cliques of size m (n divisible by m): eigenvalues in [-1, m-1].
inline netinf::AdjacencyMatrix clique_graph(Eigen::Index n, Eigen::Index m) {
  std::vector<netinf::AdjacencyMatrix::Triplet> triplets;
  for (Eigen::Index start = 0; start < n; start += m) {
    for (Eigen::Index i = start; i < start + m; ++i) {
      for (Eigen::Index j = start; j < start + m; ++j) {
        if (i != j) triplets.emplace_back(i, j, 1.0);
      }
    }
  }
  return netinf::AdjacencyMatrix(n, triplets, false);
}

// Brute-force least squares via explicit normal equations; the independent
// oracle for the QR-based fitter.
struct NormalEquationsFit {
  Eigen::VectorXd beta;
  Eigen::MatrixXd vcov;
  Eigen::VectorXd residuals;
  double sigma2 = 0.0;
};

inline NormalEquationsFit normal_equations(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  NormalEquationsFit fit;
  const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
  fit.beta = xtx_inv * x.transpose() * y;
  fit.residuals = y - x * fit.beta;
  fit.sigma2 = fit.residuals.squaredNorm() / static_cast<double>(x.rows() - x.cols());
  fit.vcov = fit.sigma2 * xtx_inv;
  return fit;
}

inline Eigen::VectorXd random_normal(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline Eigen::MatrixXd random_normal_matrix(Eigen::Index n, Eigen::Index k, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = normal(rng);
  }
  return m;
}

// Noise-free interference dataset whose omitted-exposure projection onto the
// treatment direction is exactly zero: the naive fit then recovers beta_a = 1
// exactly while the full design keeps its spillover columns. The treatment is
// base + t * dir with t solving the quadratic <M(A), G(A)> = 0, where M
// projects out [1 L].
struct NoiseFreeDraw {
  netinf::Dataset data;
  double f_bar = 0.0;
  bool ok = false;
};

inline NoiseFreeDraw noise_free_orthogonal_dgp(const netinf::AdjacencyMatrix& g,
                                               const Eigen::MatrixXd& covariates,
                                               std::mt19937_64& rng) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const Eigen::Index n = g.size();
  NoiseFreeDraw draw;

  MatrixXd xl(n, covariates.cols() + 1);
  xl.col(0).setOnes();
  xl.rightCols(covariates.cols()) = covariates;
  const MatrixXd proj = xl * (xl.transpose() * xl).inverse() * xl.transpose();
  const MatrixXd m = MatrixXd::Identity(n, n) - proj;
  const MatrixXd mg = m * g.dense();

  VectorXd theta(covariates.cols());
  for (Eigen::Index c = 0; c < theta.size(); ++c) theta[c] = static_cast<double>(c + 1);
  const VectorXd base = covariates * theta + random_normal(n, rng);

  for (int attempt = 0; attempt < 64; ++attempt) {
    const VectorXd dir = random_normal(n, rng);
    const double qa = dir.dot(mg * dir);
    const double qb = dir.dot(mg * base) + base.dot(mg * dir);
    const double qc = base.dot(mg * base);
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0 || qa == 0.0) continue;
    const double t = (-qb + std::sqrt(disc)) / (2.0 * qa);
    const VectorXd a = base + t * dir;

    const VectorXd ga = netinf::exposure(g, a);
    draw.data.treatment = a;
    draw.data.outcome = a + covariates * theta + ga;
    draw.data.covariates = covariates;
    draw.data.covariate_names.clear();
    for (Eigen::Index c = 0; c < covariates.cols(); ++c) {
      draw.data.covariate_names.push_back("L" + std::to_string(c + 1));
    }
    draw.f_bar = netinf::degree_summary(g).mean_degree;
    draw.ok = true;
    return draw;
  }
  return draw;
}

}  // namespace testutil
