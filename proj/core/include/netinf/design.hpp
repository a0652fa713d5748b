#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "netinf/dataset.hpp"
#include "netinf/graph.hpp"

namespace netinf {

enum class ColumnRole {
  intercept,
  treatment,
  covariate,
  exposure_treatment,  // G_k * A
  exposure_covariate,  // G_k * L_j
  degree,              // F_k (row sums; the neighbor-intercept term G_k * 1)
};

struct DesignColumn {
  std::string name;
  ColumnRole role;
  int network = -1;  // 1-based network index for exposure/degree columns
};

// Regression design with labeled columns. Exact-zero columns never survive
// construction; they are recorded in `dropped` instead (a null graph makes
// every exposure column vanish, which is legitimate input).
struct DesignMatrix {
  Eigen::MatrixXd X;
  std::vector<DesignColumn> columns;
  std::vector<DesignColumn> dropped;

  Eigen::Index n_rows() const { return X.rows(); }
  Eigen::Index n_cols() const { return X.cols(); }

  // Position of the first column with this role (and network, if >= 0).
  std::optional<Eigen::Index> find(ColumnRole role, int network = -1) const;
};

enum class DesignSpec { naive, full, degree_only };

// naive:       [1 A L]
// full:        [1 A L G1*A G1*L ... GK*A GK*L] (+ F_k when
//              include_neighbor_intercept)
// degree_only: [1 A L F] with F taken from the single supplied graph
// The intercept is prepended unless include_intercept is false.
DesignMatrix build_design(const Dataset& data, const std::vector<AdjacencyMatrix>& graphs,
                          DesignSpec spec, bool include_neighbor_intercept = false,
                          bool include_intercept = true);

// [1 A L F] from an observed degree vector. A constant degree column is
// collinear with the intercept: it is dropped up front and reported via
// `dropped` so the caller can warn.
DesignMatrix build_partial_design(const Dataset& data,
                                  const Eigen::Ref<const Eigen::VectorXd>& degrees,
                                  bool include_intercept = true);

}  // namespace netinf
