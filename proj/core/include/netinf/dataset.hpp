#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace netinf {

// One row per unit: outcome Y, treatment A, covariates L.
struct Dataset {
  Eigen::VectorXd outcome;
  Eigen::VectorXd treatment;
  Eigen::MatrixXd covariates;  // n x c, c may be zero
  std::vector<std::string> covariate_names;

  Eigen::Index n() const { return outcome.size(); }

  // Throws ValidationError on size mismatches or non-finite values.
  void validate() const;
};

// Builds a Dataset from a data CSV (header row, one row per unit).
Dataset load_dataset_csv(const std::string& path, const std::string& outcome_col,
                         const std::string& treatment_col,
                         const std::vector<std::string>& covariate_cols);

namespace csv {
struct Table;
}
Dataset dataset_from_table(const csv::Table& table, const std::string& outcome_col,
                           const std::string& treatment_col,
                           const std::vector<std::string>& covariate_cols);

}  // namespace netinf
