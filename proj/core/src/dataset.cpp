#include "netinf/dataset.hpp"

#include "netinf/csv.hpp"
#include "netinf/errors.hpp"

namespace netinf {

void Dataset::validate() const {
  const Eigen::Index rows = outcome.size();
  if (rows < 1) throw ValidationError("dataset is empty");
  if (treatment.size() != rows) {
    throw ValidationError("treatment length does not match outcome length");
  }
  if (covariates.size() > 0 && covariates.rows() != rows) {
    throw ValidationError("covariate rows do not match outcome length");
  }
  if (static_cast<Eigen::Index>(covariate_names.size()) != covariates.cols()) {
    throw ValidationError("covariate name count does not match covariate columns");
  }
  if (!outcome.allFinite() || !treatment.allFinite() ||
      (covariates.size() > 0 && !covariates.allFinite())) {
    throw ValidationError("dataset contains non-finite values");
  }
}

Dataset dataset_from_table(const csv::Table& table, const std::string& outcome_col,
                           const std::string& treatment_col,
                           const std::vector<std::string>& covariate_cols) {
  Dataset data;
  data.outcome = table.numeric_column(outcome_col);
  data.treatment = table.numeric_column(treatment_col);
  data.covariates.resize(static_cast<Eigen::Index>(table.n_rows()),
                         static_cast<Eigen::Index>(covariate_cols.size()));
  for (std::size_t c = 0; c < covariate_cols.size(); ++c) {
    data.covariates.col(static_cast<Eigen::Index>(c)) = table.numeric_column(covariate_cols[c]);
  }
  data.covariate_names = covariate_cols;
  data.validate();
  return data;
}

Dataset load_dataset_csv(const std::string& path, const std::string& outcome_col,
                         const std::string& treatment_col,
                         const std::vector<std::string>& covariate_cols) {
  return dataset_from_table(csv::read_csv_file(path), outcome_col, treatment_col, covariate_cols);
}

}  // namespace netinf
