#include "netinf/design.hpp"

#include <cmath>

#include "netinf/errors.hpp"

namespace netinf {

namespace {

struct Builder {
  Eigen::Index n;
  std::vector<Eigen::VectorXd> cols;
  std::vector<DesignColumn> meta;
  std::vector<DesignColumn> dropped;

  void add(Eigen::VectorXd v, DesignColumn col) {
    if (v.cwiseAbs().maxCoeff() == 0.0) {
      dropped.push_back(std::move(col));
      return;
    }
    cols.push_back(std::move(v));
    meta.push_back(std::move(col));
  }

  DesignMatrix finish() && {
    DesignMatrix design;
    design.X.resize(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      design.X.col(static_cast<Eigen::Index>(c)) = cols[c];
    }
    design.columns = std::move(meta);
    design.dropped = std::move(dropped);
    return design;
  }
};

void add_base_columns(Builder& b, const Dataset& data, bool include_intercept) {
  if (include_intercept) {
    b.add(Eigen::VectorXd::Ones(b.n), {"(Intercept)", ColumnRole::intercept, -1});
  }
  b.add(data.treatment, {"A", ColumnRole::treatment, -1});
  for (Eigen::Index c = 0; c < data.covariates.cols(); ++c) {
    b.add(data.covariates.col(c),
          {data.covariate_names[static_cast<std::size_t>(c)], ColumnRole::covariate, -1});
  }
}

}  // namespace

std::optional<Eigen::Index> DesignMatrix::find(ColumnRole role, int network) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].role == role && (network < 0 || columns[i].network == network)) {
      return static_cast<Eigen::Index>(i);
    }
  }
  return std::nullopt;
}

DesignMatrix build_design(const Dataset& data, const std::vector<AdjacencyMatrix>& graphs,
                          DesignSpec spec, bool include_neighbor_intercept,
                          bool include_intercept) {
  data.validate();
  Builder b{data.n(), {}, {}, {}};

  switch (spec) {
    case DesignSpec::naive:
      add_base_columns(b, data, include_intercept);
      break;

    case DesignSpec::full: {
      if (graphs.empty()) {
        throw ValidationError("full design needs at least one interference graph");
      }
      for (const auto& g : graphs) {
        if (g.size() != data.n()) {
          throw ValidationError("graph node count " + std::to_string(g.size()) +
                                " does not match dataset rows " + std::to_string(data.n()));
        }
      }
      add_base_columns(b, data, include_intercept);
      for (std::size_t k = 0; k < graphs.size(); ++k) {
        const auto& g = graphs[k];
        const std::string tag = "G" + std::to_string(k + 1);
        const int net = static_cast<int>(k + 1);
        if (include_neighbor_intercept) {
          b.add(exposure(g, Eigen::VectorXd::Ones(data.n()).eval()),
                {"F" + std::to_string(k + 1), ColumnRole::degree, net});
        }
        b.add(exposure(g, data.treatment), {tag + ":A", ColumnRole::exposure_treatment, net});
        if (data.covariates.cols() > 0) {
          const Eigen::MatrixXd gl = exposure(g, data.covariates);
          for (Eigen::Index c = 0; c < gl.cols(); ++c) {
            b.add(gl.col(c),
                  {tag + ":" + data.covariate_names[static_cast<std::size_t>(c)],
                   ColumnRole::exposure_covariate, net});
          }
        }
      }
      break;
    }

    case DesignSpec::degree_only: {
      if (graphs.size() != 1) {
        throw ValidationError("degree-only design needs exactly one graph (got " +
                              std::to_string(graphs.size()) + ")");
      }
      if (graphs[0].size() != data.n()) {
        throw ValidationError("graph node count does not match dataset rows");
      }
      return build_partial_design(data, degree_summary(graphs[0]).degrees, include_intercept);
    }
  }
  return std::move(b).finish();
}

DesignMatrix build_partial_design(const Dataset& data,
                                  const Eigen::Ref<const Eigen::VectorXd>& degrees,
                                  bool include_intercept) {
  data.validate();
  if (degrees.size() != data.n()) {
    throw ValidationError("degree vector length does not match dataset rows");
  }
  Builder b{data.n(), {}, {}, {}};
  add_base_columns(b, data, include_intercept);

  const double spread = degrees.maxCoeff() - degrees.minCoeff();
  const double scale = std::max(1.0, degrees.cwiseAbs().maxCoeff());
  if (include_intercept && spread <= 1e-12 * scale) {
    // constant degrees carry no information beyond the intercept
    b.dropped.push_back({"F", ColumnRole::degree, 1});
  } else {
    b.add(degrees, {"F", ColumnRole::degree, 1});
  }
  return std::move(b).finish();
}

}  // namespace netinf
