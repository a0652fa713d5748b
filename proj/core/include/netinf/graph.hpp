#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace netinf {

using Index = Eigen::Index;

// Weighted degrees F_i (row sums), their mean, and the total edge weight W.
struct DegreeSummary {
  Eigen::VectorXd degrees;  // F_i = sum_j G_ij
  double mean_degree = 0.0; // F_bar
  double total_weight = 0.0;// W = sum_ij G_ij
};

// Interference graph: weighted adjacency matrix with zero diagonal.
// Row i holds the weights of the units whose treatments enter unit i's
// exposure, so exposures are plain products G*v. Values are immutable after
// construction and safe to share across threads.
class AdjacencyMatrix {
public:
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  using Triplet = Eigen::Triplet<double>;

  // Builds from (row, col, weight) entries; duplicate entries sum.
  // Enforces: n >= 1, finite weights, empty diagonal, and symmetry when
  // directed == false. Throws ValidationError on violation.
  AdjacencyMatrix(Index n, const std::vector<Triplet>& entries, bool directed,
                  std::vector<std::string> node_labels = {});

  Index size() const { return sparse_.rows(); }
  bool directed() const { return directed_; }
  Index nonzeros() const { return sparse_.nonZeros(); }
  double coeff(Index i, Index j) const { return sparse_.coeff(i, j); }

  const Sparse& sparse() const { return sparse_; }
  // Dense copy; cached at construction for small graphs, materialized on
  // demand otherwise.
  Eigen::MatrixXd dense() const;

  const std::vector<std::string>& node_labels() const { return node_labels_; }

  static constexpr Index dense_cache_threshold = 64;

private:
  Sparse sparse_;
  bool directed_ = false;
  std::vector<std::string> node_labels_;
  Eigen::MatrixXd dense_cache_;  // populated iff size() < dense_cache_threshold
  bool has_dense_cache_ = false;
};

// One edge-list record as read from a file. Labels are unresolved strings;
// `line` is the 1-based source line for error messages.
struct EdgeRecord {
  std::string src;
  std::string dst;
  double weight = 1.0;
  std::size_t line = 0;
};

// Resolves records against integer indices (or `node_labels` order when
// given) and assembles the adjacency matrix. A record (i, j, w) adds w to
// G_ij; undirected input inserts both orientations; duplicates sum.
// Rejects self-loops (with the record's line), non-finite weights, and
// labels that cannot be resolved.
AdjacencyMatrix load_edge_list(const std::vector<EdgeRecord>& records, bool directed,
                               std::optional<Index> n_hint = std::nullopt,
                               const std::vector<std::string>& node_labels = {});

// File-level ingestion: CSV with header src,dst[,weight]. `nodes_path`, when
// nonempty, must be a CSV with header `label` defining the index order for
// string labels.
struct EdgeListOptions {
  bool directed = false;
  bool transpose = false;
  bool row_normalize = false;
  std::optional<Index> n_hint;
  std::string nodes_path;
};
AdjacencyMatrix load_edge_list_file(const std::string& path, const EdgeListOptions& opts);

// Erdos-Renyi G(n, p): every ordered (directed) or unordered pair is an
// edge independently with probability p, weight 1.
AdjacencyMatrix generate_er(Index n, double p, std::uint64_t seed, bool directed);

// Preferential attachment: node t >= 1 attaches to min(m, t) distinct
// earlier nodes with probability proportional to (degree + 1)^power.
AdjacencyMatrix generate_ba(Index n, double power, Index m, std::uint64_t seed);

// Small-world ring lattice (dim = 1 only): each node is joined to `nei`
// neighbors on each side, then every edge is independently rewired with
// probability p_rewire, avoiding self-loops and duplicates. The undirected
// edge count is always exactly n * nei.
AdjacencyMatrix generate_ws(Index n, Index dim, Index nei, double p_rewire, std::uint64_t seed);

DegreeSummary degree_summary(const AdjacencyMatrix& g);

// Neighbor exposure G*v for a vector or a column-wise matrix over units.
Eigen::VectorXd exposure(const AdjacencyMatrix& g, const Eigen::VectorXd& v);
Eigen::MatrixXd exposure(const AdjacencyMatrix& g, const Eigen::MatrixXd& v);

// G^k with the diagonal zeroed afterward, so higher-order exposure never
// feeds a unit's own treatment back into its design row.
AdjacencyMatrix matrix_power(const AdjacencyMatrix& g, int k);

// Divides each nonzero row by its row sum (zero rows pass through).
// Requires nonnegative weights. The result is flagged directed unless it
// happens to stay symmetric.
AdjacencyMatrix row_normalize(const AdjacencyMatrix& g);

// Relabels nodes: result(perm[i], perm[j]) = G(i, j). perm must be a
// bijection on 0..n-1.
AdjacencyMatrix permute(const AdjacencyMatrix& g, const std::vector<Index>& perm);

AdjacencyMatrix transpose(const AdjacencyMatrix& g);

}  // namespace netinf
