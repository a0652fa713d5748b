#include "netinf/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "netinf/csv.hpp"
#include "netinf/errors.hpp"
#include "netinf/rng.hpp"

namespace netinf {

namespace {

bool nearly_symmetric(const AdjacencyMatrix::Sparse& m, double tol) {
  AdjacencyMatrix::Sparse diff = m - AdjacencyMatrix::Sparse(m.transpose());
  for (Index i = 0; i < diff.outerSize(); ++i) {
    for (AdjacencyMatrix::Sparse::InnerIterator it(diff, i); it; ++it) {
      if (std::abs(it.value()) > tol) return false;
    }
  }
  return true;
}

// Uniform integer in [0, n) from 53 random bits; n is far below 2^53.
Index uniform_index(std::mt19937_64& rng, Index n) {
  return static_cast<Index>(uniform01(rng) * static_cast<double>(n));
}

}  // namespace

AdjacencyMatrix::AdjacencyMatrix(Index n, const std::vector<Triplet>& entries, bool directed,
                                 std::vector<std::string> node_labels)
    : directed_(directed), node_labels_(std::move(node_labels)) {
  if (n < 1) throw ValidationError("adjacency matrix needs at least one node");
  if (!node_labels_.empty() && static_cast<Index>(node_labels_.size()) != n) {
    throw ValidationError("node label count does not match node count");
  }
  for (const auto& t : entries) {
    if (t.row() < 0 || t.row() >= n || t.col() < 0 || t.col() >= n) {
      throw ValidationError("edge endpoint out of range");
    }
    if (t.row() == t.col()) {
      throw ValidationError("self-loop at node " + std::to_string(t.row()));
    }
    if (!std::isfinite(t.value())) {
      throw ValidationError("non-finite edge weight at (" + std::to_string(t.row()) + ", " +
                            std::to_string(t.col()) + ")");
    }
  }
  sparse_.resize(n, n);
  sparse_.setFromTriplets(entries.begin(), entries.end());  // duplicates sum
  sparse_.prune(0.0);
  sparse_.makeCompressed();
  if (!directed_ && !nearly_symmetric(sparse_, 0.0)) {
    throw ValidationError("undirected graph has an asymmetric entry");
  }
  if (n < dense_cache_threshold) {
    dense_cache_ = Eigen::MatrixXd(sparse_);
    has_dense_cache_ = true;
  }
}

Eigen::MatrixXd AdjacencyMatrix::dense() const {
  if (has_dense_cache_) return dense_cache_;
  return Eigen::MatrixXd(sparse_);
}

AdjacencyMatrix load_edge_list(const std::vector<EdgeRecord>& records, bool directed,
                               std::optional<Index> n_hint,
                               const std::vector<std::string>& node_labels) {
  std::unordered_map<std::string, Index> label_index;
  for (std::size_t i = 0; i < node_labels.size(); ++i) {
    if (!label_index.emplace(node_labels[i], static_cast<Index>(i)).second) {
      throw DataError("duplicate node label '" + node_labels[i] + "'");
    }
  }

  auto resolve = [&](const std::string& label, std::size_t line) -> Index {
    if (!label_index.empty()) {
      const auto it = label_index.find(label);
      if (it == label_index.end()) {
        throw DataError("record " + std::to_string(line) + ": unknown node label '" + label + "'");
      }
      return it->second;
    }
    Index idx = -1;
    const auto* first = label.data();
    const auto* last = first + label.size();
    const auto [ptr, ec] = std::from_chars(first, last, idx);
    if (ec != std::errc{} || ptr != last || idx < 0) {
      throw DataError("record " + std::to_string(line) + ": node '" + label +
                      "' is not a nonnegative index (string labels need a nodes file)");
    }
    return idx;
  };

  std::vector<std::pair<std::pair<Index, Index>, std::pair<double, std::size_t>>> resolved;
  resolved.reserve(records.size());
  Index max_index = -1;
  for (const auto& rec : records) {
    const Index src = resolve(rec.src, rec.line);
    const Index dst = resolve(rec.dst, rec.line);
    if (src == dst) {
      throw DataError("record " + std::to_string(rec.line) + ": self-loop on node " + rec.src);
    }
    if (!std::isfinite(rec.weight)) {
      throw DataError("record " + std::to_string(rec.line) + ": non-finite weight");
    }
    max_index = std::max({max_index, src, dst});
    resolved.push_back({{src, dst}, {rec.weight, rec.line}});
  }

  Index n;
  if (!node_labels.empty()) {
    n = static_cast<Index>(node_labels.size());
  } else if (n_hint) {
    n = *n_hint;
    if (n < 1) throw ValidationError("n_hint must be at least 1");
    if (max_index >= n) {
      throw DataError("node index " + std::to_string(max_index) + " exceeds n_hint " +
                      std::to_string(n));
    }
  } else {
    if (max_index < 0) {
      throw DataError("empty edge list needs n_hint or a nodes file to define n");
    }
    n = max_index + 1;
  }

  std::vector<AdjacencyMatrix::Triplet> triplets;
  triplets.reserve(resolved.size() * (directed ? 1 : 2));
  for (const auto& [edge, wl] : resolved) {
    triplets.emplace_back(edge.first, edge.second, wl.first);
    if (!directed) triplets.emplace_back(edge.second, edge.first, wl.first);
  }
  return AdjacencyMatrix(n, triplets, directed, node_labels);
}

AdjacencyMatrix load_edge_list_file(const std::string& path, const EdgeListOptions& opts) {
  const csv::Table table = csv::read_csv_file(path);
  const std::size_t src_col = table.column_index("src");
  const std::size_t dst_col = table.column_index("dst");
  const bool has_weight = table.has_column("weight");
  const std::size_t weight_col = has_weight ? table.column_index("weight") : 0;

  std::vector<EdgeRecord> records;
  records.reserve(table.n_rows());
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    EdgeRecord rec;
    rec.src = table.rows[r][src_col];
    rec.dst = table.rows[r][dst_col];
    rec.line = r + 2;
    if (has_weight && !table.rows[r][weight_col].empty()) {
      rec.weight = csv::parse_double(table.rows[r][weight_col], path, rec.line);
    }
    records.push_back(std::move(rec));
  }

  std::vector<std::string> labels;
  if (!opts.nodes_path.empty()) {
    const csv::Table nodes = csv::read_csv_file(opts.nodes_path);
    const std::size_t label_col = nodes.column_index("label");
    labels.reserve(nodes.n_rows());
    for (const auto& row : nodes.rows) labels.push_back(row[label_col]);
  }

  AdjacencyMatrix g = load_edge_list(records, opts.directed, opts.n_hint, labels);
  if (opts.transpose) g = transpose(g);
  if (opts.row_normalize) g = netinf::row_normalize(g);
  return g;
}

AdjacencyMatrix generate_er(Index n, double p, std::uint64_t seed, bool directed) {
  if (n < 1) throw ValidationError("generate_er: n must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("generate_er: p must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<AdjacencyMatrix::Triplet> triplets;
  if (directed) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (i == j) continue;
        if (uniform01(rng) < p) triplets.emplace_back(i, j, 1.0);
      }
    }
  } else {
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        if (uniform01(rng) < p) {
          triplets.emplace_back(i, j, 1.0);
          triplets.emplace_back(j, i, 1.0);
        }
      }
    }
  }
  return AdjacencyMatrix(n, triplets, directed);
}

AdjacencyMatrix generate_ba(Index n, double power, Index m, std::uint64_t seed) {
  if (n < 1) throw ValidationError("generate_ba: n must be at least 1");
  if (m < 1) throw ValidationError("generate_ba: m must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<AdjacencyMatrix::Triplet> triplets;
  std::vector<double> degree(static_cast<std::size_t>(n), 0.0);
  std::vector<double> weight(static_cast<std::size_t>(n), 0.0);

  for (Index t = 1; t < n; ++t) {
    const Index picks = std::min<Index>(m, t);
    double total = 0.0;
    for (Index i = 0; i < t; ++i) {
      weight[static_cast<std::size_t>(i)] = std::pow(degree[static_cast<std::size_t>(i)] + 1.0, power);
      total += weight[static_cast<std::size_t>(i)];
    }
    for (Index pick = 0; pick < picks; ++pick) {
      double u = uniform01(rng) * total;
      Index chosen = t - 1;
      for (Index i = 0; i < t; ++i) {
        u -= weight[static_cast<std::size_t>(i)];
        if (u <= 0.0) {
          chosen = i;
          break;
        }
      }
      // remove from the pool so targets stay distinct
      total -= weight[static_cast<std::size_t>(chosen)];
      weight[static_cast<std::size_t>(chosen)] = 0.0;
      triplets.emplace_back(t, chosen, 1.0);
      triplets.emplace_back(chosen, t, 1.0);
      degree[static_cast<std::size_t>(chosen)] += 1.0;
      degree[static_cast<std::size_t>(t)] += 1.0;
    }
  }
  return AdjacencyMatrix(n, triplets, /*directed=*/false);
}

AdjacencyMatrix generate_ws(Index n, Index dim, Index nei, double p_rewire, std::uint64_t seed) {
  if (dim != 1) throw ValidationError("generate_ws: only dim = 1 lattices are supported");
  if (nei < 1) throw ValidationError("generate_ws: nei must be at least 1");
  if (!(p_rewire >= 0.0 && p_rewire <= 1.0)) {
    throw ValidationError("generate_ws: p_rewire must lie in [0, 1]");
  }
  if (n <= 2 * nei) {
    throw ValidationError("generate_ws: need n > 2*nei (got n = " + std::to_string(n) +
                          ", nei = " + std::to_string(nei) + ")");
  }
  std::mt19937_64 rng(seed);

  auto key = [n](Index a, Index b) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) +
           static_cast<std::uint64_t>(b);
  };
  std::unordered_set<std::uint64_t> edges;
  std::vector<std::pair<Index, Index>> edge_list;
  edge_list.reserve(static_cast<std::size_t>(n * nei));
  for (Index i = 0; i < n; ++i) {
    for (Index d = 1; d <= nei; ++d) {
      const Index j = (i + d) % n;
      edge_list.emplace_back(i, j);
      edges.insert(key(i, j));
    }
  }

  // Watts-Strogatz pass: each lattice edge (i, j) keeps i and redraws j
  // with probability p_rewire; the edge count is preserved exactly.
  for (auto& [i, j] : edge_list) {
    if (uniform01(rng) >= p_rewire) continue;
    bool found = false;
    Index candidate = 0;
    for (int attempt = 0; attempt < 64; ++attempt) {
      candidate = uniform_index(rng, n);
      if (candidate == i || candidate == j) continue;
      if (edges.contains(key(i, candidate))) continue;
      found = true;
      break;
    }
    if (!found) continue;  // node already saturated; keep the lattice edge
    edges.erase(key(i, j));
    edges.insert(key(i, candidate));
    j = candidate;
  }

  std::vector<AdjacencyMatrix::Triplet> triplets;
  triplets.reserve(edge_list.size() * 2);
  for (const auto& [i, j] : edge_list) {
    triplets.emplace_back(i, j, 1.0);
    triplets.emplace_back(j, i, 1.0);
  }
  return AdjacencyMatrix(n, triplets, /*directed=*/false);
}

DegreeSummary degree_summary(const AdjacencyMatrix& g) {
  DegreeSummary out;
  out.degrees = g.sparse() * Eigen::VectorXd::Ones(g.size());
  out.total_weight = out.degrees.sum();
  out.mean_degree = out.total_weight / static_cast<double>(g.size());
  return out;
}

Eigen::VectorXd exposure(const AdjacencyMatrix& g, const Eigen::VectorXd& v) {
  if (v.size() != g.size()) {
    throw ValidationError("exposure: vector length " + std::to_string(v.size()) +
                          " does not match node count " + std::to_string(g.size()));
  }
  if (g.size() < AdjacencyMatrix::dense_cache_threshold) return g.dense() * v;
  return g.sparse() * v;
}

Eigen::MatrixXd exposure(const AdjacencyMatrix& g, const Eigen::MatrixXd& v) {
  if (v.rows() != g.size()) {
    throw ValidationError("exposure: matrix has " + std::to_string(v.rows()) +
                          " rows, expected " + std::to_string(g.size()));
  }
  if (g.size() < AdjacencyMatrix::dense_cache_threshold) return g.dense() * v;
  return g.sparse() * v;
}

AdjacencyMatrix matrix_power(const AdjacencyMatrix& g, int k) {
  if (k < 1) throw ValidationError("matrix_power: k must be at least 1");
  const Index n = g.size();
  std::vector<AdjacencyMatrix::Triplet> triplets;
  if (n < AdjacencyMatrix::dense_cache_threshold) {
    Eigen::MatrixXd acc = g.dense();
    const Eigen::MatrixXd base = g.dense();
    for (int step = 1; step < k; ++step) acc = acc * base;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (i != j && acc(i, j) != 0.0) triplets.emplace_back(i, j, acc(i, j));
      }
    }
  } else {
    AdjacencyMatrix::Sparse acc = g.sparse();
    for (int step = 1; step < k; ++step) {
      acc = (acc * g.sparse()).pruned();
    }
    for (Index i = 0; i < acc.outerSize(); ++i) {
      for (AdjacencyMatrix::Sparse::InnerIterator it(acc, i); it; ++it) {
        if (it.row() != it.col()) triplets.emplace_back(it.row(), it.col(), it.value());
      }
    }
  }
  return AdjacencyMatrix(n, triplets, g.directed(), g.node_labels());
}

AdjacencyMatrix row_normalize(const AdjacencyMatrix& g) {
  const auto& m = g.sparse();
  std::vector<AdjacencyMatrix::Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (Index i = 0; i < m.outerSize(); ++i) {
    double row_sum = 0.0;
    for (AdjacencyMatrix::Sparse::InnerIterator it(m, i); it; ++it) {
      if (it.value() < 0.0) {
        throw ValidationError("row_normalize: negative weight at (" + std::to_string(it.row()) +
                              ", " + std::to_string(it.col()) + ")");
      }
      row_sum += it.value();
    }
    if (row_sum == 0.0) continue;
    for (AdjacencyMatrix::Sparse::InnerIterator it(m, i); it; ++it) {
      triplets.emplace_back(it.row(), it.col(), it.value() / row_sum);
    }
  }
  AdjacencyMatrix normalized(g.size(), triplets, /*directed=*/true, g.node_labels());
  if (!g.directed() && nearly_symmetric(normalized.sparse(), 0.0)) {
    return AdjacencyMatrix(g.size(), triplets, /*directed=*/false, g.node_labels());
  }
  return normalized;
}

AdjacencyMatrix permute(const AdjacencyMatrix& g, const std::vector<Index>& perm) {
  const Index n = g.size();
  if (static_cast<Index>(perm.size()) != n) {
    throw ValidationError("permute: permutation length does not match node count");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const Index p : perm) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) {
      throw ValidationError("permute: not a bijection on 0..n-1");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
  std::vector<AdjacencyMatrix::Triplet> triplets;
  const auto& m = g.sparse();
  triplets.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (Index i = 0; i < m.outerSize(); ++i) {
    for (AdjacencyMatrix::Sparse::InnerIterator it(m, i); it; ++it) {
      triplets.emplace_back(perm[static_cast<std::size_t>(it.row())],
                            perm[static_cast<std::size_t>(it.col())], it.value());
    }
  }
  std::vector<std::string> labels = g.node_labels();
  if (!labels.empty()) {
    std::vector<std::string> permuted(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      permuted[static_cast<std::size_t>(perm[i])] = labels[i];
    }
    labels = std::move(permuted);
  }
  return AdjacencyMatrix(n, triplets, g.directed(), labels);
}

AdjacencyMatrix transpose(const AdjacencyMatrix& g) {
  std::vector<AdjacencyMatrix::Triplet> triplets;
  const auto& m = g.sparse();
  triplets.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (Index i = 0; i < m.outerSize(); ++i) {
    for (AdjacencyMatrix::Sparse::InnerIterator it(m, i); it; ++it) {
      triplets.emplace_back(it.col(), it.row(), it.value());
    }
  }
  return AdjacencyMatrix(g.size(), triplets, g.directed(), g.node_labels());
}

}  // namespace netinf
