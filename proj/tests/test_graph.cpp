#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "netinf/csv.hpp"
#include "netinf/errors.hpp"
#include "netinf/graph.hpp"
#include "netinf/rng.hpp"
#include "testutil.hpp"

using namespace netinf;

namespace {

double edge_pairs(const AdjacencyMatrix& g) {
  return static_cast<double>(g.nonzeros()) / 2.0;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("load_edge_list: single directed record") {
  const std::vector<EdgeRecord> records{{"0", "1", 2.0, 1}};
  const AdjacencyMatrix g = load_edge_list(records, /*directed=*/true);
  CHECK(g.size() == 2);
  CHECK(g.coeff(0, 1) == 2.0);
  CHECK(g.coeff(1, 0) == 0.0);
  CHECK(g.nonzeros() == 1);
}

TEST_CASE("load_edge_list: undirected symmetrization") {
  const std::vector<EdgeRecord> records{{"0", "1", 1.0, 1}};
  const AdjacencyMatrix g = load_edge_list(records, /*directed=*/false);
  CHECK(g.coeff(0, 1) == 1.0);
  CHECK(g.coeff(1, 0) == 1.0);
}

TEST_CASE("load_edge_list: duplicate records sum") {
  const std::vector<EdgeRecord> records{{"0", "1", 1.0, 1}, {"0", "1", 0.5, 2}};
  const AdjacencyMatrix g = load_edge_list(records, /*directed=*/true);
  CHECK(g.coeff(0, 1) == doctest::Approx(1.5));
}

TEST_CASE("load_edge_list: rejections carry the record number") {
  CHECK_THROWS_WITH_AS(load_edge_list({{"3", "3", 1.0, 7}}, true), doctest::Contains("record 7"),
                       DataError);
  CHECK_THROWS_AS(load_edge_list({{"0", "1", std::nan(""), 2}}, true), DataError);
  CHECK_THROWS_AS(load_edge_list({{"a", "b", 1.0, 2}}, true), DataError);  // no nodes file
  CHECK_THROWS_AS(load_edge_list({{"0", "5", 1.0, 2}}, true, Index{3}), DataError);
}

TEST_CASE("load_edge_list: string labels resolve through the label order") {
  const std::vector<std::string> labels{"x", "y", "z"};
  const AdjacencyMatrix g = load_edge_list({{"x", "z", 2.5, 1}}, true, std::nullopt, labels);
  CHECK(g.size() == 3);
  CHECK(g.coeff(0, 2) == 2.5);
  CHECK(g.node_labels() == labels);
}

TEST_CASE("load_edge_list_file: csv ingestion with flags") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "netinf_test_edges.csv";
  {
    std::ofstream out(path);
    out << "src,dst,weight\n0,1,2\n0,2,\n";  // empty weight defaults to 1
  }
  EdgeListOptions opts;
  opts.directed = true;
  const AdjacencyMatrix g = load_edge_list_file(path.string(), opts);
  CHECK(g.size() == 3);
  CHECK(g.coeff(0, 1) == 2.0);
  CHECK(g.coeff(0, 2) == 1.0);

  opts.transpose = true;
  const AdjacencyMatrix t = load_edge_list_file(path.string(), opts);
  CHECK(t.coeff(1, 0) == 2.0);

  opts.transpose = false;
  opts.row_normalize = true;
  const AdjacencyMatrix r = load_edge_list_file(path.string(), opts);
  CHECK(r.coeff(0, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(r.coeff(0, 2) == doctest::Approx(1.0 / 3.0));

  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_edge_list_file((dir / "netinf_absent.csv").string(), opts), DataError);
}

TEST_CASE("generate_er: degenerate probabilities") {
  const AdjacencyMatrix empty = generate_er(5, 0.0, 1, false);
  CHECK(degree_summary(empty).total_weight == 0.0);

  const AdjacencyMatrix complete = generate_er(5, 1.0, 1, false);
  CHECK(degree_summary(complete).total_weight == doctest::Approx(20.0));

  CHECK_THROWS_AS(generate_er(5, 1.5, 1, false), ValidationError);
  CHECK_THROWS_AS(generate_er(0, 0.5, 1, false), ValidationError);
}

TEST_CASE("generate_er: deterministic under a fixed seed") {
  const AdjacencyMatrix a = generate_er(100, 0.5, 7, false);
  const AdjacencyMatrix b = generate_er(100, 0.5, 7, false);
  CHECK((a.dense() - b.dense()).cwiseAbs().maxCoeff() == 0.0);
  const AdjacencyMatrix c = generate_er(100, 0.5, 8, false);
  CHECK((a.dense() - c.dense()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("generate_er: directed edge-count moments over 500 seeds") {
  const Index n = 100;
  const double p = 0.05;
  const int seeds = 500;
  std::vector<double> counts;
  counts.reserve(seeds);
  for (int s = 0; s < seeds; ++s) {
    counts.push_back(degree_summary(generate_er(n, p, 1000 + s, true)).total_weight);
  }
  const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / seeds;
  double var = 0.0;
  for (const double c : counts) var += (c - mean) * (c - mean);
  var /= seeds - 1;

  const double expected_mean = static_cast<double>(n) * (n - 1) * p;
  const double expected_var = static_cast<double>(n) * (n - 1) * p * (1 - p);
  CHECK(std::abs(mean - expected_mean) <= 4.0 * std::sqrt(expected_var / seeds));
  CHECK(var >= 0.75 * expected_var);
  CHECK(var <= 1.25 * expected_var);
}

TEST_CASE("generate_ba: edge count and determinism") {
  CHECK(generate_ba(1, 0.05, 1, 1).nonzeros() == 0);

  const AdjacencyMatrix g = generate_ba(50, 0.05, 1, 3);
  CHECK(edge_pairs(g) == doctest::Approx(49.0));
  CHECK_FALSE(g.directed());

  const AdjacencyMatrix h = generate_ba(50, 0.05, 1, 3);
  CHECK((g.dense() - h.dense()).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(generate_ba(10, 0.05, 0, 1), ValidationError);
}

TEST_CASE("generate_ba: m > 1 attaches to distinct earlier nodes") {
  const AdjacencyMatrix g = generate_ba(40, 1.0, 3, 11);
  // node 1 attaches once, node 2 twice, others three times
  CHECK(edge_pairs(g) == doctest::Approx(1 + 2 + 3 * 37));
  const Eigen::MatrixXd d = g.dense();
  CHECK(d.maxCoeff() == 1.0);  // distinctness: no doubled edges
}

TEST_CASE("generate_ws: exact ring lattice without rewiring") {
  const AdjacencyMatrix g = generate_ws(30, 1, 10, 0.0, 5);
  const DegreeSummary deg = degree_summary(g);
  CHECK(deg.degrees.minCoeff() == doctest::Approx(20.0));
  CHECK(deg.degrees.maxCoeff() == doctest::Approx(20.0));
  for (Index d = 1; d <= 10; ++d) {
    CHECK(g.coeff(0, d) == 1.0);
    CHECK(g.coeff(0, 30 - d) == 1.0);
  }
}

TEST_CASE("generate_ws: rewiring preserves the edge count for 100 seeds") {
  for (int seed = 0; seed < 100; ++seed) {
    const AdjacencyMatrix g = generate_ws(30, 1, 10, 0.05, seed);
    CHECK(edge_pairs(g) == doctest::Approx(300.0));
  }
}

TEST_CASE("generate_ws: validation") {
  CHECK_THROWS_AS(generate_ws(20, 1, 10, 0.05, 1), ValidationError);  // n <= 2*nei
  CHECK_THROWS_AS(generate_ws(50, 2, 3, 0.05, 1), ValidationError);   // dim != 1
  const AdjacencyMatrix a = generate_ws(50, 1, 3, 0.2, 9);
  const AdjacencyMatrix b = generate_ws(50, 1, 3, 0.2, 9);
  CHECK((a.dense() - b.dense()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("degree_summary: hand-checked values") {
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
  const DegreeSummary empty = degree_summary(testutil::from_dense(zero));
  CHECK(empty.degrees.isZero(0.0));
  CHECK(empty.mean_degree == 0.0);
  CHECK(empty.total_weight == 0.0);

  const DegreeSummary s = degree_summary(testutil::three_node_graph());
  CHECK(s.degrees[0] == doctest::Approx(1.0));
  CHECK(s.degrees[1] == doctest::Approx(3.0));
  CHECK(s.degrees[2] == doctest::Approx(2.0));
  CHECK(s.mean_degree == doctest::Approx(2.0));
  CHECK(s.total_weight == doctest::Approx(6.0));

  const AdjacencyMatrix complete = generate_er(4, 1.0, 1, false);
  const DegreeSummary cs = degree_summary(complete);
  CHECK(cs.degrees.minCoeff() == doctest::Approx(3.0));
  CHECK(cs.total_weight == doctest::Approx(12.0));
}

TEST_CASE("exposure: products and linearity") {
  const AdjacencyMatrix g = testutil::three_node_graph();
  Eigen::VectorXd a(3);
  a << 1, 0, 2;
  const Eigen::VectorXd ga = exposure(g, a);
  CHECK(ga[0] == doctest::Approx(0.0));
  CHECK(ga[1] == doctest::Approx(5.0));
  CHECK(ga[2] == doctest::Approx(0.0));

  const Eigen::MatrixXd cols = exposure(g, Eigen::MatrixXd::Identity(3, 3).eval());
  CHECK((cols - g.dense()).cwiseAbs().maxCoeff() == 0.0);

  CHECK(exposure(testutil::from_dense(Eigen::MatrixXd::Zero(3, 3)), a).isZero(0.0));

  std::mt19937_64 rng(42);
  const AdjacencyMatrix big = generate_er(80, 0.1, 5, false);
  const Eigen::VectorXd u = testutil::random_normal(80, rng);
  const Eigen::VectorXd v = testutil::random_normal(80, rng);
  const Eigen::VectorXd lhs = exposure(big, (2.5 * u - 0.75 * v).eval());
  const Eigen::VectorXd rhs = 2.5 * exposure(big, u) - 0.75 * exposure(big, v);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * rhs.cwiseAbs().maxCoeff());

  Eigen::VectorXd wrong(4);
  wrong.setZero();
  CHECK_THROWS_AS(exposure(g, wrong), ValidationError);
}

TEST_CASE("matrix_power: identity, path square, empty") {
  const AdjacencyMatrix g = testutil::three_node_graph();
  CHECK((matrix_power(g, 1).dense() - g.dense()).cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd path(3, 3);
  path << 0, 1, 0,
          1, 0, 1,
          0, 1, 0;
  const AdjacencyMatrix p2 = matrix_power(testutil::from_dense(path), 2);
  CHECK(p2.coeff(0, 2) == doctest::Approx(1.0));
  CHECK(p2.coeff(2, 0) == doctest::Approx(1.0));
  CHECK(p2.coeff(0, 0) == 0.0);
  CHECK(p2.coeff(1, 1) == 0.0);
  CHECK(p2.nonzeros() == 2);

  const AdjacencyMatrix empty = testutil::from_dense(Eigen::MatrixXd::Zero(4, 4));
  CHECK(matrix_power(empty, 3).nonzeros() == 0);
  CHECK_THROWS_AS(matrix_power(g, 0), ValidationError);
}

TEST_CASE("matrix_power equals column-wise exposure with the diagonal zeroed") {
  const AdjacencyMatrix g = generate_er(70, 0.08, 13, false);
  Eigen::MatrixXd expected = exposure(g, g.dense());
  expected.diagonal().setZero();
  CHECK((matrix_power(g, 2).dense() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("row_normalize: scaling, zero rows, idempotence") {
  Eigen::MatrixXd m(3, 3);
  m << 0, 2, 2,
       0, 0, 0,
       1, 1, 0;
  const AdjacencyMatrix norm = row_normalize(testutil::from_dense(m, true));
  CHECK(norm.coeff(0, 1) == doctest::Approx(0.5));
  CHECK(norm.coeff(0, 2) == doctest::Approx(0.5));
  CHECK(norm.coeff(1, 0) == 0.0);
  CHECK(norm.coeff(2, 0) == doctest::Approx(0.5));

  const AdjacencyMatrix twice = row_normalize(norm);
  CHECK((twice.dense() - norm.dense()).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd neg(2, 2);
  neg << 0, -1,
         -1, 0;
  CHECK_THROWS_AS(row_normalize(testutil::from_dense(neg)), ValidationError);
}

TEST_CASE("permute: relabeling moves entries and preserves degree multisets") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 1) = 5.0;
  const AdjacencyMatrix g = testutil::from_dense(m, true);
  CHECK((permute(g, {0, 1}).dense() - g.dense()).cwiseAbs().maxCoeff() == 0.0);

  const AdjacencyMatrix swapped = permute(g, {1, 0});
  CHECK(swapped.coeff(1, 0) == 5.0);
  CHECK(swapped.coeff(0, 1) == 0.0);

  const AdjacencyMatrix big = generate_er(40, 0.2, 3, false);
  std::vector<Index> perm(40);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(99));
  const DegreeSummary before = degree_summary(big);
  const DegreeSummary after = degree_summary(permute(big, perm));
  CHECK(after.mean_degree == doctest::Approx(before.mean_degree));
  CHECK(after.total_weight == doctest::Approx(before.total_weight));
  for (Index i = 0; i < 40; ++i) {
    CHECK(after.degrees[perm[static_cast<std::size_t>(i)]] == doctest::Approx(before.degrees[i]));
  }

  CHECK_THROWS_AS(permute(g, {0, 0}), ValidationError);
  CHECK_THROWS_AS(permute(g, {0}), ValidationError);
}

TEST_CASE("adjacency invariants: self-loops, symmetry, finiteness") {
  std::vector<AdjacencyMatrix::Triplet> loop{{1, 1, 1.0}};
  CHECK_THROWS_AS(AdjacencyMatrix(2, loop, true), ValidationError);

  std::vector<AdjacencyMatrix::Triplet> asym{{0, 1, 1.0}};
  CHECK_THROWS_AS(AdjacencyMatrix(2, asym, false), ValidationError);
  CHECK_NOTHROW(AdjacencyMatrix(2, asym, true));

  CHECK_THROWS_AS(AdjacencyMatrix(0, {}, false), ValidationError);
}

TEST_CASE("transpose flips orientation") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 2) = 4.0;
  const AdjacencyMatrix g = testutil::from_dense(m, true);
  const AdjacencyMatrix t = transpose(g);
  CHECK(t.coeff(2, 0) == 4.0);
  CHECK(t.coeff(0, 2) == 0.0);
}

}  // TEST_SUITE
