#pragma once

// Shared helpers for the test suite. The dense "oracle" computations here are
// built straight from the weight triplets, independent of the library's own
// operator assembly, so the two sides of every comparison are separate code
// paths.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dirpart/graph.hpp"
#include "dirpart/rng.hpp"

namespace test_util {

// Random connected graph: spanning tree (vertex v attaches to a random
// earlier vertex) plus extra random edges, weights uniform in [0.5, 1.5].
inline dirpart::SimilarityGraph random_connected_graph(dirpart::Rng& rng, int n,
                                                       double edge_prob = 0.25,
                                                       bool unit_weights = false) {
  std::vector<Eigen::Triplet<double>> trips;
  auto add = [&](int a, int b) {
    const double w = unit_weights ? 1.0 : 0.5 + rng.uniform();
    trips.emplace_back(a, b, w);
  };
  for (int v = 1; v < n; ++v) add(rng.uniform_int(0, v - 1), v);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < edge_prob) add(i, j);
  Eigen::SparseMatrix<double> raw(n, n);
  raw.setFromTriplets(trips.begin(), trips.end(),
                      [](double a, double b) { return std::max(a, b); });
  return dirpart::symmetrize(raw);
}

inline Eigen::MatrixXd dense_weights(const dirpart::SimilarityGraph& g) {
  return Eigen::MatrixXd(g.weights);
}

inline Eigen::VectorXd dense_degrees(const Eigen::MatrixXd& w) {
  return w.rowwise().sum();
}

// D^{-r}(D - W) + diag(pot), the possibly-nonsymmetric original form.
inline Eigen::MatrixXd dense_delta_r(const Eigen::MatrixXd& w, double r,
                                     const Eigen::VectorXd& pot) {
  const int n = static_cast<int>(w.rows());
  const Eigen::VectorXd d = dense_degrees(w);
  Eigen::MatrixXd m = -w;
  for (int i = 0; i < n; ++i) m(i, i) += d[i];
  for (int i = 0; i < n; ++i) m.row(i) *= std::pow(d[i], -r);
  for (int i = 0; i < n; ++i) m(i, i) += pot[i];
  return m;
}

// D^{1-r} - D^{-r/2} W D^{-r/2} + diag(pot) with an explicit degree vector,
// so Dirichlet submatrices can keep the full-graph degrees.
inline Eigen::MatrixXd dense_standard_form(const Eigen::MatrixXd& w,
                                           const Eigen::VectorXd& deg, double r,
                                           const Eigen::VectorXd& pot) {
  const int n = static_cast<int>(w.rows());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = -std::pow(deg[i], -r / 2.0) * w(i, j) * std::pow(deg[j], -r / 2.0);
  for (int i = 0; i < n; ++i) m(i, i) += std::pow(deg[i], 1.0 - r) + pot[i];
  return m;
}

inline double oracle_smallest_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline Eigen::VectorXd oracle_eigenvalues(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Smallest eigenvalue of the Dirichlet submatrix on S (full-graph degrees).
inline double oracle_dirichlet_lambda(const dirpart::SimilarityGraph& g, double r,
                                      const std::vector<std::uint8_t>& mask) {
  const Eigen::MatrixXd w = dense_weights(g);
  const Eigen::VectorXd d = dense_degrees(w);
  std::vector<int> idx;
  for (int i = 0; i < g.n(); ++i)
    if (mask[static_cast<std::size_t>(i)]) idx.push_back(i);
  const int m = static_cast<int>(idx.size());
  Eigen::MatrixXd ws(m, m);
  Eigen::VectorXd ds(m);
  for (int a = 0; a < m; ++a) {
    ds[a] = d[idx[static_cast<std::size_t>(a)]];
    for (int b = 0; b < m; ++b)
      ws(a, b) = w(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  }
  return oracle_smallest_eigenvalue(
      dense_standard_form(ws, ds, r, Eigen::VectorXd::Zero(m)));
}

// Rayleigh quotient of the psi-space operator with the D^r inner product:
// [x'(D-W)x + sum_v pot_v d_v^r x_v^2] / sum_v d_v^r x_v^2.
inline double rayleigh_psi(const dirpart::SimilarityGraph& g, double r,
                           const Eigen::VectorXd& pot, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd w = dense_weights(g);
  const Eigen::VectorXd d = dense_degrees(w);
  double num = x.dot(d.cwiseProduct(x)) - x.dot(w * x);
  double den = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    const double dr = std::pow(d[i], r);
    num += pot[i] * dr * x[i] * x[i];
    den += dr * x[i] * x[i];
  }
  return num / den;
}

// Unique scratch path under the system temp directory. The per-run token
// keeps repeated executions of the test binary from seeing each other's
// leftovers.
inline std::string temp_path(const std::string& name) {
  static std::atomic<int> counter{0};
  static const unsigned run_id = std::random_device{}();
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("dirpart_tests_" + std::to_string(run_id));
  fs::create_directories(dir);
  return (dir / (std::to_string(counter.fetch_add(1)) + "_" + name)).string();
}

// Random 0/1 mask with a guaranteed nonempty subset.
inline std::vector<std::uint8_t> random_mask(dirpart::Rng& rng, int n) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 0);
  int count = 0;
  for (auto& m : mask) {
    m = rng.uniform() < 0.5 ? 1 : 0;
    count += m;
  }
  if (count == 0) mask[static_cast<std::size_t>(rng.uniform_int(0, n - 1))] = 1;
  return mask;
}

} // namespace test_util
