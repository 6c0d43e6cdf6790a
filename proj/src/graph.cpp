#include "dirpart/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "dirpart/errors.hpp"

namespace dirpart {

namespace {

Eigen::VectorXd row_sums(const Eigen::SparseMatrix<double>& w) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(w.rows());
  for (int j = 0; j < w.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(w, j); it; ++it)
      d[it.row()] += it.value();
  return d;
}

SimilarityGraph finish(Eigen::SparseMatrix<double> w) {
  w.makeCompressed();
  SimilarityGraph g;
  g.degrees = row_sums(w);
  g.weights = std::move(w);
  return g;
}

} // namespace

double point_distance_squared(const PointCloud& cloud, int i, int j) {
  if (cloud.metric == Metric::Euclidean)
    return (cloud.points.row(i) - cloud.points.row(j)).squaredNorm();
  const double c = std::clamp(cloud.points.row(i).dot(cloud.points.row(j)), -1.0, 1.0);
  const double d = std::acos(c);
  return d * d;
}

void validate_cloud(const PointCloud& cloud) {
  if (!cloud.points.allFinite())
    throw InputError("point cloud contains non-finite coordinates");
  if (cloud.metric == Metric::SphereGeodesic) {
    for (int i = 0; i < cloud.size(); ++i) {
      if (std::abs(cloud.points.row(i).norm() - 1.0) > 1e-9)
        throw InputError("sphere-geodesic metric requires unit vectors (row " +
                         std::to_string(i) + ")");
    }
  }
}

SimilarityGraph gaussian_similarity(const PointCloud& cloud, double sigma,
                                    double min_weight) {
  if (!(sigma > 0.0)) throw InputError("gaussian_similarity: sigma must be positive");
  const int n = cloud.size();
  if (n < 2) throw InputError("gaussian_similarity: need at least 2 points");
  validate_cloud(cloud);

  const double inv_s2 = 1.0 / (sigma * sigma);
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = std::exp(-point_distance_squared(cloud, i, j) * inv_s2);
      if (w >= min_weight) {
        trips.emplace_back(i, j, w);
        trips.emplace_back(j, i, w);
      }
    }
  }
  Eigen::SparseMatrix<double> w(n, n);
  w.setFromTriplets(trips.begin(), trips.end());
  return finish(std::move(w));
}

SimilarityGraph knn_graph(const PointCloud& cloud, int k_nn, double sigma,
                          bool unit_weights, double min_weight) {
  if (!(sigma > 0.0)) throw InputError("knn_graph: sigma must be positive");
  const int n = cloud.size();
  if (k_nn < 1 || k_nn >= n)
    throw InputError("knn_graph: k_nn must satisfy 1 <= k_nn < n");
  validate_cloud(cloud);

  const double inv_s2 = 1.0 / (sigma * sigma);
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<std::pair<double, int>> cand(n - 1);
  for (int i = 0; i < n; ++i) {
    int m = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      cand[m++] = {point_distance_squared(cloud, i, j), j};
    }
    // ties broken toward the lower vertex index
    std::partial_sort(cand.begin(), cand.begin() + k_nn, cand.end());
    for (int t = 0; t < k_nn; ++t) {
      const int j = cand[t].second;
      const double w = unit_weights ? 1.0 : std::exp(-cand[t].first * inv_s2);
      if (w >= min_weight) trips.emplace_back(i, j, w);
    }
  }
  Eigen::SparseMatrix<double> raw(n, n);
  raw.setFromTriplets(trips.begin(), trips.end(),
                      [](double a, double b) { return std::max(a, b); });
  return symmetrize(raw);
}

SimilarityGraph symmetrize(const Eigen::SparseMatrix<double>& raw) {
  if (raw.rows() != raw.cols()) throw InputError("symmetrize: matrix must be square");
  for (int j = 0; j < raw.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(raw, j); it; ++it)
      if (it.value() < 0.0)
        throw InputError("symmetrize: negative weight at (" + std::to_string(it.row()) +
                         "," + std::to_string(it.col()) + ")");

  Eigen::SparseMatrix<double> a = raw;
  a.makeCompressed();
  Eigen::SparseMatrix<double> at = Eigen::SparseMatrix<double>(a.transpose());
  Eigen::SparseMatrix<double> s = a.cwiseMax(at);
  // drop self-loops and stored zeros
  s.prune([](int i, int j, double v) { return i != j && v > 0.0; });
  return finish(std::move(s));
}

SimilarityGraph lattice_graph(LatticeKind kind, const std::vector<int>& dims) {
  for (int d : dims)
    if (d <= 0) throw InputError("lattice_graph: dimensions must be positive");

  std::vector<Eigen::Triplet<double>> trips;
  auto add_edge = [&trips](int a, int b) {
    if (a == b) return;
    trips.emplace_back(a, b, 1.0);
    trips.emplace_back(b, a, 1.0);
  };

  int n = 0;
  switch (kind) {
    case LatticeKind::Path: {
      if (dims.size() != 1) throw InputError("path lattice takes one dimension");
      n = dims[0];
      for (int i = 0; i + 1 < n; ++i) add_edge(i, i + 1);
      break;
    }
    case LatticeKind::Cycle: {
      if (dims.size() != 1) throw InputError("cycle lattice takes one dimension");
      n = dims[0];
      for (int i = 0; i + 1 < n; ++i) add_edge(i, i + 1);
      // n == 2 would wrap onto the existing edge, so only close longer cycles
      if (n > 2) add_edge(n - 1, 0);
      break;
    }
    case LatticeKind::Grid:
    case LatticeKind::Torus: {
      if (dims.size() != 2) throw InputError("grid/torus lattice takes two dimensions");
      const int rows = dims[0], cols = dims[1];
      n = rows * cols;
      const bool wrap = kind == LatticeKind::Torus;
      auto id = [cols](int r, int c) { return r * cols + c; };
      // wrap edges on a dimension of size <= 2 would duplicate grid edges
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          if (c + 1 < cols) add_edge(id(r, c), id(r, c + 1));
          else if (wrap && cols > 2) add_edge(id(r, c), id(r, 0));
          if (r + 1 < rows) add_edge(id(r, c), id(r + 1, c));
          else if (wrap && rows > 2) add_edge(id(r, c), id(0, c));
        }
      }
      break;
    }
  }

  Eigen::SparseMatrix<double> w(n, n);
  // parallel edges (tiny wrap dimensions) collapse to a single unit edge
  w.setFromTriplets(trips.begin(), trips.end(),
                    [](double, double) { return 1.0; });
  return finish(std::move(w));
}

SimilarityGraph lattice_graph_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw InputError("lattice spec must look like kind:dims, e.g. path:10 or torus:30x30");
  const std::string kind_s = spec.substr(0, colon);
  const std::string dims_s = spec.substr(colon + 1);

  LatticeKind kind;
  if (kind_s == "path") kind = LatticeKind::Path;
  else if (kind_s == "cycle") kind = LatticeKind::Cycle;
  else if (kind_s == "grid") kind = LatticeKind::Grid;
  else if (kind_s == "torus") kind = LatticeKind::Torus;
  else throw InputError("unknown lattice kind: " + kind_s);

  std::vector<int> dims;
  std::stringstream ss(dims_s);
  std::string tok;
  while (std::getline(ss, tok, 'x')) {
    try {
      dims.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw InputError("bad lattice dimension: " + tok);
    }
  }
  if (dims.empty()) throw InputError("lattice spec has no dimensions");
  return lattice_graph(kind, dims);
}

std::vector<int> connected_components(const SimilarityGraph& g) {
  const int n = g.n();
  std::vector<int> label(n, -1);
  int next = 0;
  std::deque<int> queue;
  for (int root = 0; root < n; ++root) {
    if (label[root] != -1) continue;
    label[root] = next;
    queue.push_back(root);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (Eigen::SparseMatrix<double>::InnerIterator it(g.weights, u); it; ++it) {
        if (it.value() <= 0.0) continue;
        const int v = static_cast<int>(it.row());
        if (label[v] == -1) {
          label[v] = next;
          queue.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

int count_components(const SimilarityGraph& g) {
  const auto labels = connected_components(g);
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

bool is_connected(const SimilarityGraph& g) { return count_components(g) <= 1; }

} // namespace dirpart
