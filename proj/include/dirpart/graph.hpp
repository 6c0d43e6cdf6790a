#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <string>
#include <vector>

namespace dirpart {

enum class Metric { Euclidean, SphereGeodesic };

/// A set of points, one per row, in any dimension. The metric tag selects
/// how pairwise distances are measured; sphere-geodesic points must be unit
/// vectors.
struct PointCloud {
  Eigen::MatrixXd points;
  Metric metric = Metric::Euclidean;

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

/// Squared distance between points i and j under the cloud's metric.
double point_distance_squared(const PointCloud& cloud, int i, int j);

/// Throws InputError on non-finite coordinates or, for the sphere metric,
/// rows that are not unit vectors (1e-9).
void validate_cloud(const PointCloud& cloud);

/// Weighted similarity graph: sparse symmetric nonnegative weights with a
/// zero diagonal, plus cached degrees d_i = sum_j w_ij. Immutable after
/// construction and safe to share across threads.
struct SimilarityGraph {
  Eigen::SparseMatrix<double> weights;
  Eigen::VectorXd degrees;

  int n() const { return static_cast<int>(weights.rows()); }
};

/// Kernel weights below this are dropped to preserve sparsity.
inline constexpr double kDefaultWeightFloor = 1e-12;

/// Complete graph with Gaussian kernel weights w_ij = exp(-d(x_i,x_j)^2 / sigma^2).
SimilarityGraph gaussian_similarity(const PointCloud& cloud, double sigma,
                                    double min_weight = kDefaultWeightFloor);

/// Keeps edges only between k_nn-nearest pairs (max-symmetrized), weighted by
/// the Gaussian kernel or by 1 when unit_weights is set.
SimilarityGraph knn_graph(const PointCloud& cloud, int k_nn, double sigma,
                          bool unit_weights = false,
                          double min_weight = kDefaultWeightFloor);

/// Max-symmetrization of a raw nonnegative sparse matrix: out_ij = max(W_ij, W_ji),
/// self-loops dropped. Idempotent.
SimilarityGraph symmetrize(const Eigen::SparseMatrix<double>& raw);

enum class LatticeKind { Path, Cycle, Grid, Torus };

/// Unit-weight nearest-neighbor lattice. Path and cycle take one dimension,
/// grid and torus take two; the torus wraps both.
SimilarityGraph lattice_graph(LatticeKind kind, const std::vector<int>& dims);

/// Parses "path:10", "torus:30x30", etc.
SimilarityGraph lattice_graph_from_spec(const std::string& spec);

/// Component labels in 0..c-1, assigned in order of each component's smallest
/// vertex. Two vertices share a label iff joined by a positive-weight path.
std::vector<int> connected_components(const SimilarityGraph& g);

int count_components(const SimilarityGraph& g);
bool is_connected(const SimilarityGraph& g);

} // namespace dirpart
