#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dirpart/eigensolver.hpp"
#include "dirpart/graph.hpp"

namespace dirpart {

// Indicator of a vertex subset S.
struct VertexSubset {
  std::vector<std::uint8_t> mask; // 0/1 per vertex

  static VertexSubset from_indices(int n, const std::vector<int>& indices);
  static VertexSubset from_labels(const std::vector<int>& labels, int which);

  int n() const { return static_cast<int>(mask.size()); }
  int size() const;
  std::vector<int> indices() const;
};

// Smallest eigenpair of the Laplacian restricted to S with zero boundary
// values on the complement. psi_d lives on the full vertex set, exactly zero
// off S, normalized psi' D^r psi = 1.
struct DirichletResult {
  double lambda = 0.0;
  Eigen::VectorXd psi_d;
  double residual = 0.0;
};

DirichletResult dirichlet_eigenvalue(const SimilarityGraph& g, double r,
                                     const VertexSubset& s,
                                     const EigsOptions& opts = {});

// Sum of per-cluster Dirichlet eigenvalues for a full labeling.
struct ObjectiveResult {
  double total = 0.0;
  std::vector<double> per_cluster;
};

ObjectiveResult partition_objective(const SimilarityGraph& g, double r,
                                    const std::vector<int>& labels,
                                    const EigsOptions& opts = {});

// lambda(S) <= cut(S, S^c) / vol_r(S): the indicator of S is an admissible
// trial function, so the Rayleigh quotient bound is unconditional.
struct PerimeterBound {
  double perimeter = 0.0; // sum of cross-edge weights
  double volume = 0.0;    // sum over S of d^r
  double bound = 0.0;
};

PerimeterBound perimeter_volume_bound(const SimilarityGraph& g, double r,
                                      const VertexSubset& s);

// Exhaustive global optimum over surjective k-labelings, vertex 0 pinned to
// label 0 (quotients one label permutation). Ties resolve to the
// lexicographically smallest labeling.
inline constexpr long kDefaultBruteForceBudget = 6561; // 3^8: n<=12 for k=2, n<=8 for k=3

struct BruteForceResult {
  std::vector<int> labels;
  double objective = 0.0;
  std::vector<double> per_cluster;
};

BruteForceResult brute_force_partition(const SimilarityGraph& g, double r, int k,
                                       long budget = kDefaultBruteForceBudget,
                                       const EigsOptions& opts = {});

} // namespace dirpart
