#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dirpart/graph.hpp"

namespace dirpart {

// Fraction of vertices covered by their predicted cluster's dominant true
// class; invariant under relabeling of the predictions.
double purity(const std::vector<int>& pred, const std::vector<int>& truth);

// Entry (i,j) = |pred_i intersect true_j| / |true_j|; columns sum to one.
Eigen::MatrixXd confusion(const std::vector<int>& pred,
                          const std::vector<int>& truth);

// Algebraic check that clustering by Dirichlet eigenvectors solves an
// orthogonal nonnegative factorization: with U = D^{1/2} [psi_1 | ... | psi_k]
// built from the exact per-cluster eigenvectors at r = 1,
//   ||D^{-1/2} W D^{-1/2} - U U'||_F^2  =  ||D^{-1/2} W D^{-1/2}||_F^2
//                                          + 2 * sum_i lambda(V_i) - k.
// Requires every cluster nonempty and connected (eigenvector support).
struct NmfCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0; // |lhs - rhs|
};

NmfCheck nmf_identity_check(const SimilarityGraph& g,
                            const std::vector<int>& labels);

} // namespace dirpart
