#pragma once

#include <Eigen/Dense>

#include "dirpart/laplacian.hpp"

namespace dirpart {

struct GroundState {
  double lambda = 0.0;
  Eigen::VectorXd psi;     // back-transformed, psi' D^r psi = 1, sum > 0
  double residual = 0.0;   // ||(D^{-r}(D-W) + pot) psi - lambda psi|| / ||psi||
  int iterations = 0;
};

struct EigsOptions {
  double tol = 1e-4;
  int max_matvecs = 20000;
  int dense_threshold = 500;              // n at or below: direct eigendecomposition
  const Eigen::VectorXd* warm_start = nullptr;  // psi-space initial guess
};

// Smallest eigenpair of the symmetric standard form, back-transformed to
// psi space. Iterative path is a preconditioned conjugate-direction scheme
// (single-vector LOBPCG with Jacobi preconditioning); throws
// ConvergenceError once the matvec budget is exhausted.
GroundState ground_state(const StandardFormOperator& H, const EigsOptions& opts = {});
GroundState ground_state(const SchrodingerOperator& op, const EigsOptions& opts = {});
GroundState ground_state(const SchrodingerOperator& op, double tol, int max_matvecs);

// Full dense eigendecomposition oracle; guarded to n <= 2000.
GroundState ground_state_dense(const StandardFormOperator& H);
GroundState ground_state_dense(const SchrodingerOperator& op);

// Smallest eigenpair orthogonal to eta_dir (eta-space direction, typically a
// known exact kernel vector); used for second eigenvalues.
GroundState ground_state_deflated(const StandardFormOperator& H,
                                  const Eigen::VectorXd& eta_dir,
                                  const EigsOptions& opts = {});

} // namespace dirpart
