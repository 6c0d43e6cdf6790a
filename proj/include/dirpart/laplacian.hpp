#pragma once

#include <memory>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dirpart/graph.hpp"

namespace dirpart {

// Symmetric standard form H = D^{1-r} - D^{-r/2} W D^{-r/2} + diag(potential),
// acting on eta = D^{r/2} psi. Same spectrum as D^{-r}(D-W) + diag(potential).
//
// The degree vector is supplied separately from the weight matrix so that
// restricted subproblems can keep the full-graph degrees on the diagonal.
class StandardFormOperator {
 public:
  // View over weights owned elsewhere (must outlive the operator).
  StandardFormOperator(const Eigen::SparseMatrix<double>& weights,
                       Eigen::VectorXd degrees, double r,
                       Eigen::VectorXd potential);
  // Owning variant for restricted subproblems.
  StandardFormOperator(Eigen::SparseMatrix<double>&& weights,
                       Eigen::VectorXd degrees, double r,
                       Eigen::VectorXd potential);

  int n() const { return static_cast<int>(deg_.size()); }
  double r() const { return r_; }

  void apply(const Eigen::VectorXd& eta, Eigen::VectorXd& out) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& eta) const;
  Eigen::SparseMatrix<double> assemble() const;

  Eigen::VectorXd to_psi(const Eigen::VectorXd& eta) const;    // D^{-r/2} eta
  Eigen::VectorXd from_psi(const Eigen::VectorXd& psi) const;  // D^{r/2} psi

  // diag(H) = d^{1-r} + potential; scale() = d^{-r/2}; dpow_r() = d^r.
  const Eigen::VectorXd& diag() const { return diag_; }
  const Eigen::VectorXd& scale() const { return scale_; }
  const Eigen::VectorXd& dpow_r() const { return dpow_r_; }

 private:
  void init(Eigen::VectorXd degrees, double r, Eigen::VectorXd potential);

  std::shared_ptr<const Eigen::SparseMatrix<double>> w_;
  Eigen::VectorXd deg_, diag_, scale_, dpow_half_, dpow_r_;
  double r_ = 0.0;
};

// The operator family D^{-r}(D - W), r in [0,1]. Annihilates constants.
class LaplacianOperator {
 public:
  LaplacianOperator(const SimilarityGraph& g, double r);

  const SimilarityGraph& graph() const { return *g_; }
  double r() const { return r_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

 private:
  const SimilarityGraph* g_;
  double r_;
  Eigen::VectorXd dpow_neg_r_;
};

// Laplacian plus the confinement potential alpha * (1 - phi).
class SchrodingerOperator {
 public:
  SchrodingerOperator(LaplacianOperator base, double alpha, Eigen::VectorXd phi);

  const LaplacianOperator& base() const { return base_; }
  double alpha() const { return alpha_; }
  const Eigen::VectorXd& phi() const { return phi_; }
  Eigen::VectorXd potential() const { return alpha_ * (Eigen::VectorXd::Ones(phi_.size()) - phi_); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  StandardFormOperator standard_form() const;

 private:
  LaplacianOperator base_;
  double alpha_;
  Eigen::VectorXd phi_;
};

// Second smallest eigenvalue of D^{-r}(D-W). Exactly 0 for disconnected
// graphs (kernel dimension >= 2); otherwise computed on the standard form.
double second_eigenvalue(const LaplacianOperator& op, double tol = 1e-4,
                         int max_matvecs = 20000);

} // namespace dirpart
