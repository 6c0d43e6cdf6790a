#include "dirpart/laplacian.hpp"

#include <cmath>

#include "dirpart/eigensolver.hpp"
#include "dirpart/errors.hpp"

namespace dirpart {

namespace {

void check_r(double r) {
  if (!(r >= 0.0 && r <= 1.0))
    throw InputError("degree exponent r must lie in [0,1], got " + std::to_string(r));
}

void check_degrees_positive(const Eigen::VectorXd& deg, double r) {
  if (r <= 0.0) return;
  for (int i = 0; i < deg.size(); ++i)
    if (!(deg[i] > 0.0))
      throw DegenerateInputError("vertex " + std::to_string(i) +
                                 " has zero degree; D^{-r} undefined for r > 0");
}

Eigen::VectorXd pow_vec(const Eigen::VectorXd& d, double e) {
  // std::pow(0,0) == 1, so r == 0 leaves zero-degree vertices harmless
  Eigen::VectorXd out(d.size());
  for (int i = 0; i < d.size(); ++i) out[i] = std::pow(d[i], e);
  return out;
}

} // namespace

StandardFormOperator::StandardFormOperator(const Eigen::SparseMatrix<double>& weights,
                                           Eigen::VectorXd degrees, double r,
                                           Eigen::VectorXd potential)
    : w_(&weights, [](const Eigen::SparseMatrix<double>*) {}) {
  init(std::move(degrees), r, std::move(potential));
}

StandardFormOperator::StandardFormOperator(Eigen::SparseMatrix<double>&& weights,
                                           Eigen::VectorXd degrees, double r,
                                           Eigen::VectorXd potential)
    : w_(std::make_shared<Eigen::SparseMatrix<double>>(std::move(weights))) {
  init(std::move(degrees), r, std::move(potential));
}

void StandardFormOperator::init(Eigen::VectorXd degrees, double r,
                                Eigen::VectorXd potential) {
  check_r(r);
  if (w_->rows() != w_->cols() || w_->rows() != degrees.size() ||
      degrees.size() != potential.size())
    throw InputError("standard form: weight/degree/potential dimensions disagree");
  check_degrees_positive(degrees, r);
  for (int i = 0; i < potential.size(); ++i)
    if (!(potential[i] >= 0.0))
      throw InputError("standard form: potential must be nonnegative at vertex " +
                       std::to_string(i));
  r_ = r;
  deg_ = std::move(degrees);
  dpow_half_ = pow_vec(deg_, r_ / 2.0);
  dpow_r_ = pow_vec(deg_, r_);
  scale_ = pow_vec(deg_, -r_ / 2.0);
  diag_ = pow_vec(deg_, 1.0 - r_) + potential;
}

void StandardFormOperator::apply(const Eigen::VectorXd& eta, Eigen::VectorXd& out) const {
  if (eta.size() != deg_.size())
    throw InputError("standard form apply: vector length mismatch");
  const Eigen::VectorXd scaled = scale_.cwiseProduct(eta);
  out.noalias() = *w_ * scaled;
  out.array() = diag_.array() * eta.array() - scale_.array() * out.array();
}

Eigen::VectorXd StandardFormOperator::apply(const Eigen::VectorXd& eta) const {
  Eigen::VectorXd out;
  apply(eta, out);
  return out;
}

Eigen::SparseMatrix<double> StandardFormOperator::assemble() const {
  const int m = n();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(w_->nonZeros()) + static_cast<std::size_t>(m));
  for (int j = 0; j < w_->outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(*w_, j); it; ++it)
      trips.emplace_back(it.row(), it.col(),
                         -scale_[it.row()] * it.value() * scale_[it.col()]);
  for (int i = 0; i < m; ++i) trips.emplace_back(i, i, diag_[i]);
  Eigen::SparseMatrix<double> h(m, m);
  h.setFromTriplets(trips.begin(), trips.end());
  return h;
}

Eigen::VectorXd StandardFormOperator::to_psi(const Eigen::VectorXd& eta) const {
  return scale_.cwiseProduct(eta);
}

Eigen::VectorXd StandardFormOperator::from_psi(const Eigen::VectorXd& psi) const {
  return dpow_half_.cwiseProduct(psi);
}

LaplacianOperator::LaplacianOperator(const SimilarityGraph& g, double r)
    : g_(&g), r_(r) {
  check_r(r);
  check_degrees_positive(g.degrees, r);
  dpow_neg_r_ = pow_vec(g.degrees, -r);
}

Eigen::VectorXd LaplacianOperator::apply(const Eigen::VectorXd& x) const {
  if (x.size() != g_->degrees.size())
    throw InputError("laplacian apply: vector length mismatch");
  Eigen::VectorXd lx = g_->degrees.cwiseProduct(x) - g_->weights * x;
  return dpow_neg_r_.cwiseProduct(lx);
}

SchrodingerOperator::SchrodingerOperator(LaplacianOperator base, double alpha,
                                         Eigen::VectorXd phi)
    : base_(std::move(base)), alpha_(alpha), phi_(std::move(phi)) {
  if (!(alpha_ >= 0.0)) throw InputError("alpha must be nonnegative");
  if (phi_.size() != base_.graph().degrees.size())
    throw InputError("phi length must match vertex count");
  for (int i = 0; i < phi_.size(); ++i)
    if (!(phi_[i] >= 0.0 && phi_[i] <= 1.0))
      throw InputError("phi must lie in [0,1] at vertex " + std::to_string(i));
}

Eigen::VectorXd SchrodingerOperator::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out = base_.apply(x);
  out.array() += alpha_ * (1.0 - phi_.array()) * x.array();
  return out;
}

StandardFormOperator SchrodingerOperator::standard_form() const {
  const auto& g = base_.graph();
  return StandardFormOperator(g.weights, g.degrees, base_.r(), potential());
}

double second_eigenvalue(const LaplacianOperator& op, double tol, int max_matvecs) {
  const auto& g = op.graph();
  if (g.n() < 2) throw InputError("second_eigenvalue needs at least 2 vertices");
  if (!is_connected(g)) return 0.0;

  SchrodingerOperator sch(op, 0.0, Eigen::VectorXd::Ones(g.n()));
  StandardFormOperator h = sch.standard_form();

  EigsOptions opts;
  opts.tol = tol;
  opts.max_matvecs = max_matvecs;
  if (g.n() <= opts.dense_threshold) {
    Eigen::MatrixXd dense = Eigen::MatrixXd(h.assemble());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(1);
  }
  // connected graph: the kernel of H is exactly span(d^{r/2})
  Eigen::VectorXd kernel = h.from_psi(Eigen::VectorXd::Ones(g.n()));
  return ground_state_deflated(h, kernel, opts).lambda;
}

} // namespace dirpart
