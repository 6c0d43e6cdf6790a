#include "dirpart/eigensolver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dirpart/errors.hpp"
#include "dirpart/rng.hpp"

namespace dirpart {

namespace {

constexpr int kDenseOracleGuard = 2000;

// Residual of the eigenpair (lambda, x) measured on the original (psi-space)
// operator: ||scale o (Hx - lambda x)|| / ||scale o x||.
double psi_residual(const StandardFormOperator& h, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& hx, double lambda) {
  const auto& s = h.scale();
  double num = 0.0, den = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    const double ri = s[i] * (hx[i] - lambda * x[i]);
    const double xi = s[i] * x[i];
    num += ri * ri;
    den += xi * xi;
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

GroundState finalize(const StandardFormOperator& h, double lambda,
                     const Eigen::VectorXd& eta, double residual, int iterations) {
  Eigen::VectorXd psi = h.to_psi(eta);
  const auto& dr = h.dpow_r();
  double nrm2 = 0.0;
  for (int i = 0; i < psi.size(); ++i) nrm2 += dr[i] * psi[i] * psi[i];
  if (!(nrm2 > 0.0))
    throw ConvergenceError("eigensolver produced a zero vector", residual, 0);
  psi /= std::sqrt(nrm2);

  double sum = psi.sum();
  if (sum == 0.0) {
    int imax = 0;
    psi.cwiseAbs().maxCoeff(&imax);
    sum = psi[imax];
  }
  if (sum < 0.0) psi = -psi;

  GroundState gs;
  gs.lambda = lambda;
  gs.psi = std::move(psi);
  gs.residual = residual;
  gs.iterations = iterations;
  return gs;
}

Eigen::VectorXd deterministic_start(int n) {
  Rng rng(0x5deece66dULL ^ (static_cast<uint64_t>(n) << 17));
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.normal();
  return x;
}

struct IterResult {
  double lambda = 0.0;
  Eigen::VectorXd eta;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int matvecs = 0;
  bool converged = false;
};

// Single-vector LOBPCG: Rayleigh-Ritz over span{x, preconditioned residual,
// previous search direction}, Jacobi preconditioner, one matvec per step.
// `deflate` (if given) must be an exact eigenvector direction of H; the
// iteration is confined to its orthogonal complement.
IterResult lobpcg(const StandardFormOperator& h, Eigen::VectorXd x,
                  const Eigen::VectorXd* deflate, double tol, int max_matvecs) {
  const int n = h.n();
  constexpr double kDropTol = 1e-10;

  Eigen::VectorXd prec(n);
  {
    const double dmax = h.diag().maxCoeff();
    const double floor = dmax > 0.0 ? 1e-12 * dmax : 1.0;
    for (int i = 0; i < n; ++i) prec[i] = 1.0 / std::max(h.diag()[i], floor);
  }

  Eigen::VectorXd v;
  if (deflate) v = deflate->normalized();
  auto project = [&](Eigen::VectorXd& u) {
    if (deflate) u -= v.dot(u) * v;
  };

  project(x);
  if (x.norm() <= 1e-14) {
    x = deterministic_start(n);
    project(x);
  }
  x.normalize();

  IterResult best;
  int matvecs = 0;
  auto out_of_budget = [&] { return matvecs >= max_matvecs; };

  Eigen::VectorXd hx = h.apply(x);
  ++matvecs;
  double lambda = x.dot(hx);

  Eigen::VectorXd p = Eigen::VectorXd::Zero(n), hp = Eigen::VectorXd::Zero(n);
  bool has_p = false;

  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd r = hx - lambda * x;
    const double res = psi_residual(h, x, hx, lambda);
    if (res < best.residual) {
      best.lambda = lambda;
      best.eta = x;
      best.residual = res;
    }
    best.iterations = iter;
    best.matvecs = matvecs;
    if (res <= tol) {
      best.lambda = lambda;
      best.eta = x;
      best.residual = res;
      best.converged = true;
      return best;
    }
    if (out_of_budget()) return best;

    Eigen::VectorXd w = prec.cwiseProduct(r);
    project(w);
    Eigen::VectorXd hw = h.apply(w);
    ++matvecs;

    // orthonormalize [x | w | p]; identical column operations applied to the
    // tracked H-images keep HB consistent without extra matvecs
    const double c0 = x.dot(w);
    w -= c0 * x;
    hw -= c0 * hx;
    const double wn = w.norm();
    const bool has_w = wn > kDropTol;
    if (has_w) {
      w /= wn;
      hw /= wn;
    }

    bool use_p = has_p;
    if (use_p) {
      const double a0 = x.dot(p);
      p -= a0 * x;
      hp -= a0 * hx;
      if (has_w) {
        const double a1 = w.dot(p);
        p -= a1 * w;
        hp -= a1 * hw;
      }
      const double pn = p.norm();
      use_p = pn > kDropTol;
      if (use_p) {
        p /= pn;
        hp /= pn;
      }
    }

    if (!has_w && !use_p) return best; // stalled: nothing new to search

    const int m = 1 + (has_w ? 1 : 0) + (use_p ? 1 : 0);
    Eigen::MatrixXd B(n, m), HB(n, m);
    int col = 0;
    B.col(col) = x;
    HB.col(col) = hx;
    ++col;
    if (has_w) {
      B.col(col) = w;
      HB.col(col) = hw;
      ++col;
    }
    if (use_p) {
      B.col(col) = p;
      HB.col(col) = hp;
      ++col;
    }

    Eigen::MatrixXd A = B.transpose() * HB;
    A = (0.5 * (A + A.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    lambda = es.eigenvalues()(0);

    Eigen::VectorXd y_p = y;
    y_p(0) = 0.0;
    p = B * y_p;
    hp = HB * y_p;
    const double pn = p.norm();
    has_p = pn > kDropTol;
    if (has_p) {
      p /= pn;
      hp /= pn;
    }

    x = B * y;
    hx = HB * y;
    project(x); // exact eigenvector deflation: H-image unchanged by projection
    const double xn = x.norm();
    if (!(xn > kDropTol)) return best; // collapsed onto the deflated direction
    x /= xn;
    hx /= xn;

    if ((iter & 63) == 63) {
      if (out_of_budget()) return best;
      h.apply(x, hx); // refresh cancels linear-combination roundoff drift
      ++matvecs;
    }
    lambda = x.dot(hx);
  }
}

[[noreturn]] void throw_budget(const IterResult& r, double tol) {
  std::ostringstream msg;
  msg << "ground state not converged: best residual " << r.residual << " after "
      << r.matvecs << " matvecs (tol " << tol << ")";
  throw ConvergenceError(msg.str(), r.residual, r.matvecs);
}

GroundState dense_smallest(const StandardFormOperator& h,
                           const Eigen::VectorXd* deflate) {
  Eigen::MatrixXd a = Eigen::MatrixXd(h.assemble());
  if (deflate) {
    // rank-one shift moves the (exact eigenvector) deflated direction to the
    // top of the spectrum; Gershgorin bound keeps it above everything else
    const Eigen::VectorXd v = deflate->normalized();
    const double bound = a.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
    a += bound * v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("dense eigendecomposition failed", 0.0, 0);
  const double lambda = es.eigenvalues()(0);
  const Eigen::VectorXd x = es.eigenvectors().col(0);
  const Eigen::VectorXd hx = h.apply(x);
  return finalize(h, lambda, x, psi_residual(h, x, hx, lambda), 0);
}

} // namespace

GroundState ground_state(const StandardFormOperator& h, const EigsOptions& opts) {
  if (!(opts.tol > 0.0)) throw InputError("eigensolver tol must be positive");
  if (h.n() <= opts.dense_threshold) return dense_smallest(h, nullptr);

  Eigen::VectorXd x0;
  if (opts.warm_start) {
    if (opts.warm_start->size() != h.n())
      throw InputError("warm start length mismatch");
    x0 = h.from_psi(*opts.warm_start);
  } else {
    x0 = deterministic_start(h.n());
  }
  IterResult r = lobpcg(h, std::move(x0), nullptr, opts.tol, opts.max_matvecs);
  if (!r.converged) throw_budget(r, opts.tol);
  return finalize(h, r.lambda, r.eta, r.residual, r.iterations);
}

GroundState ground_state(const SchrodingerOperator& op, const EigsOptions& opts) {
  return ground_state(op.standard_form(), opts);
}

GroundState ground_state(const SchrodingerOperator& op, double tol, int max_matvecs) {
  EigsOptions opts;
  opts.tol = tol;
  opts.max_matvecs = max_matvecs;
  return ground_state(op, opts);
}

GroundState ground_state_dense(const StandardFormOperator& h) {
  if (h.n() > kDenseOracleGuard)
    throw InputError("ground_state_dense limited to n <= " +
                     std::to_string(kDenseOracleGuard) + ", got n = " +
                     std::to_string(h.n()));
  return dense_smallest(h, nullptr);
}

GroundState ground_state_dense(const SchrodingerOperator& op) {
  return ground_state_dense(op.standard_form());
}

GroundState ground_state_deflated(const StandardFormOperator& h,
                                  const Eigen::VectorXd& eta_dir,
                                  const EigsOptions& opts) {
  if (eta_dir.size() != h.n()) throw InputError("deflation direction length mismatch");
  if (!(opts.tol > 0.0)) throw InputError("eigensolver tol must be positive");
  if (h.n() <= opts.dense_threshold) return dense_smallest(h, &eta_dir);

  Eigen::VectorXd x0 = opts.warm_start ? h.from_psi(*opts.warm_start)
                                       : deterministic_start(h.n());
  IterResult r = lobpcg(h, std::move(x0), &eta_dir, opts.tol, opts.max_matvecs);
  if (!r.converged) throw_budget(r, opts.tol);
  return finalize(h, r.lambda, r.eta, r.residual, r.iterations);
}

} // namespace dirpart
