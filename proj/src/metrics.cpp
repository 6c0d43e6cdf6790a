#include "dirpart/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "dirpart/dirichlet.hpp"
#include "dirpart/errors.hpp"

namespace dirpart {

namespace {

int label_count(const std::vector<int>& labels, const char* what) {
  int k = 0;
  for (int l : labels) {
    if (l < 0) throw InputError(std::string(what) + " labels must be nonnegative");
    k = std::max(k, l + 1);
  }
  return k;
}

Eigen::MatrixXd contingency(const std::vector<int>& pred,
                            const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw InputError("label vectors have different lengths");
  if (pred.empty()) throw InputError("empty label vectors");
  const int kp = label_count(pred, "predicted");
  const int kt = label_count(truth, "true");
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(kp, kt);
  for (std::size_t v = 0; v < pred.size(); ++v)
    counts(pred[v], truth[v]) += 1.0;
  return counts;
}

} // namespace

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Eigen::MatrixXd counts = contingency(pred, truth);
  return counts.rowwise().maxCoeff().sum() / static_cast<double>(pred.size());
}

Eigen::MatrixXd confusion(const std::vector<int>& pred,
                          const std::vector<int>& truth) {
  Eigen::MatrixXd counts = contingency(pred, truth);
  for (int j = 0; j < counts.cols(); ++j) {
    const double col = counts.col(j).sum();
    if (col == 0.0)
      throw InputError("true class " + std::to_string(j) + " is empty");
    counts.col(j) /= col;
  }
  return counts;
}

NmfCheck nmf_identity_check(const SimilarityGraph& g,
                            const std::vector<int>& labels) {
  const int n = g.n();
  if (static_cast<int>(labels.size()) != n)
    throw InputError("labels length does not match the graph");
  const int k = label_count(labels, "partition");

  Eigen::MatrixXd v_mat = Eigen::MatrixXd::Zero(n, k);
  double lambda_sum = 0.0;
  for (int c = 0; c < k; ++c) {
    const VertexSubset s = VertexSubset::from_labels(labels, c);
    const std::vector<int> idx = s.indices();
    if (idx.empty()) throw InputError("cluster " + std::to_string(c) + " is empty");
    // connectivity of the induced subgraph: BFS over edges staying inside S
    {
      std::vector<char> seen(static_cast<std::size_t>(n), 0);
      std::vector<int> stack{idx[0]};
      seen[static_cast<std::size_t>(idx[0])] = 1;
      int reached = 1;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (Eigen::SparseMatrix<double>::InnerIterator it(g.weights, u); it; ++it) {
          const int w = static_cast<int>(it.row());
          if (!s.mask[static_cast<std::size_t>(w)] ||
              seen[static_cast<std::size_t>(w)])
            continue;
          seen[static_cast<std::size_t>(w)] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
      if (reached != static_cast<int>(idx.size()))
        throw InputError("cluster " + std::to_string(c) +
                         " is disconnected; eigenvector support is ambiguous");
    }
    const DirichletResult d = dirichlet_eigenvalue(g, 1.0, s);
    v_mat.col(c) = d.psi_d;
    lambda_sum += d.lambda;
  }

  Eigen::VectorXd sqrt_d(n), inv_sqrt_d(n);
  for (int i = 0; i < n; ++i) {
    if (!(g.degrees[i] > 0.0))
      throw DegenerateInputError("vertex " + std::to_string(i) +
                                 " has zero degree; r = 1 undefined");
    sqrt_d[i] = std::sqrt(g.degrees[i]);
    inv_sqrt_d[i] = 1.0 / sqrt_d[i];
  }

  const Eigen::MatrixXd a =
      inv_sqrt_d.asDiagonal() * Eigen::MatrixXd(g.weights) * inv_sqrt_d.asDiagonal();
  const Eigen::MatrixXd u = sqrt_d.asDiagonal() * v_mat;

  NmfCheck out;
  out.lhs = (a - u * u.transpose()).squaredNorm();
  out.rhs = a.squaredNorm() + 2.0 * lambda_sum - static_cast<double>(k);
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

} // namespace dirpart
