#include "dirpart/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "dirpart/errors.hpp"

namespace dirpart {

VertexSubset VertexSubset::from_indices(int n, const std::vector<int>& indices) {
  if (n < 0) throw InputError("vertex subset: negative universe size");
  VertexSubset s;
  s.mask.assign(static_cast<std::size_t>(n), 0);
  for (int i : indices) {
    if (i < 0 || i >= n)
      throw InputError("vertex subset: index " + std::to_string(i) + " out of range");
    s.mask[static_cast<std::size_t>(i)] = 1;
  }
  return s;
}

VertexSubset VertexSubset::from_labels(const std::vector<int>& labels, int which) {
  VertexSubset s;
  s.mask.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    s.mask[i] = labels[i] == which ? 1 : 0;
  return s;
}

int VertexSubset::size() const {
  int c = 0;
  for (auto m : mask) c += m;
  return c;
}

std::vector<int> VertexSubset::indices() const {
  std::vector<int> out;
  out.reserve(mask.size());
  for (int i = 0; i < n(); ++i)
    if (mask[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

namespace {

void check_subset(const SimilarityGraph& g, const VertexSubset& s) {
  if (s.n() != g.n())
    throw InputError("vertex subset size does not match the graph");
  for (auto m : s.mask)
    if (m != 0 && m != 1) throw InputError("vertex subset mask must be 0/1");
}

} // namespace

DirichletResult dirichlet_eigenvalue(const SimilarityGraph& g, double r,
                                     const VertexSubset& s, const EigsOptions& opts) {
  check_subset(g, s);
  const std::vector<int> idx = s.indices();
  const int m = static_cast<int>(idx.size());
  if (m == 0) throw InputError("Dirichlet eigenvalue of the empty set");

  // principal submatrix of W; diagonal keeps the FULL-graph degrees, which is
  // what the zero boundary condition leaves behind
  std::vector<int> pos(static_cast<std::size_t>(g.n()), -1);
  for (int j = 0; j < m; ++j) pos[static_cast<std::size_t>(idx[j])] = j;

  std::vector<Eigen::Triplet<double>> trips;
  for (int j = 0; j < m; ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(g.weights, idx[j]); it; ++it) {
      const int pi = pos[static_cast<std::size_t>(it.row())];
      if (pi >= 0) trips.emplace_back(pi, j, it.value());
    }
  }
  Eigen::SparseMatrix<double> w_ss(m, m);
  w_ss.setFromTriplets(trips.begin(), trips.end());

  Eigen::VectorXd deg_s(m);
  for (int j = 0; j < m; ++j) deg_s[j] = g.degrees[idx[j]];

  StandardFormOperator h(std::move(w_ss), std::move(deg_s), r,
                         Eigen::VectorXd::Zero(m));

  EigsOptions sub_opts = opts;
  Eigen::VectorXd restricted_start;
  if (opts.warm_start && opts.warm_start->size() == g.n()) {
    restricted_start.resize(m);
    for (int j = 0; j < m; ++j) restricted_start[j] = (*opts.warm_start)[idx[j]];
    sub_opts.warm_start = &restricted_start;
  }

  const GroundState gs = ground_state(h, sub_opts);

  DirichletResult out;
  out.lambda = gs.lambda;
  out.residual = gs.residual;
  out.psi_d = Eigen::VectorXd::Zero(g.n());
  for (int j = 0; j < m; ++j) out.psi_d[idx[j]] = gs.psi[j];
  return out;
}

ObjectiveResult partition_objective(const SimilarityGraph& g, double r,
                                    const std::vector<int>& labels,
                                    const EigsOptions& opts) {
  if (static_cast<int>(labels.size()) != g.n())
    throw InputError("labels length does not match the graph");
  int k = 0;
  for (int l : labels) {
    if (l < 0) throw InputError("labels must be nonnegative");
    k = std::max(k, l + 1);
  }
  if (k == 0) throw InputError("empty labeling");

  ObjectiveResult res;
  res.per_cluster.reserve(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    const VertexSubset s = VertexSubset::from_labels(labels, c);
    if (s.size() == 0)
      throw InputError("cluster " + std::to_string(c) + " is empty");
    const double lam = dirichlet_eigenvalue(g, r, s, opts).lambda;
    res.per_cluster.push_back(lam);
    res.total += lam;
  }
  return res;
}

PerimeterBound perimeter_volume_bound(const SimilarityGraph& g, double r,
                                      const VertexSubset& s) {
  check_subset(g, s);
  if (s.size() == 0) throw InputError("perimeter bound of the empty set");

  PerimeterBound out;
  for (int j = 0; j < g.weights.outerSize(); ++j) {
    if (!s.mask[static_cast<std::size_t>(j)]) continue;
    // column j inside S: stored (i,j) entries with i outside S are each
    // undirected cross edge exactly once
    for (Eigen::SparseMatrix<double>::InnerIterator it(g.weights, j); it; ++it)
      if (!s.mask[static_cast<std::size_t>(it.row())]) out.perimeter += it.value();
  }
  for (int i = 0; i < g.n(); ++i)
    if (s.mask[static_cast<std::size_t>(i)]) out.volume += std::pow(g.degrees[i], r);
  if (!(out.volume > 0.0))
    throw DegenerateInputError("subset has zero d^r volume");
  out.bound = out.perimeter / out.volume;
  return out;
}

BruteForceResult brute_force_partition(const SimilarityGraph& g, double r, int k,
                                       long budget, const EigsOptions& opts) {
  const int n = g.n();
  if (k < 1) throw InputError("brute force: k must be at least 1");
  if (k > n) throw InputError("brute force: k exceeds vertex count");

  // total labeling count k^n against the budget, overflow-safe
  double total = 1.0;
  for (int i = 0; i < n; ++i) total *= k;
  if (total > static_cast<double>(budget)) {
    std::ostringstream msg;
    msg << "brute force: k^n = " << std::setprecision(3) << total
        << " exceeds budget " << budget;
    throw InputError(msg.str());
  }

  BruteForceResult best;
  best.objective = std::numeric_limits<double>::infinity();

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  long count = 1;
  for (int i = 0; i < n - 1; ++i) count *= k;
  std::vector<int> hist(static_cast<std::size_t>(k));

  for (long code = 0; code < count; ++code) {
    // vertex 0 pinned to label 0; vertex 1 is the most significant digit so
    // ascending codes enumerate labelings in lexicographic order
    long c = code;
    for (int v = n - 1; v >= 1; --v) {
      labels[static_cast<std::size_t>(v)] = static_cast<int>(c % k);
      c /= k;
    }
    std::fill(hist.begin(), hist.end(), 0);
    for (int l : labels) ++hist[static_cast<std::size_t>(l)];
    if (std::any_of(hist.begin(), hist.end(), [](int h) { return h == 0; }))
      continue;

    double obj = 0.0;
    for (int cl = 0; cl < k && obj < best.objective; ++cl)
      obj += dirichlet_eigenvalue(g, r, VertexSubset::from_labels(labels, cl), opts)
                 .lambda;
    if (obj < best.objective) {
      best.objective = obj;
      best.labels = labels;
    }
  }

  // per-cluster values of the winner
  best.per_cluster.clear();
  for (int cl = 0; cl < k; ++cl)
    best.per_cluster.push_back(
        dirichlet_eigenvalue(g, r, VertexSubset::from_labels(best.labels, cl), opts)
            .lambda);
  return best;
}

} // namespace dirpart
