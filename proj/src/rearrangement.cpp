#include "dirpart/rearrangement.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <exception>
#include <limits>
#include <thread>

#include <json.hpp>

#include "dirpart/errors.hpp"
#include "dirpart/laplacian.hpp"

namespace dirpart {

Eigen::VectorXd PartitionState::phi(int i) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<int>(labels.size()));
  for (std::size_t v = 0; v < labels.size(); ++v)
    if (labels[v] == i) out[static_cast<int>(v)] = 1.0;
  return out;
}

std::string report_to_json(const RunReport& report, int indent) {
  nlohmann::json j;
  j["k"] = report.k;
  j["r"] = report.r;
  j["alpha"] = report.alpha;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["energy_history"] = report.energy_history;
  j["labels"] = report.labels;
  auto conf = nlohmann::json::array();
  for (int v = 0; v < report.confidences.rows(); ++v) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < report.confidences.cols(); ++c)
      row.push_back(report.confidences(v, c));
    conf.push_back(std::move(row));
  }
  j["confidences"] = std::move(conf);
  j["representatives"] = report.representatives;
  auto res = nlohmann::json::array();
  for (const auto& e : report.reseeds)
    res.push_back({{"iteration", e.iteration}, {"cluster", e.cluster}, {"vertex", e.vertex}});
  j["reseeds"] = std::move(res);
  j["wall_time_s"] = report.wall_time_s;
  return j.dump(indent);
}

GroundState relaxed_energy(const SimilarityGraph& g, double r, double alpha,
                           const Eigen::VectorXd& phi, const EigsOptions& opts) {
  SchrodingerOperator op(LaplacianOperator(g, r), alpha, phi);
  return ground_state(op, opts);
}

double resolve_alpha(const RunConfig& config, const SimilarityGraph& g) {
  if (config.alpha.value && config.alpha.scale)
    throw InputError("alpha policy: set an explicit value or a scale, not both");
  if (config.alpha.value) {
    if (!(*config.alpha.value > 0.0))
      throw InputError("explicit alpha must be positive");
    return *config.alpha.value;
  }
  const double c = config.alpha.scale ? *config.alpha.scale
                                      : static_cast<double>(config.k);
  if (!(c > 0.0)) throw InputError("alpha scale must be positive");
  const double lam2 = second_eigenvalue(LaplacianOperator(g, config.r),
                                        config.tol, config.max_matvecs);
  if (!(lam2 > 0.0))
    throw DegenerateInputError(
        "lambda_2 = 0 (graph is disconnected); pass an explicit alpha");
  return c * lam2;
}

std::vector<int> init_random(int n, int k, Rng& rng) {
  if (k < 1) throw InputError("init: k must be at least 1");
  if (k > n) throw InputError("init: k exceeds vertex count");

  std::vector<int> labels(static_cast<std::size_t>(n));
  std::vector<int> count(static_cast<std::size_t>(k), 0);
  for (auto& l : labels) {
    l = rng.uniform_int(0, k - 1);
    ++count[static_cast<std::size_t>(l)];
  }
  // pigeonhole: while some label is missing, another has a spare vertex
  for (int missing = 0; missing < k; ++missing) {
    while (count[static_cast<std::size_t>(missing)] == 0) {
      const int v = rng.uniform_int(0, n - 1);
      const int old = labels[static_cast<std::size_t>(v)];
      if (count[static_cast<std::size_t>(old)] < 2) continue;
      --count[static_cast<std::size_t>(old)];
      labels[static_cast<std::size_t>(v)] = missing;
      ++count[static_cast<std::size_t>(missing)];
    }
  }
  return labels;
}

std::vector<int> init_random(int n, int k, std::uint64_t seed) {
  Rng rng(seed);
  return init_random(n, k, rng);
}

std::vector<int> voronoi_labels(const SimilarityGraph& g,
                                const std::vector<int>& generators) {
  const int n = g.n();
  if (generators.empty()) throw InputError("voronoi: no generators");
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::deque<int> queue;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const int v = generators[i];
    if (v < 0 || v >= n)
      throw InputError("voronoi: generator " + std::to_string(v) + " out of range");
    if (labels[static_cast<std::size_t>(v)] != -1)
      throw InputError("voronoi: duplicate generator " + std::to_string(v));
    labels[static_cast<std::size_t>(v)] = static_cast<int>(i);
    queue.push_back(v);
  }
  // FIFO multi-source BFS with sources enqueued in index order: within each
  // hop level the queue stays sorted by generator index, so equal-distance
  // ties resolve to the lowest index
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (Eigen::SparseMatrix<double>::InnerIterator it(g.weights, u); it; ++it) {
      if (it.value() <= 0.0) continue;
      const int v = static_cast<int>(it.row());
      if (labels[static_cast<std::size_t>(v)] == -1) {
        labels[static_cast<std::size_t>(v)] = labels[static_cast<std::size_t>(u)];
        queue.push_back(v);
      }
    }
  }
  for (int v = 0; v < n; ++v)
    if (labels[static_cast<std::size_t>(v)] == -1)
      throw InputError("voronoi: vertex " + std::to_string(v) +
                       " unreachable from every generator (graph disconnected)");
  return labels;
}

std::vector<int> init_voronoi(const SimilarityGraph& g, int k, Rng& rng) {
  const int n = g.n();
  if (k < 1) throw InputError("init: k must be at least 1");
  if (k > n) throw InputError("init: k exceeds vertex count");
  // partial Fisher-Yates draw of k distinct vertices
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::vector<int> gen(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const int j = rng.uniform_int(i, n - 1);
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    gen[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(i)];
  }
  return voronoi_labels(g, gen);
}

std::vector<int> init_voronoi(const SimilarityGraph& g, int k, std::uint64_t seed) {
  Rng rng(seed);
  return init_voronoi(g, k, rng);
}

std::vector<int> assign_labels(const Eigen::MatrixXd& psis,
                               const std::vector<int>& current,
                               const std::vector<int>* supervision) {
  const int n = static_cast<int>(psis.rows());
  const int k = static_cast<int>(psis.cols());
  if (static_cast<int>(current.size()) != n)
    throw InputError("assign: label/psi size mismatch");
  if (supervision && static_cast<int>(supervision->size()) != n)
    throw InputError("assign: supervision length mismatch");

  std::vector<int> out(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    if (supervision && (*supervision)[static_cast<std::size_t>(v)] >= 0) {
      out[static_cast<std::size_t>(v)] = (*supervision)[static_cast<std::size_t>(v)];
      continue;
    }
    const double best = psis.row(v).maxCoeff();
    const int cur = current[static_cast<std::size_t>(v)];
    if (cur >= 0 && cur < k && psis(v, cur) == best) {
      out[static_cast<std::size_t>(v)] = cur; // ties keep the current label
      continue;
    }
    for (int j = 0; j < k; ++j) {
      if (psis(v, j) == best) {
        out[static_cast<std::size_t>(v)] = j;
        break;
      }
    }
  }
  return out;
}

PartitionState rearrangement_step(const SimilarityGraph& g, double r, double alpha,
                                  const PartitionState& state,
                                  const std::vector<int>* supervision,
                                  const EigsOptions& opts,
                                  std::vector<ReseedEvent>* reseeds) {
  const int n = g.n();
  const int k = state.k;
  if (k < 1) throw InputError("rearrangement step: state has no clusters");
  if (static_cast<int>(state.labels.size()) != n)
    throw InputError("rearrangement step: label length mismatch");

  const LaplacianOperator lap(g, r);
  const bool warm = static_cast<int>(state.eigenpairs.size()) == k;

  std::vector<GroundState> pairs(static_cast<std::size_t>(k));
  Eigen::MatrixXd psis(n, k);
  double energy = 0.0;
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd phi = state.phi(i);
    SchrodingerOperator op(lap, alpha, phi);
    EigsOptions o = opts;
    // warm start from the previous eigenvector; first sweep starts from the
    // indicator itself, which concentrates mass in the right region
    o.warm_start = warm ? &state.eigenpairs[static_cast<std::size_t>(i)].psi : &phi;
    try {
      pairs[static_cast<std::size_t>(i)] = ground_state(op, o);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("iteration " + std::to_string(state.iteration) +
                                 ", cluster " + std::to_string(i) + ": " + e.what(),
                             e.best_residual(), e.matvecs());
    }
    psis.col(i) = pairs[static_cast<std::size_t>(i)].psi;
    energy += pairs[static_cast<std::size_t>(i)].lambda;
  }

  std::vector<int> next = assign_labels(psis, state.labels, supervision);

  std::vector<int> hist(static_cast<std::size_t>(k), 0);
  for (int l : next) ++hist[static_cast<std::size_t>(l)];
  for (int c = 0; c < k; ++c) {
    if (hist[static_cast<std::size_t>(c)] != 0) continue;
    // reseed an emptied cluster with the least-confident movable vertex
    int best_v = -1;
    double best_conf = std::numeric_limits<double>::infinity();
    for (int v = 0; v < n; ++v) {
      if (supervision && (*supervision)[static_cast<std::size_t>(v)] >= 0) continue;
      if (hist[static_cast<std::size_t>(next[static_cast<std::size_t>(v)])] < 2)
        continue;
      const double conf = psis.row(v).maxCoeff();
      if (conf < best_conf) {
        best_conf = conf;
        best_v = v;
      }
    }
    if (best_v < 0)
      throw DegenerateInputError("cannot reseed empty cluster " + std::to_string(c) +
                                 ": no movable vertex");
    --hist[static_cast<std::size_t>(next[static_cast<std::size_t>(best_v)])];
    next[static_cast<std::size_t>(best_v)] = c;
    hist[static_cast<std::size_t>(c)] = 1;
    if (reseeds) reseeds->push_back({state.iteration, c, best_v});
  }

  PartitionState out;
  out.k = k;
  out.labels = std::move(next);
  out.eigenpairs = std::move(pairs);
  out.energy = energy;
  out.iteration = state.iteration + 1;
  return out;
}

namespace {

struct RestartOutcome {
  bool ok = false;
  std::string error;
  PartitionState state;
  std::vector<double> energy_history;
  std::vector<ReseedEvent> reseeds;
  bool converged = false;
};

void validate_config(const SimilarityGraph& g, const RunConfig& config) {
  if (config.k < 1) throw InputError("k must be at least 1");
  if (config.k > g.n()) throw InputError("k exceeds vertex count");
  if (config.max_iter < 1) throw InputError("max_iter must be at least 1");
  if (config.restarts < 1) throw InputError("restarts must be at least 1");
  if (!(config.tol > 0.0)) throw InputError("tol must be positive");
  if (!config.supervision.empty()) {
    if (static_cast<int>(config.supervision.size()) != g.n())
      throw InputError("supervision length must match vertex count");
    for (int l : config.supervision)
      if (l < -1 || l >= config.k)
        throw InputError("supervision labels must be -1 or in [0,k)");
  }
}

RestartOutcome run_one_restart(const SimilarityGraph& g, const RunConfig& config,
                               double alpha, int restart_idx) {
  RestartOutcome out;
  Rng rng = Rng::for_restart(config.seed, restart_idx);

  PartitionState state;
  state.k = config.k;
  state.labels = config.init == RunConfig::Init::Voronoi
                     ? init_voronoi(g, config.k, rng)
                     : init_random(g.n(), config.k, rng);
  const std::vector<int>* sup =
      config.supervision.empty() ? nullptr : &config.supervision;
  if (sup)
    for (std::size_t v = 0; v < config.supervision.size(); ++v)
      if (config.supervision[v] >= 0) state.labels[v] = config.supervision[v];

  EigsOptions opts;
  opts.tol = config.tol;
  opts.max_matvecs = config.max_matvecs;
  opts.dense_threshold = config.dense_threshold;

  for (int iter = 0; iter < config.max_iter; ++iter) {
    PartitionState next =
        rearrangement_step(g, config.r, alpha, state, sup, opts, &out.reseeds);
    out.energy_history.push_back(next.energy);
    const bool fixed = next.labels == state.labels;
    state = std::move(next);
    if (fixed) {
      out.converged = true;
      break;
    }
  }
  out.state = std::move(state);
  out.ok = true;
  return out;
}

} // namespace

RunReport run(const SimilarityGraph& g, const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  validate_config(g, config);
  const double alpha = resolve_alpha(config, g);

  const int restarts = config.restarts;
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
  std::vector<std::exception_ptr> fatal(static_cast<std::size_t>(restarts));

  const int threads = std::clamp(config.threads, 1, restarts);
  std::atomic<int> cursor{0};
  auto worker = [&] {
    for (;;) {
      const int i = cursor.fetch_add(1);
      if (i >= restarts) return;
      try {
        outcomes[static_cast<std::size_t>(i)] = run_one_restart(g, config, alpha, i);
      } catch (const ConvergenceError& e) {
        outcomes[static_cast<std::size_t>(i)].ok = false;
        outcomes[static_cast<std::size_t>(i)].error = e.what();
      } catch (...) {
        fatal[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& f : fatal)
    if (f) std::rethrow_exception(f);

  int best = -1;
  for (int i = 0; i < restarts; ++i) {
    const auto& o = outcomes[static_cast<std::size_t>(i)];
    if (!o.ok) continue;
    if (best < 0 || o.energy_history.back() <
                        outcomes[static_cast<std::size_t>(best)].energy_history.back())
      best = i;
  }
  if (best < 0) {
    std::string last;
    for (const auto& o : outcomes)
      if (!o.error.empty()) last = o.error;
    throw ConvergenceError("all " + std::to_string(restarts) +
                               " restarts failed to converge; last error: " + last,
                           0.0, 0);
  }

  RestartOutcome& win = outcomes[static_cast<std::size_t>(best)];
  RunReport rep;
  rep.k = config.k;
  rep.r = config.r;
  rep.alpha = alpha;
  rep.labels = win.state.labels;
  rep.energy_history = std::move(win.energy_history);
  rep.iterations = static_cast<int>(rep.energy_history.size());
  rep.converged = win.converged;
  rep.reseeds = std::move(win.reseeds);

  rep.confidences.resize(g.n(), config.k);
  rep.representatives.assign(static_cast<std::size_t>(config.k), 0);
  for (int j = 0; j < config.k; ++j) {
    const auto& psi = win.state.eigenpairs[static_cast<std::size_t>(j)].psi;
    rep.confidences.col(j) = psi;
    int arg = 0;
    psi.maxCoeff(&arg);
    rep.representatives[static_cast<std::size_t>(j)] = arg;
  }

  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

} // namespace dirpart
