// Command-line front end: partition / eval / oracle / sweep / gen.
//
// Exit codes: 0 success (partition: converged), 1 input error,
// 2 iteration limit reached without label stabilization, 3 eigensolver
// failure across all restarts.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dirpart/datasets.hpp"
#include "dirpart/dirichlet.hpp"
#include "dirpart/errors.hpp"
#include "dirpart/io.hpp"
#include "dirpart/metrics.hpp"
#include "dirpart/rearrangement.hpp"

namespace {

using namespace dirpart;

// shared input options: exactly one of --points / --similarity / --lattice
struct GraphInput {
  std::string points_path;
  std::string similarity_path;
  std::string lattice_spec;
  std::string metric = "euclidean";
  double sigma = 1.0;
  int knn = 0; // 0: full Gaussian kernel graph
  bool unit_weights = false;
};

void add_graph_flags(CLI::App* cmd, GraphInput& in) {
  auto* points = cmd->add_option("--points", in.points_path,
                                 "point cloud CSV; builds a Gaussian kernel graph");
  auto* sim = cmd->add_option("--similarity", in.similarity_path,
                              "similarity matrix in Matrix Market format");
  auto* lat = cmd->add_option("--lattice", in.lattice_spec,
                              "lattice spec, e.g. path:10, grid:8x6, torus:30x30");
  points->excludes(sim)->excludes(lat);
  sim->excludes(lat);
  cmd->add_option("--sigma", in.sigma, "Gaussian kernel bandwidth")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--knn", in.knn,
                  "neighbors per vertex for a kNN graph (0 = dense kernel)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--metric", in.metric, "point metric: euclidean | sphere")
      ->check(CLI::IsMember({"euclidean", "sphere"}));
  cmd->add_flag("--unit-weights", in.unit_weights,
                "unweighted kNN edges instead of kernel weights");
}

SimilarityGraph load_graph(const GraphInput& in) {
  const int given = (!in.points_path.empty() ? 1 : 0) +
                    (!in.similarity_path.empty() ? 1 : 0) +
                    (!in.lattice_spec.empty() ? 1 : 0);
  if (given != 1)
    throw InputError("provide exactly one of --points, --similarity, --lattice");
  if (!in.similarity_path.empty()) return read_matrix_market(in.similarity_path);
  if (!in.lattice_spec.empty()) return lattice_graph_from_spec(in.lattice_spec);

  const Metric metric =
      in.metric == "sphere" ? Metric::SphereGeodesic : Metric::Euclidean;
  const PointCloud cloud = read_points_csv(in.points_path, metric);
  if (in.knn > 0) return knn_graph(cloud, in.knn, in.sigma, in.unit_weights);
  return gaussian_similarity(cloud, in.sigma);
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("DP_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t > 0) return t;
    } catch (const std::exception&) {
      throw InputError(std::string("DP_THREADS is not a number: ") + env);
    }
  }
  return 1;
}

struct RunFlags {
  int k = 2;
  double r = 0.0;
  std::optional<double> alpha;
  std::optional<double> alpha_scale;
  double tol = 1e-4;
  int max_iter = 100;
  int restarts = 1;
  std::string init = "random";
  std::uint64_t seed = 0;
  std::string semi_labels;
  int threads = 0;
  std::string out_dir = ".";
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_alpha = true) {
  cmd->add_option("--k", f.k, "number of clusters")->check(CLI::PositiveNumber);
  cmd->add_option("--r", f.r, "Laplacian degree exponent in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  if (with_alpha) {
    auto* a = cmd->add_option("--alpha", f.alpha, "explicit confinement strength");
    auto* s = cmd->add_option("--alpha-scale", f.alpha_scale,
                              "alpha as a multiple of lambda_2 (default: k)");
    a->excludes(s);
  }
  cmd->add_option("--tol", f.tol, "eigensolver residual tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", f.max_iter, "iteration limit per restart")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--restarts", f.restarts, "independent restarts")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--init", f.init, "initialization: random | voronoi")
      ->check(CLI::IsMember({"random", "voronoi"}));
  cmd->add_option("--seed", f.seed, "base random seed");
  cmd->add_option("--semi-labels", f.semi_labels,
                  "CSV of fixed vertex labels (vertex,label)");
  cmd->add_option("--threads", f.threads,
                  "restart-level worker threads (env DP_THREADS as fallback)");
  cmd->add_option("--out", f.out_dir, "output directory");
}

RunConfig make_config(const RunFlags& f, const SimilarityGraph& g) {
  RunConfig cfg;
  cfg.k = f.k;
  cfg.r = f.r;
  if (f.alpha) cfg.alpha = AlphaPolicy::explicit_value(*f.alpha);
  else if (f.alpha_scale) cfg.alpha = AlphaPolicy::scaled(*f.alpha_scale);
  cfg.tol = f.tol;
  cfg.max_iter = f.max_iter;
  cfg.restarts = f.restarts;
  cfg.init = f.init == "voronoi" ? RunConfig::Init::Voronoi : RunConfig::Init::Random;
  cfg.seed = f.seed;
  cfg.threads = resolve_threads(f.threads);
  if (!f.semi_labels.empty()) cfg.supervision = read_labels_csv(f.semi_labels, g.n());
  return cfg;
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

std::string conf_header(int k) {
  std::ostringstream h;
  for (int j = 0; j < k; ++j) {
    if (j) h << ',';
    h << "psi_" << j;
  }
  return h.str();
}

int cmd_partition(const GraphInput& gin, const RunFlags& flags) {
  const SimilarityGraph g = load_graph(gin);
  const RunConfig cfg = make_config(flags, g);
  const RunReport rep = run(g, cfg);

  const auto out = prepare_out_dir(flags.out_dir);
  {
    std::ofstream f(out / "report.json");
    f << report_to_json(rep) << '\n';
  }
  write_labels_csv((out / "labels.csv").string(), rep.labels);
  write_matrix_csv((out / "confidences.csv").string(), rep.confidences,
                   conf_header(rep.k));
  std::cout << "alpha " << rep.alpha << ", " << rep.iterations << " iterations, "
            << (rep.converged ? "converged" : "iteration limit reached")
            << ", energy " << rep.energy_history.back() << "\n";
  return rep.converged ? 0 : 2;
}

int cmd_eval(const GraphInput& gin, const std::string& pred_path,
             const std::string& truth_path, double r, const std::string& out_dir) {
  const SimilarityGraph g = load_graph(gin);
  auto full = [&](const std::string& path, const char* what) {
    std::vector<int> l = read_labels_csv(path, g.n());
    for (std::size_t v = 0; v < l.size(); ++v)
      if (l[v] < 0)
        throw InputError(std::string(what) + ": vertex " + std::to_string(v) +
                         " has no label");
    return l;
  };
  const std::vector<int> pred = full(pred_path, "predicted labels");
  const std::vector<int> truth = full(truth_path, "true labels");

  const double pur = purity(pred, truth);
  const Eigen::MatrixXd conf = confusion(pred, truth);
  const ObjectiveResult found = partition_objective(g, r, pred);
  const ObjectiveResult gt = partition_objective(g, r, truth);

  nlohmann::json j;
  j["purity"] = pur;
  j["found_objective"] = found.total;
  j["found_per_cluster"] = found.per_cluster;
  j["truth_objective"] = gt.total;
  j["truth_per_cluster"] = gt.per_cluster;
  auto cm = nlohmann::json::array();
  for (int i = 0; i < conf.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < conf.cols(); ++c) row.push_back(conf(i, c));
    cm.push_back(std::move(row));
  }
  j["confusion"] = std::move(cm);

  const auto out = prepare_out_dir(out_dir);
  {
    std::ofstream f(out / "metrics.json");
    f << j.dump(2) << '\n';
  }
  write_matrix_csv((out / "confusion.csv").string(), conf);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_oracle(const GraphInput& gin, int k, double r, long budget,
               const std::string& out_dir) {
  const SimilarityGraph g = load_graph(gin);
  const BruteForceResult res = brute_force_partition(g, r, k, budget);

  nlohmann::json j;
  j["k"] = k;
  j["r"] = r;
  j["objective"] = res.objective;
  j["per_cluster"] = res.per_cluster;
  j["labels"] = res.labels;

  const auto out = prepare_out_dir(out_dir);
  {
    std::ofstream f(out / "oracle.json");
    f << j.dump(2) << '\n';
  }
  write_labels_csv((out / "oracle_labels.csv").string(), res.labels);
  std::cout << "optimum " << res.objective << "\n";
  return 0;
}

int cmd_sweep(const GraphInput& gin, const RunFlags& flags,
              const std::string& grid_str, const std::string& eval_labels) {
  std::vector<double> grid;
  {
    std::stringstream ss(grid_str);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        grid.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw InputError("bad alpha in grid: " + tok);
      }
    }
  }
  if (grid.empty()) throw InputError("empty alpha grid");
  for (double a : grid)
    if (!(a > 0.0)) throw InputError("alpha grid values must be positive");

  const SimilarityGraph g = load_graph(gin);
  const auto out = prepare_out_dir(flags.out_dir);
  std::ofstream f(out / "sweep.csv");
  f.precision(17);

  // energies at different alpha measure different objectives; the warning
  // column keeps that from being lost in downstream tables
  const char* warning = "energies not comparable across alpha";

  if (!eval_labels.empty()) {
    // fixed-partition mode: evaluate the relaxed energy of the given labels
    std::vector<int> labels = read_labels_csv(eval_labels, g.n());
    int k = 0;
    for (std::size_t v = 0; v < labels.size(); ++v) {
      if (labels[v] < 0)
        throw InputError("eval labels: vertex " + std::to_string(v) +
                         " has no label");
      k = std::max(k, labels[v] + 1);
    }
    EigsOptions opts;
    opts.tol = flags.tol;
    f << "alpha,lambda_alpha,warning\n";
    for (double a : grid) {
      double sum = 0.0;
      for (int c = 0; c < k; ++c) {
        Eigen::VectorXd phi = Eigen::VectorXd::Zero(g.n());
        for (int v = 0; v < g.n(); ++v)
          if (labels[static_cast<std::size_t>(v)] == c) phi[v] = 1.0;
        sum += relaxed_energy(g, flags.r, a, phi, opts).lambda;
      }
      f << a << ',' << sum << ',' << warning << '\n';
      std::cout << "alpha " << a << " -> lambda " << sum << "\n";
    }
    return 0;
  }

  f << "alpha,energy,iterations,converged,cluster_sizes,warning\n";
  for (double a : grid) {
    RunFlags cell = flags;
    cell.alpha = a;
    cell.alpha_scale.reset();
    const RunConfig cfg = make_config(cell, g);
    const RunReport rep = run(g, cfg);
    std::vector<int> sizes(static_cast<std::size_t>(rep.k), 0);
    for (int l : rep.labels) ++sizes[static_cast<std::size_t>(l)];
    std::ostringstream sz;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (i) sz << ' ';
      sz << sizes[i];
    }
    f << a << ',' << rep.energy_history.back() << ',' << rep.iterations << ','
      << (rep.converged ? 1 : 0) << ',' << sz.str() << ',' << warning << '\n';
    std::cout << "alpha " << a << " -> energy " << rep.energy_history.back()
              << " in " << rep.iterations << " iterations\n";
  }
  return 0;
}

int cmd_gen(const std::string& kind, int n, int k, double noise,
            std::uint64_t seed, const std::string& out_dir) {
  Dataset ds;
  if (kind == "gmm") {
    // two clouds of differing sizes by default; k clouds on a line
    if (k < 1) throw InputError("gen gmm: k must be at least 1");
    std::vector<int> counts;
    Eigen::MatrixXd means(k, 2);
    int rest = n;
    for (int c = 0; c < k; ++c) {
      const int take = c + 1 < k ? (rest * 2 + 2) / 3 : rest; // 2:1 size steps
      counts.push_back(std::max(1, take));
      rest -= counts.back();
      means(c, 0) = 4.0 * c;
      means(c, 1) = 0.0;
    }
    ds = gen_gmm(counts, means, noise >= 0.0 ? noise : 1.0, seed);
  } else if (kind == "moons") {
    if (k < 1) throw InputError("gen moons: k must be at least 1");
    ds = gen_moons(k, std::max(1, n / std::max(1, k)), noise >= 0.0 ? noise : 0.1,
                   seed);
  } else if (kind == "sphere") {
    ds = gen_sphere_points(n);
  } else {
    throw InputError("unknown dataset kind: " + kind);
  }

  const auto out = prepare_out_dir(out_dir);
  write_points_csv((out / "points.csv").string(), ds.cloud);
  if (!ds.labels.empty())
    write_labels_csv((out / "labels.csv").string(), ds.labels);
  {
    std::ofstream f(out / "spec.json");
    f << dataset_spec_json(ds.spec) << '\n';
  }
  std::cout << "wrote " << ds.cloud.size() << " points to " << out.string() << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph partitioning by minimal Dirichlet eigenvalue sums"};
  app.require_subcommand(1);

  GraphInput gin;
  RunFlags flags;

  auto* partition = app.add_subcommand(
      "partition", "run the rearrangement algorithm and write a report");
  add_graph_flags(partition, gin);
  add_run_flags(partition, flags);

  GraphInput egin;
  std::string pred_path, truth_path, eval_out = ".";
  double eval_r = 0.0;
  auto* eval = app.add_subcommand("eval", "score predicted labels against truth");
  add_graph_flags(eval, egin);
  eval->add_option("--pred", pred_path, "predicted labels CSV")->required();
  eval->add_option("--truth", truth_path, "ground-truth labels CSV")->required();
  eval->add_option("--r", eval_r, "degree exponent for the exact objective")
      ->check(CLI::Range(0.0, 1.0));
  eval->add_option("--out", eval_out, "output directory");

  GraphInput ogin;
  int oracle_k = 2;
  double oracle_r = 0.0;
  long oracle_budget = kDefaultBruteForceBudget;
  std::string oracle_out = ".";
  auto* oracle =
      app.add_subcommand("oracle", "exhaustive exact optimum on tiny graphs");
  add_graph_flags(oracle, ogin);
  oracle->add_option("--k", oracle_k, "number of clusters")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--r", oracle_r, "degree exponent")->check(CLI::Range(0.0, 1.0));
  oracle->add_option("--budget", oracle_budget, "labeling budget (k^n limit)");
  oracle->add_option("--out", oracle_out, "output directory");

  GraphInput sgin;
  RunFlags sflags;
  std::string grid_str, sweep_eval_labels;
  auto* sweep = app.add_subcommand("sweep", "run over a grid of alpha values");
  add_graph_flags(sweep, sgin);
  add_run_flags(sweep, sflags, /*with_alpha=*/false);
  sweep->add_option("--alpha-grid", grid_str, "comma-separated alpha values")
      ->required();
  sweep->add_option("--eval-labels", sweep_eval_labels,
                    "evaluate the relaxed energy of these fixed labels instead "
                    "of running the algorithm");

  std::string gen_kind, gen_out = ".";
  int gen_n = 900, gen_k = 2;
  double gen_noise = -1.0;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "write a synthetic dataset");
  gen->add_option("--kind", gen_kind, "gmm | moons | sphere")->required();
  gen->add_option("--n", gen_n, "total point count")->check(CLI::PositiveNumber);
  gen->add_option("--k", gen_k, "clouds / moons");
  gen->add_option("--noise", gen_noise, "noise scale (kind-specific default)");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "output directory");

  try {
    app.parse(argc, argv);
    if (partition->parsed()) return cmd_partition(gin, flags);
    if (eval->parsed())
      return cmd_eval(egin, pred_path, truth_path, eval_r, eval_out);
    if (oracle->parsed())
      return cmd_oracle(ogin, oracle_k, oracle_r, oracle_budget, oracle_out);
    if (sweep->parsed()) return cmd_sweep(sgin, sflags, grid_str, sweep_eval_labels);
    if (gen->parsed())
      return cmd_gen(gen_kind, gen_n, gen_k, gen_noise, gen_seed, gen_out);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const dirpart::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
