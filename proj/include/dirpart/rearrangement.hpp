#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dirpart/eigensolver.hpp"
#include "dirpart/graph.hpp"
#include "dirpart/rng.hpp"

namespace dirpart {

// How alpha is chosen: an explicit value, or a multiple of the spectral gap
// (alpha = scale * lambda_2 of the Laplacian). Neither set: scale = k.
struct AlphaPolicy {
  std::optional<double> value;
  std::optional<double> scale;

  static AlphaPolicy explicit_value(double a) { return {a, std::nullopt}; }
  static AlphaPolicy scaled(double c) { return {std::nullopt, c}; }
};

struct RunConfig {
  int k = 2;
  double r = 0.0;
  AlphaPolicy alpha;
  double tol = 1e-4;          // eigensolver residual tolerance
  int max_matvecs = 20000;    // per ground-state solve
  int dense_threshold = 500;  // direct eigendecomposition at or below
  int max_iter = 100;
  int restarts = 1;
  enum class Init { Random, Voronoi } init = Init::Random;
  std::uint64_t seed = 0;
  std::vector<int> supervision; // empty, or length n with -1 for free vertices
  int threads = 1;             // restart-level parallelism
};

// One restart's evolving partition: labels, the k ground states solved for
// the current indicators, and their energy sum.
struct PartitionState {
  int k = 0;
  std::vector<int> labels;
  std::vector<GroundState> eigenpairs;
  double energy = 0.0;
  int iteration = 0;

  // indicator of cluster i; iterates are always exactly {0,1}-valued
  Eigen::VectorXd phi(int i) const;
};

struct ReseedEvent {
  int iteration = 0;
  int cluster = 0;
  int vertex = 0;
};

struct RunReport {
  int k = 0;
  double r = 0.0;
  double alpha = 0.0;
  std::vector<int> labels;
  std::vector<double> energy_history;
  Eigen::MatrixXd confidences; // n x k, final psi_j(v)
  std::vector<int> representatives;
  std::vector<ReseedEvent> reseeds;
  int iterations = 0;
  bool converged = false;
  double wall_time_s = 0.0;
};

std::string report_to_json(const RunReport& report, int indent = 2);

// Ground state of the Laplacian plus confinement alpha*(1-phi); phi may be
// any [0,1] vertex function, not just an indicator.
GroundState relaxed_energy(const SimilarityGraph& g, double r, double alpha,
                           const Eigen::VectorXd& phi,
                           const EigsOptions& opts = {});

double resolve_alpha(const RunConfig& config, const SimilarityGraph& g);

std::vector<int> init_random(int n, int k, Rng& rng);
std::vector<int> init_random(int n, int k, std::uint64_t seed);

// Nearest-generator labeling in hop distance, ties to the lowest generator
// index (multi-source breadth-first search).
std::vector<int> voronoi_labels(const SimilarityGraph& g,
                                const std::vector<int>& generators);
std::vector<int> init_voronoi(const SimilarityGraph& g, int k, Rng& rng);
std::vector<int> init_voronoi(const SimilarityGraph& g, int k, std::uint64_t seed);

// Pure assignment step: each free vertex moves to argmax_j psis(v, j),
// keeping its current label on ties; supervised vertices never move.
std::vector<int> assign_labels(const Eigen::MatrixXd& psis,
                               const std::vector<int>& current,
                               const std::vector<int>* supervision);

// One sweep of the alternating scheme: solve the k ground states for the
// current indicators (warm-started from the previous eigenvectors), then
// reassign labels. Reseed events for emptied clusters are appended.
PartitionState rearrangement_step(const SimilarityGraph& g, double r, double alpha,
                                  const PartitionState& state,
                                  const std::vector<int>* supervision,
                                  const EigsOptions& opts,
                                  std::vector<ReseedEvent>* reseeds = nullptr);

// Full driver: `restarts` independent initializations, each iterated to a
// label fixed point or max_iter; returns the lowest-energy report.
RunReport run(const SimilarityGraph& g, const RunConfig& config);

} // namespace dirpart
