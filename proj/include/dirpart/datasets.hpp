#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dirpart/graph.hpp"

namespace dirpart {

// What a generator produced, for the JSON sidecar next to the CSV outputs.
struct DatasetSpec {
  std::string kind; // gmm | moons | torus | sphere | external
  std::vector<int> counts;
  double noise = 0.0;
  double sigma = 0.0; // kernel bandwidth, filled in where a graph is built
  std::vector<int> dims;
  std::uint64_t seed = 0;
  bool has_ground_truth = false;
};

std::string dataset_spec_json(const DatasetSpec& spec, int indent = 2);

struct Dataset {
  PointCloud cloud;
  std::vector<int> labels; // empty when no ground truth is defined
  DatasetSpec spec;
};

// Isotropic Gaussian blobs: one row of `means` per cloud, standard deviation
// `spread` in every coordinate.
Dataset gen_gmm(const std::vector<int>& n_per_cloud, const Eigen::MatrixXd& means,
                double spread, std::uint64_t seed);

// Interleaved unit-radius half-moons: moon m is centered at x = m, arcs
// alternate up/down, odd moons are raised by 0.4; Gaussian noise on both
// coordinates. Arc angles are sampled uniformly.
Dataset gen_moons(int n_moons, int n_per_moon, double noise, std::uint64_t seed);

// Deterministic quasi-uniform unit-sphere lattice (golden-angle spiral),
// tagged with the geodesic metric. No ground-truth labels.
Dataset gen_sphere_points(int n);

} // namespace dirpart
