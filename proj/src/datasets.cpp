#include "dirpart/datasets.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "dirpart/errors.hpp"
#include "dirpart/rng.hpp"

namespace dirpart {

std::string dataset_spec_json(const DatasetSpec& spec, int indent) {
  nlohmann::json j;
  j["kind"] = spec.kind;
  j["counts"] = spec.counts;
  j["noise"] = spec.noise;
  j["sigma"] = spec.sigma;
  j["dims"] = spec.dims;
  j["seed"] = spec.seed;
  j["has_ground_truth"] = spec.has_ground_truth;
  return j.dump(indent);
}

Dataset gen_gmm(const std::vector<int>& n_per_cloud, const Eigen::MatrixXd& means,
                double spread, std::uint64_t seed) {
  const int k = static_cast<int>(n_per_cloud.size());
  if (k < 1) throw InputError("gen_gmm: need at least one cloud");
  if (means.rows() != k)
    throw InputError("gen_gmm: one mean row per cloud required");
  if (!(spread >= 0.0)) throw InputError("gen_gmm: spread must be nonnegative");
  int n = 0;
  for (int c : n_per_cloud) {
    if (c < 1) throw InputError("gen_gmm: cloud sizes must be positive");
    n += c;
  }

  Rng rng(seed);
  Dataset out;
  out.cloud.metric = Metric::Euclidean;
  out.cloud.points.resize(n, means.cols());
  out.labels.reserve(static_cast<std::size_t>(n));
  int row = 0;
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < n_per_cloud[static_cast<std::size_t>(c)]; ++i) {
      for (int d = 0; d < means.cols(); ++d)
        out.cloud.points(row, d) = means(c, d) + spread * rng.normal();
      out.labels.push_back(c);
      ++row;
    }
  }
  out.spec.kind = "gmm";
  out.spec.counts = n_per_cloud;
  out.spec.noise = spread;
  out.spec.seed = seed;
  out.spec.has_ground_truth = true;
  return out;
}

Dataset gen_moons(int n_moons, int n_per_moon, double noise, std::uint64_t seed) {
  if (n_moons < 1) throw InputError("gen_moons: need at least one moon");
  if (n_per_moon < 1) throw InputError("gen_moons: points per moon must be positive");
  if (!(noise >= 0.0)) throw InputError("gen_moons: noise must be nonnegative");

  Rng rng(seed);
  Dataset out;
  out.cloud.metric = Metric::Euclidean;
  out.cloud.points.resize(n_moons * n_per_moon, 2);
  out.labels.reserve(static_cast<std::size_t>(n_moons * n_per_moon));
  int row = 0;
  for (int m = 0; m < n_moons; ++m) {
    const double cx = static_cast<double>(m);
    const bool up = m % 2 == 0;
    const double cy = up ? 0.0 : 0.4;
    for (int i = 0; i < n_per_moon; ++i) {
      const double theta = rng.uniform() * std::numbers::pi;
      const double x = cx + std::cos(theta);
      const double y = cy + (up ? std::sin(theta) : -std::sin(theta));
      out.cloud.points(row, 0) = x + noise * rng.normal();
      out.cloud.points(row, 1) = y + noise * rng.normal();
      out.labels.push_back(m);
      ++row;
    }
  }
  out.spec.kind = "moons";
  out.spec.counts.assign(static_cast<std::size_t>(n_moons), n_per_moon);
  out.spec.noise = noise;
  out.spec.seed = seed;
  out.spec.has_ground_truth = true;
  return out;
}

Dataset gen_sphere_points(int n) {
  if (n < 4) throw InputError("gen_sphere_points: need at least 4 points");

  Dataset out;
  out.cloud.metric = Metric::SphereGeodesic;
  out.cloud.points.resize(n, 3);
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * i;
    out.cloud.points(i, 0) = rho * std::cos(phi);
    out.cloud.points(i, 1) = rho * std::sin(phi);
    out.cloud.points(i, 2) = z;
  }
  out.spec.kind = "sphere";
  out.spec.counts = {n};
  out.spec.has_ground_truth = false;
  return out;
}

} // namespace dirpart
