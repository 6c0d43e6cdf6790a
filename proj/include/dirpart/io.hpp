#pragma once

#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "dirpart/graph.hpp"

namespace dirpart {

// Matrix Market coordinate files (real, general or symmetric), 1-based indices.
// Ingest max-symmetrizes and drops self-loops so the result is a valid
// similarity graph regardless of how the file was produced.
SimilarityGraph read_matrix_market(const std::string& path);

// Writes the weight matrix in symmetric coordinate format (lower triangle).
void write_matrix_market(const std::string& path, const SimilarityGraph& g);

// CSV point clouds: one point per row, comma-separated coordinates. A first
// line that fails to parse as numbers is treated as a header and skipped.
PointCloud read_points_csv(const std::string& path,
                           Metric metric = Metric::Euclidean);
void write_points_csv(const std::string& path, const PointCloud& cloud,
                      const std::string& header = "");

// CSV label files: rows `vertex_index,label` with 0-based vertex indices.
// Vertices absent from the file get -1 (useful for partial supervision).
std::vector<int> read_labels_csv(const std::string& path, int n);
void write_labels_csv(const std::string& path, const std::vector<int>& labels);

// Generic numeric table with an optional header line, one row per vertex.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const std::string& header = "");

} // namespace dirpart
