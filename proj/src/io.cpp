#include "dirpart/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "dirpart/errors.hpp"

namespace dirpart {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool parse_double(const std::string& tok, double& out) {
  std::size_t pos = 0;
  try {
    out = std::stod(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
  return pos == tok.size();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot open for writing: " + path);
  f.precision(std::numeric_limits<double>::max_digits10);
  return f;
}

} // namespace

SimilarityGraph read_matrix_market(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open: " + path);

  std::string line;
  if (!std::getline(f, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw InputError(path + ": missing %%MatrixMarket banner");

  std::stringstream banner(lower(line.substr(2)));
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate")
    throw InputError(path + ": only coordinate matrices are supported");
  if (field != "real" && field != "integer")
    throw InputError(path + ": unsupported field type '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    throw InputError(path + ": unsupported symmetry '" + symmetry + "'");
  const bool mirror = symmetry == "symmetric";

  // skip comments, read the size line
  do {
    if (!std::getline(f, line)) throw InputError(path + ": missing size line");
  } while (!line.empty() && line[0] == '%');

  long rows = 0, cols = 0, nnz = 0;
  {
    std::stringstream ss(line);
    if (!(ss >> rows >> cols >> nnz))
      throw InputError(path + ": bad size line: " + line);
  }
  if (rows != cols) throw InputError(path + ": similarity matrix must be square");
  if (rows <= 0) throw InputError(path + ": empty matrix");

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mirror ? 2 * nnz : nnz));
  long seen = 0;
  while (seen < nnz) {
    if (!std::getline(f, line))
      throw InputError(path + ": expected " + std::to_string(nnz) +
                       " entries, found " + std::to_string(seen));
    if (line.empty() || line[0] == '%') continue;
    std::stringstream ss(line);
    long i = 0, j = 0;
    double v = 0.0;
    if (!(ss >> i >> j >> v))
      throw InputError(path + ": bad entry line: " + line);
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw InputError(path + ": index out of range in: " + line);
    trips.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    if (mirror && i != j)
      trips.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
    ++seen;
  }

  Eigen::SparseMatrix<double> raw(static_cast<int>(rows), static_cast<int>(cols));
  raw.setFromTriplets(trips.begin(), trips.end(),
                      [](double a, double b) { return std::max(a, b); });
  return symmetrize(raw);
}

void write_matrix_market(const std::string& path, const SimilarityGraph& g) {
  auto f = open_out(path);
  const auto& w = g.weights;
  long nnz = 0;
  for (int j = 0; j < w.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(w, j); it; ++it)
      if (it.row() >= it.col()) ++nnz;

  f << "%%MatrixMarket matrix coordinate real symmetric\n";
  f << w.rows() << ' ' << w.cols() << ' ' << nnz << '\n';
  for (int j = 0; j < w.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(w, j); it; ++it)
      if (it.row() >= it.col())
        f << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

PointCloud read_points_csv(const std::string& path, Metric metric) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto toks = split_csv(line);
    std::vector<double> row(toks.size());
    bool ok = !toks.empty();
    for (std::size_t c = 0; ok && c < toks.size(); ++c)
      ok = parse_double(toks[c], row[c]);
    if (!ok) {
      if (first) { first = false; continue; } // header line
      throw InputError(path + ": unparsable row: " + line);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError(path + ": inconsistent column count at row " +
                       std::to_string(rows.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(path + ": no data rows");

  PointCloud cloud;
  cloud.metric = metric;
  cloud.points.resize(static_cast<int>(rows.size()),
                      static_cast<int>(rows.front().size()));
  for (int i = 0; i < cloud.points.rows(); ++i)
    for (int c = 0; c < cloud.points.cols(); ++c)
      cloud.points(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  validate_cloud(cloud);
  return cloud;
}

void write_points_csv(const std::string& path, const PointCloud& cloud,
                      const std::string& header) {
  auto f = open_out(path);
  if (!header.empty()) f << header << '\n';
  for (int i = 0; i < cloud.points.rows(); ++i) {
    for (int c = 0; c < cloud.points.cols(); ++c) {
      if (c) f << ',';
      f << cloud.points(i, c);
    }
    f << '\n';
  }
}

std::vector<int> read_labels_csv(const std::string& path, int n) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open: " + path);

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto toks = split_csv(line);
    if (toks.size() != 2) throw InputError(path + ": expected `vertex,label` rows");
    double a = 0.0, b = 0.0;
    if (!parse_double(toks[0], a) || !parse_double(toks[1], b)) {
      if (first) { first = false; continue; } // header line
      throw InputError(path + ": unparsable row: " + line);
    }
    first = false;
    const int idx = static_cast<int>(a);
    const int lab = static_cast<int>(b);
    if (idx < 0 || idx >= n)
      throw InputError(path + ": vertex index " + std::to_string(idx) +
                       " out of range [0," + std::to_string(n) + ")");
    if (lab < 0)
      throw InputError(path + ": negative label for vertex " + std::to_string(idx));
    if (labels[static_cast<std::size_t>(idx)] != -1)
      throw InputError(path + ": duplicate entry for vertex " + std::to_string(idx));
    labels[static_cast<std::size_t>(idx)] = lab;
  }
  return labels;
}

void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
  auto f = open_out(path);
  f << "vertex,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    f << i << ',' << labels[i] << '\n';
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const std::string& header) {
  auto f = open_out(path);
  if (!header.empty()) f << header << '\n';
  for (int i = 0; i < m.rows(); ++i) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) f << ',';
      f << m(i, c);
    }
    f << '\n';
  }
}

} // namespace dirpart
