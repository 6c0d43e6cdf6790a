#include <fstream>

#include <doctest.h>

#include "dirpart/errors.hpp"
#include "dirpart/io.hpp"
#include "test_util.hpp"

using namespace dirpart;

namespace {

std::string write_file(const std::string& name, const std::string& content) {
  const std::string path = test_util::temp_path(name);
  std::ofstream f(path);
  f << content;
  return path;
}

} // namespace

TEST_CASE("matrix market round trip is exact") {
  Rng rng(3);
  const auto g = test_util::random_connected_graph(rng, 18);
  const std::string path = test_util::temp_path("round.mtx");
  write_matrix_market(path, g);
  const auto back = read_matrix_market(path);
  REQUIRE(back.n() == g.n());
  const Eigen::MatrixXd diff =
      test_util::dense_weights(g) - test_util::dense_weights(back);
  CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.degrees - g.degrees).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix market general format is max-symmetrized on ingest") {
  const std::string path = write_file("gen.mtx",
                                      "%%MatrixMarket matrix coordinate real general\n"
                                      "% a comment\n"
                                      "3 3 3\n"
                                      "1 2 0.2\n"
                                      "2 1 0.5\n"
                                      "2 3 0.7\n");
  const auto g = read_matrix_market(path);
  CHECK(g.weights.coeff(0, 1) == 0.5);
  CHECK(g.weights.coeff(1, 0) == 0.5);
  CHECK(g.weights.coeff(1, 2) == 0.7);
  CHECK(g.weights.coeff(2, 1) == 0.7);
}

TEST_CASE("matrix market symmetric format mirrors the stored triangle") {
  const std::string path =
      write_file("sym.mtx",
                 "%%MatrixMarket matrix coordinate real symmetric\n"
                 "3 3 2\n"
                 "2 1 0.4\n"
                 "3 3 9.0\n"); // self-loop must be dropped
  const auto g = read_matrix_market(path);
  CHECK(g.weights.coeff(0, 1) == 0.4);
  CHECK(g.weights.coeff(1, 0) == 0.4);
  CHECK(g.weights.coeff(2, 2) == 0.0);
  CHECK(g.degrees[2] == 0.0);
}

TEST_CASE("matrix market rejects malformed inputs") {
  CHECK_THROWS_AS(read_matrix_market(test_util::temp_path("missing.mtx")),
                  InputError);
  CHECK_THROWS_AS(
      read_matrix_market(write_file("banner.mtx", "not a banner\n1 1 0\n")),
      InputError);
  CHECK_THROWS_AS(
      read_matrix_market(write_file(
          "complex.mtx", "%%MatrixMarket matrix coordinate complex general\n"
                         "2 2 1\n1 2 0.5 0.1\n")),
      InputError);
  CHECK_THROWS_AS(
      read_matrix_market(write_file(
          "rect.mtx", "%%MatrixMarket matrix coordinate real general\n"
                      "2 3 1\n1 2 0.5\n")),
      InputError);
  CHECK_THROWS_AS(
      read_matrix_market(write_file(
          "range.mtx", "%%MatrixMarket matrix coordinate real general\n"
                       "2 2 1\n1 5 0.5\n")),
      InputError);
  CHECK_THROWS_AS(
      read_matrix_market(write_file(
          "short.mtx", "%%MatrixMarket matrix coordinate real general\n"
                       "2 2 2\n1 2 0.5\n")),
      InputError);
}

TEST_CASE("points csv reads with and without header") {
  const std::string plain = write_file("pts.csv", "0.5,1.5\n-2,0.25\n");
  auto c = read_points_csv(plain);
  REQUIRE(c.size() == 2);
  CHECK(c.dim() == 2);
  CHECK(c.points(0, 0) == 0.5);
  CHECK(c.points(1, 1) == 0.25);

  const std::string headed = write_file("pts_h.csv", "x,y\n0.5,1.5\n-2,0.25\n");
  auto h = read_points_csv(headed);
  CHECK(h.size() == 2);
  CHECK(h.points(1, 0) == -2.0);
}

TEST_CASE("points csv round trip") {
  PointCloud c;
  c.points.resize(3, 2);
  c.points << 0.1, -0.2, 1e-7, 3.14159265358979, -5, 2;
  const std::string path = test_util::temp_path("pts_rt.csv");
  write_points_csv(path, c);
  const auto back = read_points_csv(path);
  CHECK((back.points - c.points).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("points csv rejects ragged and empty files") {
  CHECK_THROWS_AS(read_points_csv(write_file("ragged.csv", "1,2\n3\n")), InputError);
  CHECK_THROWS_AS(read_points_csv(write_file("empty.csv", "")), InputError);
  CHECK_THROWS_AS(read_points_csv(write_file("text.csv", "a,b\nc,d\n")), InputError);
}

TEST_CASE("labels csv supports partial files with -1 for absent vertices") {
  const std::string path = write_file("lab.csv", "vertex,label\n0,2\n3,1\n");
  const auto labels = read_labels_csv(path, 5);
  CHECK(labels == std::vector<int>{2, -1, -1, 1, -1});
}

TEST_CASE("labels csv round trip") {
  const std::vector<int> labels{1, 0, 2, 2};
  const std::string path = test_util::temp_path("lab_rt.csv");
  write_labels_csv(path, labels);
  CHECK(read_labels_csv(path, 4) == labels);
}

TEST_CASE("labels csv rejects bad rows") {
  CHECK_THROWS_AS(read_labels_csv(write_file("dup.csv", "0,1\n0,2\n"), 3),
                  InputError);
  CHECK_THROWS_AS(read_labels_csv(write_file("oor.csv", "7,1\n"), 3), InputError);
  CHECK_THROWS_AS(read_labels_csv(write_file("neg.csv", "0,-1\n"), 3), InputError);
  CHECK_THROWS_AS(read_labels_csv(write_file("bad.csv", "0,1\nx,y\n"), 3),
                  InputError);
  CHECK_THROWS_AS(read_labels_csv(write_file("cols.csv", "0,1,2\n"), 3), InputError);
}
