#include <vector>

#include <doctest.h>

#include "dirpart/errors.hpp"
#include "dirpart/metrics.hpp"
#include "dirpart/rearrangement.hpp"
#include "test_util.hpp"

using namespace dirpart;

TEST_CASE("purity values on hand-checkable cases") {
  CHECK(purity({1, 1, 0, 0}, {0, 0, 1, 1}) == 1.0); // relabeling is free
  CHECK(purity({0, 0, 0, 0}, {0, 0, 1, 1}) == 0.5);
  CHECK(purity({0, 0, 1, 1}, {0, 1, 1, 1}) == doctest::Approx(0.75));
  CHECK(purity({0, 1, 2, 3}, {0, 0, 1, 1}) == 1.0); // over-segmentation
  CHECK_THROWS_AS(purity({0, 1}, {0, 1, 0}), InputError);
  CHECK_THROWS_AS(purity({}, {}), InputError);
}

TEST_CASE("purity is invariant under prediction relabeling") {
  Rng rng(3);
  std::vector<int> pred(40), truth(40);
  for (auto& l : pred) l = rng.uniform_int(0, 2);
  for (auto& l : truth) l = rng.uniform_int(0, 2);
  const double base = purity(pred, truth);
  CHECK(purity(pred, pred) == 1.0);

  const int perm[3] = {2, 0, 1};
  std::vector<int> renamed(40);
  for (int i = 0; i < 40; ++i) renamed[i] = perm[pred[i]];
  CHECK(purity(renamed, truth) == base);
}

TEST_CASE("confusion matrix is column-normalized over true classes") {
  const std::vector<int> pred{0, 0, 1, 1, 1, 2};
  const std::vector<int> truth{0, 1, 1, 1, 2, 2};
  const Eigen::MatrixXd m = confusion(pred, truth);
  REQUIRE(m.rows() == 3);
  REQUIRE(m.cols() == 3);
  for (int j = 0; j < 3; ++j)
    CHECK(m.col(j).sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m(0, 0) == doctest::Approx(1.0));
  CHECK(m(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(m(1, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(m(1, 2) == doctest::Approx(0.5));
  CHECK(m(2, 2) == doctest::Approx(0.5));

  // a perfect permutation is a permutation matrix
  const Eigen::MatrixXd p = confusion({1, 1, 0, 0}, {0, 0, 1, 1});
  CHECK(p(1, 0) == 1.0);
  CHECK(p(0, 1) == 1.0);
  CHECK(p(0, 0) == 0.0);

  // an unused prediction label just yields a zero row
  const Eigen::MatrixXd q = confusion({0, 0, 2, 2}, {0, 0, 0, 0});
  REQUIRE(q.rows() == 3);
  CHECK(q(1, 0) == 0.0);
  CHECK(q.col(0).sum() == doctest::Approx(1.0));

  CHECK_THROWS_AS(confusion({0, 1}, {0, 2}), InputError); // true class 1 empty
}

TEST_CASE("factorization identity holds for partitions into components") {
  std::vector<Eigen::Triplet<double>> t{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0},
                                        {3, 4, 1.0}, {4, 5, 1.0}, {3, 5, 1.0}};
  Eigen::SparseMatrix<double> raw(6, 6);
  raw.setFromTriplets(t.begin(), t.end());
  const auto g = symmetrize(raw);
  const auto chk = nmf_identity_check(g, {0, 0, 0, 1, 1, 1});
  CHECK(chk.gap <= 1e-10);
  // components: every lambda(V_i) = 0, so rhs = ||A||_F^2 - k
  CHECK(chk.rhs == doctest::Approx(chk.lhs).epsilon(1e-12));
}

TEST_CASE("factorization identity holds for arbitrary connected clusters") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 12 + static_cast<int>(rng.uniform() * 30);
    const auto g = test_util::random_connected_graph(rng, n);
    const int k = 2 + trial % 3;
    // Voronoi cells of a connected graph are connected: each vertex has a
    // shortest path to its generator inside its own cell
    const auto labels = init_voronoi(g, k, rng);
    const auto chk = nmf_identity_check(g, labels);
    CHECK(chk.gap <= 1e-8);
  }
}

TEST_CASE("factorization check rejects disconnected clusters") {
  const auto g = lattice_graph(LatticeKind::Path, {5});
  // cluster 0 = {0, 4} is disconnected inside the path
  CHECK_THROWS_AS(nmf_identity_check(g, {0, 1, 1, 1, 0}), InputError);
  CHECK_THROWS_AS(nmf_identity_check(g, {0, 0, 0, 0, 0, 0}), InputError);
  CHECK_THROWS_AS(nmf_identity_check(g, {0, 0, 2, 2, 2}), InputError);
}
