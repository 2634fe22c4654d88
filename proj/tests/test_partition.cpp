#include <doctest.h>

#include <algorithm>
#include <random>

#include "cmvc/error.hpp"
#include "cmvc/kmeans.hpp"
#include "cmvc/metrics.hpp"
#include "cmvc/partition.hpp"
#include "oracles.hpp"

using namespace cmvc;

TEST_CASE("one-hot rows give a signed permutation of the identity") {
  Matrix x = Matrix::Identity(3, 3);
  Matrix h = extract_partition(x, 3);
  CHECK(orthonormality_error(h) <= 1e-10);
  // every entry is 0 or +-1, one nonzero per row/column; sign rule makes it +1
  int nonzeros = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double v = std::abs(h(i, j));
      CHECK((v <= 1e-12 || v == doctest::Approx(1.0)));
      if (v > 0.5) ++nonzeros;
    }
  CHECK(nonzeros == 3);
  CHECK(h.maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("partitions are orthonormal within 1e-10") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> pick_n(5, 60), pick_d(2, 12);
    int n = pick_n(gen), d = pick_d(gen);
    int k = std::min(4, std::min(n, d));
    Matrix x = gaussian_matrix(n, d, gen);
    Matrix h = extract_partition(x, k);
    CHECK(orthonormality_error(h) <= 1e-10);
  }
}

TEST_CASE("two duplicated separated clusters are recovered exactly") {
  std::mt19937_64 gen(13);
  std::normal_distribution<double> g;
  const int n = 10;
  Matrix x(n, 3);
  std::vector<int> truth(n);
  for (int i = 0; i < n; ++i) {
    int c = i % 2;
    truth[i] = c;
    for (int j = 0; j < 3; ++j) x(i, j) = (c == 0 ? 10.0 : -10.0) * (j == 0) + 0.05 * g(gen);
  }
  Matrix h = extract_partition(x, 2);
  ClusterAssignment a = kmeans(h, 2, 5, 3);
  std::vector<int> best = oracle::brute_force_two_partition(x);
  CHECK(clustering_accuracy(a.labels, best) == doctest::Approx(1.0));
  CHECK(clustering_accuracy(a.labels, truth) == doctest::Approx(1.0));
}

TEST_CASE("row permutation commutes with extraction") {
  std::mt19937_64 gen(29);
  const int n = 24, d = 6, k = 3;
  Matrix x = gaussian_matrix(n, d, gen);
  Matrix h = extract_partition(x, k);

  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), gen);
  Matrix xp(n, d);
  for (int i = 0; i < n; ++i) xp.row(i) = x.row(perm[i]);
  Matrix hp = extract_partition(xp, k);

  Matrix hp_back(n, k);
  for (int i = 0; i < n; ++i) hp_back.row(perm[i]) = hp.row(i);
  CHECK((hp_back - h).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("svd route matches the kernel eigensolver route") {
  std::mt19937_64 gen(31);
  Matrix x = gaussian_matrix(40, 8, gen);
  Matrix via_kernel = extract_partition(x, 3, /*kernel_eigen_max_n=*/5000);
  Matrix via_svd = extract_partition(x, 3, /*kernel_eigen_max_n=*/10);
  CHECK((via_kernel - via_svd).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("zero rows survive normalization") {
  Matrix x(5, 3);
  x.setZero();
  x(0, 0) = 1;
  x(1, 1) = 1;
  x(2, 2) = 1;  // rows 3,4 all zero
  Matrix h = extract_partition(x, 2);
  CHECK(orthonormality_error(h) <= 1e-10);
  CHECK(h.row(3).norm() <= 1e-10);
  CHECK(h.row(4).norm() <= 1e-10);
}

TEST_CASE("extraction rejects bad inputs") {
  Matrix x(3, 2);
  x.setZero();
  CHECK_THROWS_AS(extract_partition(x, 2), DataError);  // all-zero
  Matrix y(3, 2);
  y.setOnes();
  CHECK_THROWS_AS(extract_partition(y, 4), DataError);  // k > n
}
