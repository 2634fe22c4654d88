#include <doctest.h>

#include <random>

#include "cmvc/error.hpp"
#include "cmvc/metrics.hpp"
#include "oracles.hpp"

using namespace cmvc;

TEST_CASE("accuracy of identical labelings is 1") {
  std::vector<int> y{0, 1, 2, 1, 0, 2};
  CHECK(clustering_accuracy(y, y) == doctest::Approx(1.0));
}

TEST_CASE("accuracy is invariant under relabeling") {
  std::vector<int> truth{0, 0, 1, 1, 2, 2};
  std::vector<int> pred{2, 2, 0, 0, 1, 1};  // same partition, renamed
  CHECK(clustering_accuracy(pred, truth) == doctest::Approx(1.0));
  CHECK(nmi(pred, truth) == doctest::Approx(1.0));
  CHECK(purity(pred, truth) == doctest::Approx(1.0));
}

TEST_CASE("accuracy equals the factorial oracle on random instances") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> pick_n(4, 30), pick_k(2, 6);
    int n = pick_n(gen), k = pick_k(gen);
    std::uniform_int_distribution<int> lab(0, k - 1);
    std::vector<int> pred(n), truth(n);
    for (int i = 0; i < n; ++i) {
      pred[i] = lab(gen);
      truth[i] = lab(gen);
    }
    double fast = clustering_accuracy(pred, truth);
    double brute = oracle::brute_force_accuracy(pred, truth);
    CHECK(fast == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("nmi hand cases") {
  CHECK(nmi({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(0.0));  // independent
  CHECK(nmi({0, 0, 0, 0}, {0, 1, 0, 1}) == doctest::Approx(0.0));  // constant pred
  CHECK(nmi({0, 1, 0, 1}, {1, 0, 1, 0}) == doctest::Approx(1.0));
}

TEST_CASE("nmi is symmetric") {
  std::mt19937_64 gen(43);
  std::uniform_int_distribution<int> lab(0, 3);
  std::vector<int> a(40), b(40);
  for (int i = 0; i < 40; ++i) {
    a[i] = lab(gen);
    b[i] = lab(gen);
  }
  CHECK(nmi(a, b) == doctest::Approx(nmi(b, a)).epsilon(1e-12));
}

TEST_CASE("purity hand cases") {
  CHECK(purity({0, 0, 0, 0}, {0, 0, 1, 1}) == doctest::Approx(0.5));
  std::vector<int> singletons{0, 1, 2, 3};
  CHECK(purity(singletons, {0, 0, 1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("purity dominates accuracy") {
  std::mt19937_64 gen(47);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> pick_n(3, 40), pick_k(2, 5);
    int n = pick_n(gen), k = pick_k(gen);
    std::uniform_int_distribution<int> lab(0, k - 1);
    std::vector<int> pred(n), truth(n);
    for (int i = 0; i < n; ++i) {
      pred[i] = lab(gen);
      truth[i] = lab(gen);
    }
    CHECK(purity(pred, truth) >= clustering_accuracy(pred, truth) - 1e-12);
  }
}

TEST_CASE("metrics reject mismatched lengths") {
  CHECK_THROWS_AS(clustering_accuracy({0, 1}, {0, 1, 2}), DataError);
}
