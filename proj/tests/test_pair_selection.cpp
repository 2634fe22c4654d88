#include <doctest.h>

#include <algorithm>
#include <random>

#include "cmvc/error.hpp"
#include "cmvc/kmeans.hpp"
#include "cmvc/pair_selection.hpp"
#include "cmvc/partition.hpp"
#include "cmvc/synthetic.hpp"

using namespace cmvc;

namespace {

// Orthonormal two-cluster partition with slightly jittered rows so cosine
// rankings are strict.
Matrix two_cluster_partition(int n, std::uint64_t seed, std::vector<int>* truth = nullptr) {
  SyntheticSpec spec;
  spec.n = n;
  spec.k = 2;
  spec.views = 1;
  spec.dims = {8};
  spec.separation = 12.0;
  spec.noise_level = {0.0};
  spec.seed = seed;
  SyntheticStream s = generate_synthetic_stream(spec);
  if (truth) *truth = s.labels;
  return extract_partition(s.views[0].data, 2);
}

double cosine(const Matrix& h, int i, int j) {
  double d = h.row(i).norm() * h.row(j).norm();
  return d > 0 ? h.row(i).dot(h.row(j)) / d : 0.0;
}

}  // namespace

TEST_CASE("positives stay inside the true cluster for separated data") {
  std::vector<int> truth;
  Matrix h = two_cluster_partition(60, 5, &truth);
  PairSelection sel = cluster_then_sample(h, 2, SampleBudget::full(), 1, 0, 17);
  sel.check_invariants();
  int cross = 0, total = 0;
  for (int i = 0; i < sel.samples(); ++i)
    for (int j : sel.positives[i]) {
      ++total;
      if (truth[i] != truth[j]) ++cross;
    }
  CHECK(total == 60);  // every sample found a positive partner
  CHECK(cross == 0);
}

TEST_CASE("zero budgets give an empty selection") {
  Matrix h = two_cluster_partition(20, 3);
  PairSelection sel = cluster_then_sample(h, 2, SampleBudget::sqrt_n(), 0, 0, 1);
  CHECK(sel.empty());
}

TEST_CASE("full and saturating fixed budgets coincide") {
  Matrix h = two_cluster_partition(10, 9);
  PairSelection full = cluster_then_sample(h, 2, SampleBudget::full(), 2, 2, 123);
  PairSelection fixed9 = cluster_then_sample(h, 2, SampleBudget::fixed(9), 2, 2, 999);
  CHECK(full.positives == fixed9.positives);
  CHECK(full.negatives == fixed9.negatives);
}

TEST_CASE("selection is deterministic under a seed") {
  Matrix h = two_cluster_partition(50, 21);
  for (PairStrategy s : {PairStrategy::kFSF, PairStrategy::kRS, PairStrategy::kS,
                         PairStrategy::kK, PairStrategy::kG}) {
    PairSelection a = select_pairs(s, h, 2, SampleBudget::sqrt_n(), 3, 3, 77);
    PairSelection b = select_pairs(s, h, 2, SampleBudget::sqrt_n(), 3, 3, 77);
    CHECK(a.positives == b.positives);
    CHECK(a.negatives == b.negatives);
  }
}

TEST_CASE("random strategy changes with the seed") {
  Matrix h = two_cluster_partition(50, 22);
  PairSelection a = select_pairs(PairStrategy::kRS, h, 2, SampleBudget::sqrt_n(), 3, 3, 1);
  PairSelection b = select_pairs(PairStrategy::kRS, h, 2, SampleBudget::sqrt_n(), 3, 3, 2);
  CHECK(selection_hash(a) != selection_hash(b));
}

TEST_CASE("K strategy takes the whole cluster as positives") {
  // 2 perfect clusters of 5: orthonormal indicator blocks
  Matrix h = Matrix::Zero(10, 2);
  for (int i = 0; i < 5; ++i) h(i, 0) = 1.0 / std::sqrt(5.0);
  for (int i = 5; i < 10; ++i) h(i, 1) = 1.0 / std::sqrt(5.0);
  PairSelection sel =
      select_pairs_ablation(PairStrategy::kK, h, 2, SampleBudget::full(), 0, 2, 42);
  sel.check_invariants();
  for (int i = 0; i < 10; ++i) {
    CHECK(sel.positives[i].size() == 4);
    for (int j : sel.positives[i]) CHECK((i < 5) == (j < 5));
  }
}

TEST_CASE("S strategy has no positives") {
  Matrix h = two_cluster_partition(30, 26);
  PairSelection sel = select_pairs_ablation(PairStrategy::kS, h, 2, SampleBudget::sqrt_n(), 5, 4, 9);
  sel.check_invariants();
  for (int i = 0; i < sel.samples(); ++i) {
    CHECK(sel.positives[i].empty());
    CHECK(sel.negatives[i].size() == 4);
  }
}

TEST_CASE("G strategy marks nearest neighbors regardless of cluster") {
  Matrix h = two_cluster_partition(30, 27);
  PairSelection sel = select_pairs_ablation(PairStrategy::kG, h, 2, SampleBudget::full(), 2, 3, 9);
  sel.check_invariants();
  for (int i = 0; i < sel.samples(); ++i) {
    CHECK(sel.positives[i].size() == 5);  // m_p + m_n
    CHECK(sel.negatives[i].empty());
  }
}

TEST_CASE("exhaustive budgets match the quadratic oracle") {
  const int n = 50, k = 2;
  const std::uint64_t seed = 31;
  Matrix h = two_cluster_partition(n, 15);
  // same clustering the implementation derives internally
  std::vector<int> labels = kmeans(h, k, 1, derive_seed(seed, stream::kPairKmeans)).labels;

  auto oracle_select = [&](int i, int m, bool same, bool most_similar) {
    std::vector<int> pool;
    for (int j = 0; j < n; ++j)
      if (j != i && ((labels[j] == labels[i]) == same)) pool.push_back(j);
    std::stable_sort(pool.begin(), pool.end(), [&](int a, int b) {
      double ca = cosine(h, i, a), cb = cosine(h, i, b);
      if (ca != cb) return most_similar ? ca > cb : ca < cb;
      return a < b;
    });
    if (static_cast<int>(pool.size()) > m) pool.resize(m);
    return pool;
  };

  SUBCASE("saturating m_p/m_n returns whole pools") {
    PairSelection sel = cluster_then_sample(h, k, SampleBudget::full(), n - 1, n - 1, seed);
    for (int i = 0; i < n; ++i) {
      CHECK(sel.positives[i] == oracle_select(i, n - 1, true, true));
      CHECK(sel.negatives[i] == oracle_select(i, n - 1, false, false));
    }
  }
  SUBCASE("small m_p/m_n rank by cosine") {
    PairSelection sel = cluster_then_sample(h, k, SampleBudget::full(), 2, 3, seed);
    for (int i = 0; i < n; ++i) {
      CHECK(sel.positives[i] == oracle_select(i, 2, true, true));
      CHECK(sel.negatives[i] == oracle_select(i, 3, false, false));
    }
  }
}

TEST_CASE("strategy names round trip") {
  for (const char* name : {"FSF", "IMVC", "G", "S", "K", "RS"})
    CHECK(strategy_name(parse_strategy(name)) == std::string(name));
  CHECK_THROWS_AS(parse_strategy("bogus"), ConfigError);
}
