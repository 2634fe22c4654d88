#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cmvc/rng.hpp"

namespace cmvc {

// Subsample size policy for the candidate pools.
struct SampleBudget {
  enum class Policy { kSqrtN, kFixed, kFull };
  Policy policy = Policy::kSqrtN;
  int r = 0;  // used by kFixed

  int resolve(int n) const;
  static SampleBudget sqrt_n() { return {Policy::kSqrtN, 0}; }
  static SampleBudget fixed(int r) { return {Policy::kFixed, r}; }
  static SampleBudget full() { return {Policy::kFull, 0}; }
};

// Per-sample partner sets. positives[i] / negatives[i] never contain i and
// are mutually disjoint.
struct PairSelection {
  std::vector<std::vector<int>> positives;
  std::vector<std::vector<int>> negatives;

  int samples() const { return static_cast<int>(positives.size()); }
  bool empty() const;
  void check_invariants() const;  // throws InvariantError
};

std::uint64_t selection_hash(const PairSelection& sel);

// Clustering-then-sample: k-means on the partition rows, then for each sample
// draw r candidates from its own cluster and r from the other clusters, and
// keep the m_p most similar / m_n most different by cosine of the rows.
// Pools smaller than r are used whole. Deterministic under seed with
// per-sample substreams.
PairSelection cluster_then_sample(const Matrix& h, int k, const SampleBudget& budget, int m_p,
                                  int m_n, std::uint64_t seed);

enum class PairStrategy { kFSF, kIMVC, kG, kS, kK, kRS };

PairStrategy parse_strategy(const std::string& name);  // throws ConfigError
const char* strategy_name(PairStrategy s);

// Ablation selection rules:
//   S  - no positives, m_n random negatives
//   K  - all same-cluster members as positives (optional cap, off by default),
//        negatives as in cluster_then_sample
//   RS - uniformly random positives and negatives
//   G  - m_p + m_n nearest neighbors as positives, ignoring clusters
PairSelection select_pairs_ablation(PairStrategy strategy, const Matrix& h, int k,
                                    const SampleBudget& budget, int m_p, int m_n,
                                    std::uint64_t seed, int k_positive_cap = 0);

// Dispatches FSF/IMVC to cluster_then_sample and the rest to the ablation rules.
PairSelection select_pairs(PairStrategy strategy, const Matrix& h, int k,
                           const SampleBudget& budget, int m_p, int m_n, std::uint64_t seed);

}  // namespace cmvc
