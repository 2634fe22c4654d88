#include "cmvc/pair_selection.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "cmvc/error.hpp"
#include "cmvc/kmeans.hpp"

namespace cmvc {

int SampleBudget::resolve(int n) const {
  switch (policy) {
    case Policy::kSqrtN:
      return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    case Policy::kFixed:
      if (r < 1 || r > n) throw ConfigError("budget: fixed r must be in [1, n]");
      return r;
    case Policy::kFull:
      return n;
  }
  return n;
}

bool PairSelection::empty() const {
  for (const auto& p : positives)
    if (!p.empty()) return false;
  for (const auto& q : negatives)
    if (!q.empty()) return false;
  return true;
}

void PairSelection::check_invariants() const {
  const int n = samples();
  if (negatives.size() != static_cast<std::size_t>(n))
    throw InvariantError("pair selection: positives/negatives length mismatch");
  for (int i = 0; i < n; ++i) {
    std::set<int> pos(positives[i].begin(), positives[i].end());
    for (int j : positives[i])
      if (j == i || j < 0 || j >= n) throw InvariantError("pair selection: bad positive partner");
    for (int j : negatives[i]) {
      if (j == i || j < 0 || j >= n) throw InvariantError("pair selection: bad negative partner");
      if (pos.count(j))
        throw InvariantError("pair selection: sample " + std::to_string(i) +
                             " lists partner both positive and negative");
    }
  }
}

std::uint64_t selection_hash(const PairSelection& sel) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over (i, tag, j) triples
  auto absorb = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  for (int i = 0; i < sel.samples(); ++i) {
    auto pos = sel.positives[i];
    auto neg = sel.negatives[i];
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    for (int j : pos) {
      absorb(static_cast<std::uint64_t>(i) << 32 | 1u);
      absorb(static_cast<std::uint64_t>(j));
    }
    for (int j : neg) {
      absorb(static_cast<std::uint64_t>(i) << 32 | 2u);
      absorb(static_cast<std::uint64_t>(j));
    }
  }
  return h;
}

namespace {

// Cosine of partition rows; zero rows compare as 0 similarity.
double row_cosine(const Matrix& h, const Vector& norms, int i, int j) {
  double denom = norms[i] * norms[j];
  if (denom <= 0) return 0.0;
  return h.row(i).dot(h.row(j)) / denom;
}

Vector row_norms(const Matrix& h) {
  return h.rowwise().norm();
}

// Top-m by key with deterministic (key, index) ordering. ascending=false
// picks the largest keys first.
std::vector<int> top_m(const std::vector<int>& candidates, const std::vector<double>& key,
                       int m, bool ascending) {
  std::vector<int> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (key[a] != key[b]) return ascending ? key[a] < key[b] : key[a] > key[b];
    return candidates[a] < candidates[b];
  });
  std::vector<int> out;
  out.reserve(std::min<std::size_t>(m, order.size()));
  for (int idx : order) {
    if (static_cast<int>(out.size()) >= m) break;
    out.push_back(candidates[idx]);
  }
  return out;
}

std::vector<std::vector<int>> members_by_cluster(const std::vector<int>& labels, int k) {
  std::vector<std::vector<int>> members(k);
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(static_cast<int>(i));
  return members;
}

std::vector<int> pool_minus_self(const std::vector<int>& members, int self) {
  std::vector<int> pool;
  pool.reserve(members.size());
  for (int j : members)
    if (j != self) pool.push_back(j);
  return pool;
}

std::vector<int> select_extreme(const Matrix& h, const Vector& norms, int i,
                                const std::vector<int>& pool, int m, bool most_similar) {
  std::vector<double> key(pool.size());
  for (std::size_t c = 0; c < pool.size(); ++c) key[c] = row_cosine(h, norms, i, pool[c]);
  return top_m(pool, key, m, /*ascending=*/!most_similar);
}

}  // namespace

PairSelection cluster_then_sample(const Matrix& h, int k, const SampleBudget& budget, int m_p,
                                  int m_n, std::uint64_t seed) {
  const int n = static_cast<int>(h.rows());
  if (k < 2) throw ConfigError("cluster_then_sample: k must be >= 2");
  if (m_p < 0 || m_n < 0) throw ConfigError("cluster_then_sample: m_p, m_n must be >= 0");

  PairSelection sel;
  sel.positives.assign(n, {});
  sel.negatives.assign(n, {});
  if (m_p == 0 && m_n == 0) return sel;

  ClusterAssignment clusters =
      kmeans(h, k, /*restarts=*/1, derive_seed(seed, stream::kPairKmeans));
  auto members = members_by_cluster(clusters.labels, k);
  for (int c = 0; c < k; ++c)
    if (members[c].empty())
      throw DataError("cluster_then_sample: empty cluster " + std::to_string(c) +
                      " after k-means repair (pathological input)");

  const int r = budget.resolve(n);
  const Vector norms = row_norms(h);

  for (int i = 0; i < n; ++i) {
    std::mt19937_64 gen(derive_seed(seed, stream::kPairSample, static_cast<std::uint64_t>(i)));
    const int ci = clusters.labels[i];

    if (m_p > 0) {
      std::vector<int> same = pool_minus_self(members[ci], i);
      std::vector<int> drawn = sample_without_replacement(std::move(same), r, gen);
      sel.positives[i] = select_extreme(h, norms, i, drawn, m_p, /*most_similar=*/true);
    }
    if (m_n > 0) {
      std::vector<int> diff;
      diff.reserve(n - members[ci].size());
      for (int c = 0; c < k; ++c) {
        if (c == ci) continue;
        diff.insert(diff.end(), members[c].begin(), members[c].end());
      }
      std::vector<int> drawn = sample_without_replacement(std::move(diff), r, gen);
      sel.negatives[i] = select_extreme(h, norms, i, drawn, m_n, /*most_similar=*/false);
    }
  }
  return sel;
}

PairStrategy parse_strategy(const std::string& name) {
  if (name == "FSF") return PairStrategy::kFSF;
  if (name == "IMVC") return PairStrategy::kIMVC;
  if (name == "G") return PairStrategy::kG;
  if (name == "S") return PairStrategy::kS;
  if (name == "K") return PairStrategy::kK;
  if (name == "RS") return PairStrategy::kRS;
  throw ConfigError("unknown strategy '" + name + "' (expected FSF, IMVC, G, S, K or RS)");
}

const char* strategy_name(PairStrategy s) {
  switch (s) {
    case PairStrategy::kFSF: return "FSF";
    case PairStrategy::kIMVC: return "IMVC";
    case PairStrategy::kG: return "G";
    case PairStrategy::kS: return "S";
    case PairStrategy::kK: return "K";
    case PairStrategy::kRS: return "RS";
  }
  return "?";
}

PairSelection select_pairs_ablation(PairStrategy strategy, const Matrix& h, int k,
                                    const SampleBudget& budget, int m_p, int m_n,
                                    std::uint64_t seed, int k_positive_cap) {
  const int n = static_cast<int>(h.rows());
  PairSelection sel;
  sel.positives.assign(n, {});
  sel.negatives.assign(n, {});
  const Vector norms = row_norms(h);

  switch (strategy) {
    case PairStrategy::kS: {
      // the sample itself is the only positive; random others are negatives
      for (int i = 0; i < n; ++i) {
        std::mt19937_64 gen(derive_seed(seed, stream::kPairSample, static_cast<std::uint64_t>(i)));
        std::vector<int> others;
        others.reserve(n - 1);
        for (int j = 0; j < n; ++j)
          if (j != i) others.push_back(j);
        sel.negatives[i] = sample_without_replacement(std::move(others), m_n, gen);
        std::sort(sel.negatives[i].begin(), sel.negatives[i].end());
      }
      return sel;
    }
    case PairStrategy::kRS: {
      for (int i = 0; i < n; ++i) {
        std::mt19937_64 gen(derive_seed(seed, stream::kPairSample, static_cast<std::uint64_t>(i)));
        std::vector<int> others;
        others.reserve(n - 1);
        for (int j = 0; j < n; ++j)
          if (j != i) others.push_back(j);
        auto drawn = sample_without_replacement(std::move(others), m_p + m_n, gen);
        sel.positives[i].assign(drawn.begin(), drawn.begin() + std::min<std::size_t>(m_p, drawn.size()));
        if (drawn.size() > static_cast<std::size_t>(m_p))
          sel.negatives[i].assign(drawn.begin() + m_p, drawn.end());
        std::sort(sel.positives[i].begin(), sel.positives[i].end());
        std::sort(sel.negatives[i].begin(), sel.negatives[i].end());
      }
      return sel;
    }
    case PairStrategy::kG: {
      // unfiltered graph: nearest m_p + m_n neighbors become positives
      const int m = m_p + m_n;
      for (int i = 0; i < n; ++i) {
        std::vector<int> others;
        others.reserve(n - 1);
        for (int j = 0; j < n; ++j)
          if (j != i) others.push_back(j);
        sel.positives[i] = select_extreme(h, norms, i, others, m, /*most_similar=*/true);
      }
      return sel;
    }
    case PairStrategy::kK: {
      ClusterAssignment clusters =
          kmeans(h, k, /*restarts=*/1, derive_seed(seed, stream::kPairKmeans));
      auto members = members_by_cluster(clusters.labels, k);
      const int r = budget.resolve(n);
      for (int i = 0; i < n; ++i) {
        std::mt19937_64 gen(derive_seed(seed, stream::kPairSample, static_cast<std::uint64_t>(i)));
        const int ci = clusters.labels[i];
        sel.positives[i] = pool_minus_self(members[ci], i);
        if (k_positive_cap > 0 && static_cast<int>(sel.positives[i].size()) > k_positive_cap)
          sel.positives[i] = select_extreme(h, norms, i, sel.positives[i], k_positive_cap, true);
        if (m_n > 0) {
          std::vector<int> diff;
          for (int c = 0; c < k; ++c) {
            if (c == ci) continue;
            diff.insert(diff.end(), members[c].begin(), members[c].end());
          }
          auto drawn = sample_without_replacement(std::move(diff), r, gen);
          sel.negatives[i] = select_extreme(h, norms, i, drawn, m_n, /*most_similar=*/false);
        }
      }
      return sel;
    }
    case PairStrategy::kFSF:
    case PairStrategy::kIMVC:
      throw ConfigError("select_pairs_ablation: use cluster_then_sample for FSF/IMVC");
  }
  throw ConfigError("select_pairs_ablation: unknown strategy");
}

PairSelection select_pairs(PairStrategy strategy, const Matrix& h, int k,
                           const SampleBudget& budget, int m_p, int m_n, std::uint64_t seed) {
  if (strategy == PairStrategy::kFSF || strategy == PairStrategy::kIMVC)
    return cluster_then_sample(h, k, budget, m_p, m_n, seed);
  return select_pairs_ablation(strategy, h, k, budget, m_p, m_n, seed);
}

}  // namespace cmvc
