#include "cmvc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cmvc/error.hpp"

namespace cmvc {

namespace {

struct Contingency {
  int kp = 0;  // distinct predicted ids (max + 1)
  int kt = 0;
  std::vector<long long> counts;  // kp x kt, row-major
  long long n = 0;

  long long at(int p, int t) const { return counts[static_cast<std::size_t>(p) * kt + t]; }
};

Contingency build_contingency(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw DataError("metrics: label vectors differ in length (" + std::to_string(pred.size()) +
                    " vs " + std::to_string(truth.size()) + ")");
  if (pred.empty()) throw DataError("metrics: empty label vectors");
  Contingency c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || truth[i] < 0) throw DataError("metrics: negative label id");
    c.kp = std::max(c.kp, pred[i] + 1);
    c.kt = std::max(c.kt, truth[i] + 1);
  }
  c.counts.assign(static_cast<std::size_t>(c.kp) * c.kt, 0);
  for (std::size_t i = 0; i < pred.size(); ++i)
    c.counts[static_cast<std::size_t>(pred[i]) * c.kt + truth[i]]++;
  c.n = static_cast<long long>(pred.size());
  return c;
}

// Min-cost assignment on a square matrix (Jonker-Volgenant potentials, O(n^3)).
double assignment_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j)
    if (p[j]) total += cost[p[j] - 1][j - 1];
  return total;
}

}  // namespace

double clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  Contingency c = build_contingency(pred, truth);
  const int k = std::max(c.kp, c.kt);
  // maximize matches == minimize (n - count); pad missing ids with zero profit
  std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
  for (int p = 0; p < k; ++p)
    for (int t = 0; t < k; ++t)
      cost[p][t] = (p < c.kp && t < c.kt) ? -static_cast<double>(c.at(p, t)) : 0.0;
  double matched = -assignment_min_cost(cost);
  return matched / static_cast<double>(c.n);
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  Contingency c = build_contingency(pred, truth);
  const double n = static_cast<double>(c.n);
  std::vector<double> pp(c.kp, 0.0), pt(c.kt, 0.0);
  for (int p = 0; p < c.kp; ++p)
    for (int t = 0; t < c.kt; ++t) {
      pp[p] += c.at(p, t);
      pt[t] += c.at(p, t);
    }
  double hp = 0.0, ht = 0.0;
  for (double m : pp)
    if (m > 0) hp -= (m / n) * std::log(m / n);
  for (double m : pt)
    if (m > 0) ht -= (m / n) * std::log(m / n);
  if (hp <= 0.0 || ht <= 0.0) return 0.0;

  double mi = 0.0;
  for (int p = 0; p < c.kp; ++p)
    for (int t = 0; t < c.kt; ++t) {
      double nij = static_cast<double>(c.at(p, t));
      if (nij <= 0) continue;
      mi += (nij / n) * std::log(nij * n / (pp[p] * pt[t]));
    }
  return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
  Contingency c = build_contingency(pred, truth);
  long long matched = 0;
  for (int p = 0; p < c.kp; ++p) {
    long long best = 0;
    for (int t = 0; t < c.kt; ++t) best = std::max(best, c.at(p, t));
    matched += best;
  }
  return static_cast<double>(matched) / static_cast<double>(c.n);
}

MetricSet evaluate_labels(const std::vector<int>& pred, const std::vector<int>& truth) {
  return MetricSet{clustering_accuracy(pred, truth), nmi(pred, truth), purity(pred, truth)};
}

}  // namespace cmvc
