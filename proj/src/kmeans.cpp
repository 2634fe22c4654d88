#include "cmvc/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "cmvc/error.hpp"

namespace cmvc {

namespace {

// Squared distances of every row of x to the given center row.
void sq_dist_to(const Matrix& x, const Eigen::RowVectorXd& center, Vector& out) {
  out = (x.rowwise() - center).rowwise().squaredNorm();
}

Matrix kmeanspp_init(const Matrix& x, int k, std::mt19937_64& gen) {
  const int n = static_cast<int>(x.rows());
  Matrix centers(k, x.cols());
  std::uniform_int_distribution<int> first(0, n - 1);
  centers.row(0) = x.row(first(gen));

  Vector best_d2(n), d2(n);
  sq_dist_to(x, centers.row(0), best_d2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    double total = best_d2.sum();
    int chosen;
    if (total <= 0.0) {
      // all mass on existing centers; fall back to uniform choice
      chosen = first(gen);
    } else {
      double target = unit(gen) * total;
      double acc = 0.0;
      chosen = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += best_d2[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    }
    centers.row(c) = x.row(chosen);
    sq_dist_to(x, centers.row(c), d2);
    best_d2 = best_d2.cwiseMin(d2);
  }
  return centers;
}

struct LloydResult {
  std::vector<int> labels;
  Matrix centers;
  double inertia;
  int iterations;
  bool repaired;
  std::vector<double> trace;
};

LloydResult lloyd(const Matrix& x, Matrix centers, const KMeansOptions& opts) {
  const int n = static_cast<int>(x.rows());
  const int k = static_cast<int>(centers.rows());
  std::vector<int> labels(n, 0);
  Vector d2(n);
  Matrix dist(n, k);
  bool repaired_any = false;
  double prev_inertia = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
  int iter = 0;

  for (; iter < opts.max_iters; ++iter) {
    // assignment (ties -> lowest center index)
    for (int c = 0; c < k; ++c) {
      sq_dist_to(x, centers.row(c), d2);
      dist.col(c) = d2;
    }
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bd = dist(i, 0);
      for (int c = 1; c < k; ++c) {
        if (dist(i, c) < bd) {
          bd = dist(i, c);
          best = c;
        }
      }
      labels[i] = best;
      inertia += bd;
    }
    if (opts.record_trace) trace.push_back(inertia);

    // update
    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(labels[i]) += x.row(i);
      counts[labels[i]]++;
    }
    std::vector<int> empties;
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0)
        centers.row(c) = sums.row(c) / counts[c];
      else
        empties.push_back(c);
    }
    if (!empties.empty()) {
      repaired_any = true;
      // reseed each empty cluster with the point farthest from its center
      std::vector<char> taken(n, 0);
      for (int c : empties) {
        int far_i = -1;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          if (taken[i]) continue;
          double d = (x.row(i) - centers.row(labels[i])).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        centers.row(c) = x.row(far_i);
        taken[far_i] = 1;
      }
      prev_inertia = std::numeric_limits<double>::infinity();
      continue;  // re-assign with repaired centers
    }

    double denom = std::max(prev_inertia, 1e-300);
    if (std::isfinite(prev_inertia) && (prev_inertia - inertia) / denom <= opts.rel_tol) {
      prev_inertia = inertia;
      ++iter;
      break;
    }
    prev_inertia = inertia;
  }

  // final assignment against the last centers
  double inertia = 0.0;
  for (int c = 0; c < k; ++c) {
    sq_dist_to(x, centers.row(c), d2);
    dist.col(c) = d2;
  }
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double bd = dist(i, 0);
    for (int c = 1; c < k; ++c) {
      if (dist(i, c) < bd) {
        bd = dist(i, c);
        best = c;
      }
    }
    labels[i] = best;
    inertia += bd;
  }
  if (opts.record_trace) trace.push_back(inertia);
  return {std::move(labels), std::move(centers), inertia, iter, repaired_any, std::move(trace)};
}

}  // namespace

ClusterAssignment kmeans(const Matrix& x, int k, int restarts, std::uint64_t seed,
                         const KMeansOptions& opts) {
  const int n = static_cast<int>(x.rows());
  if (k > n) throw DataError("kmeans: k > n (" + std::to_string(k) + " > " + std::to_string(n) + ")");
  if (k < 1) throw DataError("kmeans: k must be >= 1");
  if (restarts < 1) restarts = 1;

  ClusterAssignment best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 gen(derive_seed(seed, static_cast<std::uint64_t>(r)));
    Matrix init = kmeanspp_init(x, k, gen);
    LloydResult res = lloyd(x, std::move(init), opts);
    if (res.inertia < best.inertia) {
      best.labels = std::move(res.labels);
      best.centers = std::move(res.centers);
      best.inertia = res.inertia;
      best.iterations = res.iterations;
      best.empty_repaired = res.repaired;
      best.inertia_trace = std::move(res.trace);
    }
  }
  return best;
}

}  // namespace cmvc
