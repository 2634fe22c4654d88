#pragma once

#include <cstdint>
#include <vector>

#include "cmvc/rng.hpp"

namespace cmvc {

struct ClusterAssignment {
  std::vector<int> labels;  // n entries in [0, k)
  Matrix centers;           // k x d
  double inertia = 0.0;     // sum of squared distances to assigned centers
  int iterations = 0;
  bool empty_repaired = false;
  std::vector<double> inertia_trace;  // per Lloyd iteration, non-increasing
};

struct KMeansOptions {
  int max_iters = 300;
  double rel_tol = 1e-9;  // stop when (prev - cur) / max(prev, eps) <= rel_tol
  bool record_trace = false;
};

// Best-inertia result over `restarts` seeded k-means++ initializations
// (ties broken by restart index). Empty clusters are repaired by reseeding
// with the point farthest from its current center.
ClusterAssignment kmeans(const Matrix& x, int k, int restarts, std::uint64_t seed,
                         const KMeansOptions& opts = {});

}  // namespace cmvc
