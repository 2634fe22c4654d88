#pragma once

#include <vector>

namespace cmvc {

// External clustering quality measures. All are invariant under bijective
// relabeling of either argument and live in [0, 1].

// Best label matching via the assignment problem on the contingency matrix.
double clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// I(pred;truth) / sqrt(H(pred) H(truth)), natural log; 0 when either entropy is 0.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

// Per-predicted-cluster majority vote: sum_c max_t |c n t| / n.
double purity(const std::vector<int>& pred, const std::vector<int>& truth);

struct MetricSet {
  double acc = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
};

MetricSet evaluate_labels(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace cmvc
