#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "cmvc/csv.hpp"

namespace cmvc {

// Desk-scale synthetic stream: k isotropic unit-variance Gaussian clusters per
// view, cluster centers mutually >= separation apart, balanced labels shared
// across views. Views listed in corrupted_views get label-independent
// additive Gaussian noise at that view's noise_level.
struct SyntheticSpec {
  int n = 600;
  int k = 3;
  int views = 3;
  std::vector<int> dims;            // per-view feature dimension
  double separation = 10.0;
  std::vector<double> noise_level;  // per-view, applied only when corrupted
  std::set<int> corrupted_views;    // 1-based view indices
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

struct SyntheticStream {
  std::vector<ViewMatrix> views;
  std::vector<int> labels;
};

SyntheticStream generate_synthetic_stream(const SyntheticSpec& spec);

}  // namespace cmvc
