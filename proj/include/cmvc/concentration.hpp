#pragma once

#include <cstdint>
#include <vector>

namespace cmvc {

struct BoundCheck {
  double bound = 0.0;       // the tested RHS
  long long violations = 0;
  long long trials = 0;
  double rate() const { return trials ? static_cast<double>(violations) / trials : 0.0; }
};

// Fraction of without-replacement draws of size r whose mean deviates from
// the population mean by more than sqrt((1/r - 1/n) log(2/delta)).
// Target rate: <= delta on [0,1]-bounded data.
BoundCheck verify_mean_bound(const std::vector<double>& population, int r, double delta,
                             long long trials, std::uint64_t seed);

// Same protocol for |sigma - sigma_hat| against sqrt(log(3/delta) / (2r)),
// population-convention standard deviations. Target rate: <= 2 delta.
BoundCheck verify_std_bound(const std::vector<double>& population, int r, double delta,
                            long long trials, std::uint64_t seed);

}  // namespace cmvc
