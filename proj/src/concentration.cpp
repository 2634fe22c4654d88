#include "cmvc/concentration.hpp"

#include <cmath>
#include <random>

#include "cmvc/error.hpp"
#include "cmvc/rng.hpp"

namespace cmvc {

namespace {

// guards the comparison against summation-order float noise; the tested
// bounds are ~1e-1, so this cannot mask a real violation
constexpr double kFloatSlack = 1e-12;

void check_args(std::size_t n, int r, double delta) {
  if (n == 0) throw DataError("bound verifier: empty population");
  if (r < 1 || static_cast<std::size_t>(r) > n)
    throw DataError("bound verifier: r must be in [1, n]");
  if (!(delta > 0.0 && delta < 1.0)) throw DataError("bound verifier: delta must be in (0,1)");
}

// Draws r indices without replacement via partial Fisher-Yates on a reusable
// index vector (restored after each draw).
class IndexSampler {
 public:
  explicit IndexSampler(std::size_t n) : idx_(n) {
    for (std::size_t i = 0; i < n; ++i) idx_[i] = static_cast<int>(i);
  }

  template <typename Fn>
  void draw(int r, std::mt19937_64& gen, Fn&& per_index) {
    const int n = static_cast<int>(idx_.size());
    for (int i = 0; i < r; ++i) {
      std::uniform_int_distribution<int> pick(i, n - 1);
      std::swap(idx_[i], idx_[pick(gen)]);
      per_index(idx_[i]);
    }
  }

 private:
  std::vector<int> idx_;
};

double population_mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double population_std(const std::vector<double>& x, double mean) {
  double s = 0.0;
  for (double v : x) s += (v - mean) * (v - mean);
  return std::sqrt(s / static_cast<double>(x.size()));
}

}  // namespace

BoundCheck verify_mean_bound(const std::vector<double>& population, int r, double delta,
                             long long trials, std::uint64_t seed) {
  check_args(population.size(), r, delta);
  const std::size_t n = population.size();
  const double mu = population_mean(population);
  BoundCheck out;
  out.bound = std::sqrt((1.0 / r - 1.0 / static_cast<double>(n)) * std::log(2.0 / delta));
  out.trials = trials;

  std::mt19937_64 gen(seed);
  IndexSampler sampler(n);
  for (long long t = 0; t < trials; ++t) {
    double sum = 0.0;
    sampler.draw(r, gen, [&](int i) { sum += population[i]; });
    if (std::abs(sum / r - mu) > out.bound + kFloatSlack) ++out.violations;
  }
  return out;
}

BoundCheck verify_std_bound(const std::vector<double>& population, int r, double delta,
                            long long trials, std::uint64_t seed) {
  check_args(population.size(), r, delta);
  const std::size_t n = population.size();
  const double mu = population_mean(population);
  const double sigma = population_std(population, mu);
  BoundCheck out;
  out.bound = std::sqrt(std::log(3.0 / delta) / (2.0 * r));
  out.trials = trials;

  std::mt19937_64 gen(seed);
  IndexSampler sampler(n);
  std::vector<double> draw(r);
  for (long long t = 0; t < trials; ++t) {
    int m = 0;
    sampler.draw(r, gen, [&](int i) { draw[m++] = population[i]; });
    double dmu = 0.0;
    for (double v : draw) dmu += v;
    dmu /= r;
    double dvar = 0.0;
    for (double v : draw) dvar += (v - dmu) * (v - dmu);
    double dsigma = std::sqrt(dvar / r);
    if (std::abs(sigma - dsigma) > out.bound + kFloatSlack) ++out.violations;
  }
  return out;
}

}  // namespace cmvc
