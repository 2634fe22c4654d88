#include "cmvc/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cmvc/error.hpp"

namespace cmvc {

void SyntheticSpec::validate() const {
  if (k < 2) throw ConfigError("synthetic: k must be >= 2");
  if (n < k) throw ConfigError("synthetic: n must be >= k");
  if (views < 1) throw ConfigError("synthetic: view count must be >= 1");
  if (dims.size() != static_cast<std::size_t>(views))
    throw ConfigError("synthetic: dims must have one entry per view");
  for (int d : dims)
    if (d < 1) throw ConfigError("synthetic: view dimension must be >= 1");
  if (separation < 0) throw ConfigError("synthetic: separation must be >= 0");
  if (noise_level.size() != static_cast<std::size_t>(views))
    throw ConfigError("synthetic: noise_level must have one entry per view");
  for (double s : noise_level)
    if (s < 0) throw ConfigError("synthetic: noise_level must be >= 0");
  for (int t : corrupted_views)
    if (t < 1 || t > views)
      throw ConfigError("synthetic: corrupted view index " + std::to_string(t) + " out of range");
}

namespace {

// k centers in R^d with pairwise distance >= sep. For d >= k the centers sit
// on random orthogonal directions at staggered radii (pairwise distance at
// least sep, and distinct per-cluster angular spread so the kernel spectrum
// is not degenerate across clusters); for 2 <= d < k they sit on a circle in
// a random 2-plane; d == 1 falls back to a line of stride sep.
Matrix make_centers(int k, int d, double sep, std::mt19937_64& gen) {
  Matrix centers(k, d);
  if (d >= k) {
    Matrix q = random_orthonormal(d, k, gen);
    double base = sep / std::numbers::sqrt2;
    for (int j = 0; j < k; ++j) q.col(j) *= base * (1.0 + 0.5 * j);
    centers = q.transpose();
  } else if (d >= 2) {
    double radius = sep / (2.0 * std::sin(std::numbers::pi / k));
    Matrix flat = Matrix::Zero(k, d);
    for (int j = 0; j < k; ++j) {
      double ang = 2.0 * std::numbers::pi * j / k;
      flat(j, 0) = radius * std::cos(ang);
      flat(j, 1) = radius * std::sin(ang);
    }
    centers = flat * random_orthogonal(d, gen).transpose();
  } else {
    for (int j = 0; j < k; ++j) centers(j, 0) = sep * (j + 1);
  }
  return centers;
}

}  // namespace

SyntheticStream generate_synthetic_stream(const SyntheticSpec& spec) {
  spec.validate();
  SyntheticStream out;
  out.labels.resize(spec.n);
  for (int i = 0; i < spec.n; ++i) out.labels[i] = i % spec.k;

  for (int t = 1; t <= spec.views; ++t) {
    const int d = spec.dims[t - 1];
    std::mt19937_64 gen(derive_seed(spec.seed, stream::kSynthView, static_cast<std::uint64_t>(t)));
    Matrix centers = make_centers(spec.k, d, spec.separation, gen);

    std::normal_distribution<double> g;
    Matrix x(spec.n, d);
    for (int i = 0; i < spec.n; ++i) {
      for (int j = 0; j < d; ++j) x(i, j) = centers(out.labels[i], j) + g(gen);
    }
    if (spec.corrupted_views.count(t)) {
      const double s = spec.noise_level[t - 1];
      for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) += s * g(gen);
    }
    out.views.push_back(ViewMatrix{std::move(x), t});
  }
  return out;
}

}  // namespace cmvc
