#include <doctest.h>

#include "cmvc/error.hpp"
#include "cmvc/kmeans.hpp"
#include "cmvc/metrics.hpp"
#include "cmvc/partition.hpp"
#include "cmvc/synthetic.hpp"

using namespace cmvc;

namespace {

SyntheticSpec basic_spec() {
  SyntheticSpec s;
  s.n = 600;
  s.k = 3;
  s.views = 3;
  s.dims = {16, 16, 16};
  s.separation = 10.0;
  s.noise_level = {0.0, 0.0, 0.0};
  s.seed = 11;
  return s;
}

}  // namespace

TEST_CASE("synthetic labels are balanced") {
  SyntheticStream s = generate_synthetic_stream(basic_spec());
  REQUIRE(s.views.size() == 3);
  std::vector<int> counts(3, 0);
  for (int l : s.labels) counts[l]++;
  CHECK(counts[0] == 200);
  CHECK(counts[1] == 200);
  CHECK(counts[2] == 200);
  for (const auto& v : s.views) CHECK(v.samples() == 600);
}

TEST_CASE("synthetic generation is bitwise deterministic") {
  SyntheticSpec spec = basic_spec();
  SyntheticStream a = generate_synthetic_stream(spec);
  SyntheticStream b = generate_synthetic_stream(spec);
  CHECK(a.labels == b.labels);
  for (std::size_t t = 0; t < a.views.size(); ++t)
    CHECK((a.views[t].data - b.views[t].data).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("separated clusters give near-perfect single-view accuracy") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SyntheticSpec spec = basic_spec();
    spec.views = 1;
    spec.dims = {16};
    spec.noise_level = {0.0};
    spec.seed = seed;
    SyntheticStream s = generate_synthetic_stream(spec);
    Matrix h = extract_partition(s.views[0].data, spec.k);
    ClusterAssignment a = kmeans(h, spec.k, 5, seed);
    CHECK(clustering_accuracy(a.labels, s.labels) >= 0.99);
  }
}

TEST_CASE("corrupted views cluster worse than clean ones") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SyntheticSpec spec = basic_spec();
    spec.views = 2;
    spec.dims = {16, 16};
    spec.noise_level = {0.0, 5.0};
    spec.corrupted_views = {2};
    spec.seed = seed;
    SyntheticStream s = generate_synthetic_stream(spec);

    double acc[2];
    for (int t = 0; t < 2; ++t) {
      Matrix h = extract_partition(s.views[t].data, spec.k);
      ClusterAssignment a = kmeans(h, spec.k, 5, derive_seed(seed, t));
      acc[t] = clustering_accuracy(a.labels, s.labels);
    }
    CHECK(acc[1] < acc[0]);
  }
}

TEST_CASE("synthetic spec validation") {
  SyntheticSpec s = basic_spec();
  s.k = 1;
  CHECK_THROWS_AS(generate_synthetic_stream(s), ConfigError);
  s = basic_spec();
  s.corrupted_views = {9};
  CHECK_THROWS_AS(generate_synthetic_stream(s), ConfigError);
  s = basic_spec();
  s.dims = {16};
  CHECK_THROWS_AS(generate_synthetic_stream(s), ConfigError);
}
