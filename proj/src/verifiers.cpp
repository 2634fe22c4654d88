#include "cmvc/verifiers.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cmvc/error.hpp"
#include "cmvc/fusion.hpp"
#include "cmvc/partition.hpp"
#include "cmvc/pipeline.hpp"
#include "cmvc/rng.hpp"

namespace cmvc {

namespace {

// Random signed pair store with about density * n(n-1)/2 entries.
StructuralBuffer random_buffer(int n, double density, double w_p, double w_n,
                               std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PairSelection sel;
  sel.positives.assign(n, {});
  sel.negatives.assign(n, {});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double u = unit(gen);
      if (u < density / 2)
        sel.positives[i].push_back(j);
      else if (u < density)
        sel.negatives[i].push_back(j);
    }
  return build_indicator(sel, w_p, w_n, n);
}

}  // namespace

VerifyResult verify_cs_bound(int instances, int max_n, double tol, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> pick_n(4, max_n), pick_k(2, 6);
  double worst_gap = 0.0, worst_mismatch = 0.0;
  for (int it = 0; it < instances; ++it) {
    int n = pick_n(gen);
    int k = std::min(pick_k(gen), n - 1);
    Matrix h = random_orthonormal(n, k, gen);
    StructuralBuffer w = random_buffer(n, 0.2, 1.0, 0.2, gen);

    double sparse = contrastive_loss(h, w);
    // dense route: materialize C and W
    Matrix c = similarity_matrix(h);
    Matrix wd = Matrix::Zero(n, n);
    for (const auto& [key, sign] : w.entries()) {
      double v = sign > 0 ? w.positive_weight() : -w.negative_weight();
      wd(key.first, key.second) = v;
      wd(key.second, key.first) = v;
    }
    double dense = (c * wd).trace();
    worst_mismatch = std::max(worst_mismatch, std::abs(sparse - dense));
    worst_gap = std::max(worst_gap, std::abs(sparse) - w.frobenius_norm());
  }
  VerifyResult res;
  res.pass = worst_gap <= 0.0 && worst_mismatch <= tol;
  std::ostringstream os;
  os << "cs_bound: max(|Tr(CW)| - ||W||_F) = " << worst_gap
     << ", max |sparse - dense| = " << worst_mismatch << " over " << instances << " instances";
  res.detail = os.str();
  return res;
}

VerifyResult verify_procrustes(int instances, int max_k, int q_samples, double tol,
                               std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> pick_k(2, max_k);
  double worst_sigma_gap = 0.0;
  double worst_domination = 0.0;  // max Tr(Q^T B) - Tr(M^T B) over samples
  for (int it = 0; it < instances; ++it) {
    const int k = pick_k(gen);
    Matrix b = gaussian_matrix(k, k, gen);
    Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix m = svd.matrixU() * svd.matrixV().transpose();
    double attained = (m.transpose() * b).trace();
    worst_sigma_gap = std::max(worst_sigma_gap, std::abs(attained - svd.singularValues().sum()));
    for (int s = 0; s < q_samples; ++s) {
      Matrix q = random_orthogonal(k, gen);
      worst_domination = std::max(worst_domination, (q.transpose() * b).trace() - attained);
    }
  }
  VerifyResult res;
  res.pass = worst_sigma_gap <= tol && worst_domination <= tol;
  std::ostringstream os;
  os << "procrustes: max |Tr(M^T B) - sum sigma| = " << worst_sigma_gap
     << ", max domination gap = " << worst_domination << " over " << instances << " instances x "
     << q_samples << " rotations";
  res.detail = os.str();
  return res;
}

VerifyResult verify_monotone_streams(int streams, int max_outer, double lambda,
                                     std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> pick_n(200, 600), pick_k(3, 5), pick_d(8, 24);
  std::uniform_real_distribution<double> pick_sep(6.0, 12.0);
  int violations = 0, unconverged = 0, bound_breaks = 0;
  for (int s = 0; s < streams; ++s) {
    SyntheticSpec spec;
    spec.n = pick_n(gen);
    spec.k = pick_k(gen);
    spec.views = 3;
    spec.dims = {pick_d(gen), pick_d(gen), pick_d(gen)};
    spec.separation = pick_sep(gen);
    spec.noise_level = {0.0, 0.0, 3.0};
    if (s % 2 == 1) spec.corrupted_views.insert(3);
    spec.seed = derive_seed(seed, 0xBEEF, s);

    RunConfig cfg;
    cfg.k = spec.k;
    cfg.lambda = lambda;
    cfg.seed = spec.seed;
    cfg.kmeans_repeats = 0;  // traces only
    cfg.synthetic = spec;

    SyntheticStream stream = generate_synthetic_stream(spec);
    try {
      ContinualResult res = run_continual(stream.views, stream.labels, cfg);
      for (const FuseTrace& tr : res.report.traces) {
        if (!tr.converged || tr.iterations > max_outer) ++unconverged;
        for (std::size_t i = 1; i < tr.objective.size(); ++i)
          if (tr.objective[i] < tr.objective[i - 1] - 1e-9) ++violations;
        for (double v : tr.objective)
          if (v > tr.bound + 1e-9) ++bound_breaks;
      }
    } catch (const InvariantError&) {
      ++violations;  // fuse_view already polices the trace
    }
  }
  VerifyResult res;
  res.pass = violations == 0 && unconverged == 0 && bound_breaks == 0;
  std::ostringstream os;
  os << "monotone: " << violations << " trace violations, " << unconverged
     << " unconverged views, " << bound_breaks << " bound breaks over " << streams << " streams";
  res.detail = os.str();
  return res;
}

}  // namespace cmvc
