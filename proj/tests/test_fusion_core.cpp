#include <doctest.h>

#include <random>

#include "cmvc/error.hpp"
#include "cmvc/fusion.hpp"
#include "cmvc/partition.hpp"
#include "oracles.hpp"

using namespace cmvc;

namespace {

StructuralBuffer random_buffer(int n, double density, std::mt19937_64& gen) {
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
  return build_indicator(sel, 1.0, 0.2, n);
}

}  // namespace

TEST_CASE("similarity of identity columns is a scaled diagonal") {
  const int n = 6, k = 3;
  Matrix h = Matrix::Identity(n, n).leftCols(k);
  Matrix c = similarity_matrix(h);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double want = (i == j && i < k) ? 1.0 / k : 0.0;
      CHECK(c(i, j) == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("similarity has unit trace and bounded norm") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> pick_n(4, 40), pick_k(2, 6);
    int n = pick_n(gen);
    int k = std::min(pick_k(gen), n);
    Matrix h = random_orthonormal(n, k, gen);
    Matrix c = similarity_matrix(h);
    CHECK(c.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.norm() <= 1.0 + 1e-12);
    CHECK((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("contrastive loss hand case") {
  Matrix h(2, 1);
  h << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  PairSelection sel;
  sel.positives = {{1}, {}};
  sel.negatives = {{}, {}};
  StructuralBuffer w = build_indicator(sel, 1.0, 0.2, 2);
  CHECK(contrastive_loss(h, w) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("contrastive loss of an empty buffer is zero") {
  std::mt19937_64 gen(5);
  Matrix h = random_orthonormal(10, 3, gen);
  StructuralBuffer w(10, 1.0, 0.2);
  CHECK(contrastive_loss(h, w) == 0.0);
}

TEST_CASE("sparse loss equals the dense trace") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> pick_n(4, 30), pick_k(2, 5);
    int n = pick_n(gen);
    int k = std::min(pick_k(gen), n);
    Matrix h = random_orthonormal(n, k, gen);
    StructuralBuffer w = random_buffer(n, 0.3, gen);
    double sparse = contrastive_loss(h, w);
    double dense = oracle::dense_trace_cw(h, oracle::dense_indicator(w));
    CHECK(sparse == doctest::Approx(dense).epsilon(1e-12));
  }
}

TEST_CASE("Cauchy-Schwarz bound holds on random instances") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> pick_n(4, 50);
    int n = pick_n(gen);
    Matrix h = random_orthonormal(n, 3, gen);
    StructuralBuffer w = random_buffer(n, 0.3, gen);
    CHECK(std::abs(contrastive_loss(h, w)) <= w.frobenius_norm() + 1e-12);
  }
}

TEST_CASE("batched loss equals exact loss for b = n") {
  std::mt19937_64 gen(13);
  Matrix h = random_orthonormal(24, 3, gen);
  StructuralBuffer w = random_buffer(24, 0.3, gen);
  CHECK(contrastive_loss_batched(h, w, 24) ==
        doctest::Approx(contrastive_loss(h, w)).epsilon(1e-14));
}

TEST_CASE("batched loss equals exact loss when no pair crosses a batch") {
  PairSelection sel;
  sel.positives.assign(8, {});
  sel.negatives.assign(8, {});
  sel.positives[0] = {1};  // batch 0 with b=4
  sel.negatives[5] = {6};  // batch 1
  StructuralBuffer w = build_indicator(sel, 1.0, 0.2, 8);
  std::mt19937_64 gen(17);
  Matrix h = random_orthonormal(8, 2, gen);
  CHECK(contrastive_loss_batched(h, w, 4) ==
        doctest::Approx(contrastive_loss(h, w)).epsilon(1e-14));
}

TEST_CASE("batched loss matches the intra-batch dense oracle") {
  std::mt19937_64 gen(19);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> pick_n(6, 40);
    int n = pick_n(gen);
    int b = n / 2;
    Matrix h = random_orthonormal(n, 3, gen);
    StructuralBuffer w = random_buffer(n, 0.4, gen);
    double batched = contrastive_loss_batched(h, w, b);
    double dense = oracle::dense_trace_cw_batched(h, oracle::dense_indicator(w), b);
    CHECK(batched == doctest::Approx(dense).epsilon(1e-12));
  }
}

TEST_CASE("rotation solve returns identity when already aligned") {
  std::mt19937_64 gen(23);
  Matrix h = random_orthonormal(12, 3, gen);
  Matrix m = solve_rotation(h, h);
  CHECK((m - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("rotation solve recovers an applied rotation") {
  std::mt19937_64 gen(29);
  Matrix h = random_orthonormal(15, 3, gen);
  Matrix q = random_orthogonal(3, gen);
  Matrix m = solve_rotation(h, h * q);
  CHECK((m - q).cwiseAbs().maxCoeff() <= 1e-10);
  Matrix b = h.transpose() * (h * q);
  CHECK((m.transpose() * b).trace() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("rotation solve attains the singular value sum and beats samples") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix h_t = random_orthonormal(10, 3, gen);
    Matrix h_s = random_orthonormal(10, 3, gen);
    Matrix b = h_t.transpose() * h_s;
    Matrix m = solve_rotation(h_t, h_s);
    Eigen::JacobiSVD<Matrix> svd(b);
    double attained = (m.transpose() * b).trace();
    CHECK(attained == doctest::Approx(svd.singularValues().sum()).epsilon(1e-10));
    for (int s = 0; s < 500; ++s) {
      Matrix q = random_orthogonal(3, gen);
      CHECK((q.transpose() * b).trace() <= attained + 1e-10);
    }
  }
}

TEST_CASE("partition solve with zero weight is plain polar alignment") {
  std::mt19937_64 gen(37);
  Matrix a = gaussian_matrix(12, 3, gen);
  StructuralBuffer w(12, 1.0, 0.2);
  StiefelSolveResult res = solve_partition(a, 0.0, w);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix direct = svd.matrixU() * svd.matrixV().transpose();
  CHECK((res.h - direct).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(res.objective_trace.back() ==
        doctest::Approx(svd.singularValues().sum()).epsilon(1e-10));
  CHECK(res.converged);
}

TEST_CASE("partition solve fixes an orthonormal A with empty W") {
  std::mt19937_64 gen(41);
  Matrix h0 = random_orthonormal(14, 3, gen);
  StructuralBuffer w(14, 1.0, 0.2);
  StiefelSolveResult res = solve_partition(h0, 0.7, w);
  CHECK((res.h - h0).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(res.objective_trace.back() == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("degenerate zero problem returns canonical columns") {
  Matrix a = Matrix::Zero(6, 2);
  StructuralBuffer w(6, 1.0, 0.2);
  StiefelSolveResult res = solve_partition(a, 0.5, w);
  CHECK((res.h - Matrix::Identity(6, 6).leftCols(2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("partition solve beats random orthonormal search") {
  std::mt19937_64 gen(43);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 20, k = 3;
    Matrix a = gaussian_matrix(n, k, gen);
    StructuralBuffer w = random_buffer(n, 0.3, gen);
    std::uniform_real_distribution<double> pick_l(0.1, 1.0);
    double lt = pick_l(gen);

    StiefelSolveResult res = solve_partition(a, lt, w);
    REQUIRE(res.objective_trace.size() >= 2);
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
      CHECK(res.objective_trace[i] >= res.objective_trace[i - 1] - 1e-9);

    Matrix wd = oracle::dense_indicator(w);
    auto objective = [&](const Matrix& h) {
      return (h.transpose() * a).trace() + lt * (h * h.transpose() * wd).trace();
    };
    CHECK(res.objective_trace.back() ==
          doctest::Approx(objective(res.h)).epsilon(1e-9));
    double best_random = -1e300;
    for (int s = 0; s < 2000; ++s)
      best_random = std::max(best_random, objective(random_orthonormal(n, k, gen)));
    CHECK(res.objective_trace.back() >= best_random - 1e-9);
  }
}

TEST_CASE("diagonal shifts leave the partition solve unchanged") {
  std::mt19937_64 gen(47);
  const int n = 16, k = 3;
  Matrix a = gaussian_matrix(n, k, gen);
  StructuralBuffer w = random_buffer(n, 0.3, gen);

  StiefelSolveOptions base;
  base.tol = 1e-14;
  base.max_iters = 5000;
  StiefelSolveOptions shifted = base;
  shifted.extra_shift = 10.0;
  StiefelSolveResult r1 = solve_partition(a, 0.6, w, base);
  StiefelSolveResult r2 = solve_partition(a, 0.6, w, shifted);

  CHECK(r1.objective_trace.back() ==
        doctest::Approx(r2.objective_trace.back()).epsilon(1e-8));
  // same subspace and, with the linear term pinning signs, same matrix
  CHECK((r1.h * r1.h.transpose() - r2.h * r2.h.transpose()).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("objective value hand cases") {
  std::mt19937_64 gen(53);
  const int k = 3;
  Matrix h = random_orthonormal(10, k, gen);
  StructuralBuffer w(10, 1.0, 0.2);
  CHECK(objective_value(h, h, h, Matrix::Identity(k, k), 0.7, w) ==
        doctest::Approx(2.0 * k).epsilon(1e-12));

  // 4x2 dense-trace cross-check at lambda = 0
  Matrix hs = random_orthonormal(4, 2, gen);
  Matrix hp = random_orthonormal(4, 2, gen);
  Matrix ht = random_orthonormal(4, 2, gen);
  Matrix m = random_orthogonal(2, gen);
  double manual = 0.0;
  Matrix target = hp + ht * m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) manual += hs(i, j) * target(i, j);
  StructuralBuffer w4(4, 1.0, 0.2);
  CHECK(objective_value(hs, hp, ht, m, 0.0, w4) == doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("objective respects the global upper bound") {
  std::mt19937_64 gen(59);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 20, k = 3;
    Matrix hs = random_orthonormal(n, k, gen);
    Matrix hp = random_orthonormal(n, k, gen);
    Matrix ht = random_orthonormal(n, k, gen);
    Matrix m = random_orthogonal(k, gen);
    StructuralBuffer w = random_buffer(n, 0.3, gen);
    double lambda = 0.8;
    double v = objective_value(hs, hp, ht, m, lambda, w);
    CHECK(v <= 2.0 * k + lambda * w.frobenius_norm() + 1e-9);
  }
}
