#include "cmvc/fusion.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "cmvc/error.hpp"
#include "cmvc/log.hpp"
#include "cmvc/partition.hpp"

namespace cmvc {

namespace {

constexpr double kMonotoneSlack = 1e-9;
constexpr double kOrthoTol = 1e-8;

// W H over the sparse support plus alpha H; W symmetric with zero diagonal.
Matrix indicator_times(const StructuralBuffer& w, const Matrix& h, double alpha) {
  Matrix out = alpha * h;
  for (const auto& [key, sign] : w.entries()) {
    const double v = sign > 0 ? w.positive_weight() : -w.negative_weight();
    out.row(key.first) += v * h.row(key.second);
    out.row(key.second) += v * h.row(key.first);
  }
  return out;
}

double gershgorin_shift(const StructuralBuffer& w) {
  if (w.empty()) return 0.0;
  std::vector<double> row_sum(w.sample_count(), 0.0);
  for (const auto& [key, sign] : w.entries()) {
    const double v = sign > 0 ? w.positive_weight() : w.negative_weight();
    row_sum[key.first] += v;
    row_sum[key.second] += v;
  }
  double m = 0.0;
  for (double s : row_sum) m = std::max(m, s);
  return m;
}

Matrix canonical_columns(int n, int k) {
  return Matrix::Identity(n, n).leftCols(k);
}

double inner_objective(const Matrix& h, const Matrix& a, double lambda_tilde,
                       const StructuralBuffer& w) {
  double obj = (h.transpose() * a).trace();
  if (lambda_tilde != 0.0 && !w.empty()) {
    double quad = 0.0;
    for (const auto& [key, sign] : w.entries()) {
      const double v = sign > 0 ? w.positive_weight() : -w.negative_weight();
      quad += 2.0 * v * h.row(key.first).dot(h.row(key.second));
    }
    obj += lambda_tilde * quad;
  }
  return obj;
}

}  // namespace

Matrix similarity_matrix(const Matrix& h) {
  double norm2 = h.squaredNorm();
  if (norm2 <= 0) throw DataError("similarity_matrix: zero matrix");
  return (h * h.transpose()) / norm2;
}

double contrastive_loss(const Matrix& h, const StructuralBuffer& w) {
  if (w.sample_count() != h.rows())
    throw DataError("contrastive_loss: buffer size does not match partition rows");
  if (w.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [key, sign] : w.entries()) {
    const double v = sign > 0 ? w.positive_weight() : -w.negative_weight();
    sum += v * h.row(key.first).dot(h.row(key.second));
  }
  return 2.0 * sum / h.squaredNorm();
}

double contrastive_loss_batched(const Matrix& h, const StructuralBuffer& w, int b) {
  const int n = static_cast<int>(h.rows());
  if (b < 1 || b > n) throw ConfigError("batched loss: batch size must be in [1, n]");
  if (w.sample_count() != n)
    throw DataError("contrastive_loss_batched: buffer size does not match partition rows");
  if (w.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [key, sign] : w.entries()) {
    if (key.first / b != key.second / b) continue;  // crosses a batch edge
    const double v = sign > 0 ? w.positive_weight() : -w.negative_weight();
    sum += v * h.row(key.first).dot(h.row(key.second));
  }
  return 2.0 * sum / h.squaredNorm();
}

Matrix procrustes_factor(const Matrix& k) {
  if (!k.allFinite()) throw DataError("procrustes_factor: non-finite input");
  Eigen::BDCSVD<Matrix> svd(k, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Matrix solve_rotation(const Matrix& h_t, const Matrix& h_star) {
  if (h_t.cols() != h_star.cols() || h_t.rows() != h_star.rows())
    throw DataError("solve_rotation: shape mismatch");
  Matrix b = h_t.transpose() * h_star;
  if (!b.allFinite()) throw DataError("solve_rotation: non-finite input");
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

StiefelSolveResult solve_partition(const Matrix& a, double lambda_tilde,
                                   const StructuralBuffer& w, const StiefelSolveOptions& opts,
                                   const Matrix* h_init) {
  if (lambda_tilde < 0) throw ConfigError("solve_partition: lambda must be >= 0");
  if (!a.allFinite()) throw DataError("solve_partition: non-finite A");
  if (w.sample_count() != a.rows() && !(w.empty() && w.sample_count() == 0))
    throw DataError("solve_partition: buffer size does not match A rows");

  StiefelSolveResult res;
  if (h_init) {
    res.h = *h_init;
  } else if (a.cwiseAbs().maxCoeff() > 0) {
    res.h = procrustes_factor(a);
  } else {
    res.h = canonical_columns(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  }

  const double alpha = gershgorin_shift(w) + opts.extra_shift;
  const bool quadratic = lambda_tilde != 0.0 && (!w.empty() || alpha != 0.0);

  double obj = inner_objective(res.h, a, lambda_tilde, w);
  res.objective_trace.push_back(obj);
  for (int it = 0; it < opts.max_iters; ++it) {
    Matrix k = quadratic ? Matrix(2.0 * lambda_tilde * indicator_times(w, res.h, alpha) + a)
                         : a;
    if (k.cwiseAbs().maxCoeff() == 0.0) {
      res.converged = true;  // nothing to maximize; keep the iterate
      break;
    }
    Matrix h_next = procrustes_factor(k);
    double obj_next = inner_objective(h_next, a, lambda_tilde, w);
    res.h = std::move(h_next);
    res.objective_trace.push_back(obj_next);
    ++res.iterations;
    if (obj_next < obj - kMonotoneSlack)
      throw InvariantError("solve_partition: objective decreased by " +
                           std::to_string(obj - obj_next));
    double denom = std::max(std::abs(obj_next), 1e-12);
    if (std::abs(obj_next - obj) / denom <= opts.tol) {
      obj = obj_next;
      res.converged = true;
      break;
    }
    obj = obj_next;
  }
  if (!res.converged)
    log::warn("solve_partition: not converged after %d iterations", res.iterations);
  require_orthonormal(res.h, kOrthoTol, "solve_partition");
  return res;
}

double objective_value(const Matrix& h_star, const Matrix& h_prev, const Matrix& h_t,
                       const Matrix& m, double lambda, const StructuralBuffer& w) {
  double fusion = (h_star.transpose() * (h_prev + h_t * m)).trace();
  if (lambda == 0.0 || w.empty()) return fusion;
  return fusion + lambda * contrastive_loss(h_star, w);
}

FuseTrace fuse_view(FusionState& state, const Matrix& h_t, const FuseOptions& opts) {
  const int k = static_cast<int>(h_t.cols());
  require_orthonormal(h_t, kOrthoTol, "fuse_view: incoming partition");
  if (opts.lambda < 0) throw ConfigError("fuse_view: lambda must be >= 0");
  if (opts.eps0 <= 0) throw ConfigError("fuse_view: eps0 must be > 0");

  if (state.views_fused == 0 && state.consensus.size() == 0) {
    state.consensus = h_t;  // H*_0 = H_1
  }
  if (state.consensus.rows() != h_t.rows() || state.consensus.cols() != h_t.cols())
    throw DataError("fuse_view: consensus/view shape mismatch");
  if (state.buffer.sample_count() != h_t.rows())
    throw DataError("fuse_view: buffer size does not match view");

  const Matrix h_prev = state.consensus;
  Matrix h_star = state.consensus;
  Matrix rot = Matrix::Identity(k, k);
  const double lambda_tilde = opts.lambda / static_cast<double>(k);

  // batched approximation: optimize against the intra-batch restriction
  const StructuralBuffer working =
      opts.batch_size > 0 ? restrict_to_batches(state.buffer, opts.batch_size) : state.buffer;

  FuseTrace trace;
  trace.bound = 2.0 * k + opts.lambda * working.frobenius_norm();
  auto record = [&](double obj) {
    trace.objective.push_back(obj);
    trace.contrastive.push_back(opts.lambda == 0.0 || working.empty()
                                    ? 0.0
                                    : opts.lambda * contrastive_loss(h_star, working));
  };

  double obj = objective_value(h_star, h_prev, h_t, rot, opts.lambda, working);
  record(obj);
  for (int it = 0; it < opts.max_outer_iters; ++it) {
    Matrix a = h_prev + h_t * rot;
    StiefelSolveResult sub = solve_partition(a, lambda_tilde, working, opts.inner, &h_star);
    h_star = std::move(sub.h);
    rot = solve_rotation(h_t, h_star);

    double obj_next = objective_value(h_star, h_prev, h_t, rot, opts.lambda, working);
    record(obj_next);
    ++trace.iterations;
    if (obj_next < obj - kMonotoneSlack)
      throw InvariantError("fuse_view: objective decreased from " + std::to_string(obj) +
                           " to " + std::to_string(obj_next));
    double denom = std::max(std::abs(obj_next), 1e-12);
    if (std::abs(obj_next - obj) / denom <= opts.eps0) {
      obj = obj_next;
      trace.converged = true;
      break;
    }
    obj = obj_next;
  }
  if (!trace.converged)
    log::warn("fuse_view: view %d not converged after %d outer iterations",
              state.views_fused + 1, trace.iterations);

  require_orthonormal(h_star, kOrthoTol, "fuse_view: consensus");
  require_orthonormal(rot, 1e-10, "fuse_view: rotation");
  state.consensus = std::move(h_star);
  state.views_fused += 1;
  state.history.push_back(trace);
  return trace;
}

}  // namespace cmvc
