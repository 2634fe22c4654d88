#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cmvc/rng.hpp"
#include "cmvc/structural_buffer.hpp"

namespace cmvc {

// C = H H^T / ||H||_F^2. Dense; for tests and small n only.
Matrix similarity_matrix(const Matrix& h);

// Tr(C W) evaluated over the sparse support of W.
double contrastive_loss(const Matrix& h, const StructuralBuffer& w);

// Tr(C W) restricted to pairs inside the same contiguous batch of size b.
// Equals contrastive_loss when b = n or when no pair crosses a batch edge.
double contrastive_loss_batched(const Matrix& h, const StructuralBuffer& w, int b);

// Orthonormal polar factor U V^T of the thin SVD.
Matrix procrustes_factor(const Matrix& k);

// argmax_M Tr(M^T B), B = H_t^T H_star: M = U V^T from the SVD of B,
// attaining the nuclear norm of B.
Matrix solve_rotation(const Matrix& h_t, const Matrix& h_star);

struct StiefelSolveOptions {
  double tol = 1e-8;
  int max_iters = 100;
  double extra_shift = 0.0;  // added to the Gershgorin shift (diagnostics)
};

struct StiefelSolveResult {
  Matrix h;
  std::vector<double> objective_trace;  // Tr(H^T A) + lt Tr(H H^T W), unshifted
  int iterations = 0;
  bool converged = false;
};

// max_H Tr(H^T A) + lt Tr(H H^T W) over H^T H = I via power iteration with
// SVD retraction: K = 2 lt (W + alpha I) H + A, H <- U V^T. The shift
// alpha = max_i sum_j |W_ij| makes the quadratic part positive semidefinite,
// so the trace is non-decreasing. Warm-startable through h_init.
StiefelSolveResult solve_partition(const Matrix& a, double lambda_tilde,
                                   const StructuralBuffer& w,
                                   const StiefelSolveOptions& opts = {},
                                   const Matrix* h_init = nullptr);

// Tr(H*^T (H_prev + H_t M)) + lambda Tr(C W), C from similarity_matrix(H*).
double objective_value(const Matrix& h_star, const Matrix& h_prev, const Matrix& h_t,
                       const Matrix& m, double lambda, const StructuralBuffer& w);

struct FuseTrace {
  std::vector<double> objective;    // index 0 = state before the first sweep
  std::vector<double> contrastive;  // lambda * Tr(C W) component per entry
  double bound = 0.0;               // 2k + lambda ||W||_F at fuse time
  int iterations = 0;
  bool converged = false;
};

struct FuseOptions {
  double lambda = 0.5;
  double eps0 = 1e-4;
  int max_outer_iters = 200;
  int batch_size = 0;  // > 0 optimizes against the intra-batch pair restriction
  StiefelSolveOptions inner;
};

// Running state of the continual loop: consensus so far, merged structure,
// number of views fused, per-view traces.
struct FusionState {
  Matrix consensus;
  StructuralBuffer buffer;
  int views_fused = 0;
  std::vector<FuseTrace> history;
};

// One view of the alternating loop: warm-started partition solves against
// A = H*_{t-1} + H_t M, closed-form rotation updates, stop when the relative
// objective change drops below eps0. The caller merges the view's pairs into
// state.buffer first. Throws InvariantError if the trace decreases by more
// than 1e-9.
FuseTrace fuse_view(FusionState& state, const Matrix& h_t, const FuseOptions& opts);

}  // namespace cmvc
