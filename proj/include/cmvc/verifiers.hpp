#pragma once

#include <cstdint>
#include <string>

namespace cmvc {

// Monte-Carlo / oracle checks behind the `verify` CLI subcommand.
struct VerifyResult {
  bool pass = false;
  std::string detail;
};

// |Tr(C W)| <= ||W||_F on random (H, W), and the sparse loss equals the dense
// trace within tol.
VerifyResult verify_cs_bound(int instances, int max_n, double tol, std::uint64_t seed);

// Tr(M^T B) equals the singular value sum within tol and dominates
// q_samples random orthogonal rotations per instance.
VerifyResult verify_procrustes(int instances, int max_k, int q_samples, double tol,
                               std::uint64_t seed);

// Runs `streams` random synthetic streams through the continual loop and
// checks the traces: non-decreasing within slack, objective under
// 2k + lambda ||W||_F + slack, converged within the iteration budget.
VerifyResult verify_monotone_streams(int streams, int max_outer, double lambda,
                                     std::uint64_t seed);

}  // namespace cmvc
