#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

namespace cmvc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// splitmix64 finalizer; used to derive independent substreams from one seed
// so that per-sample / per-restart work is schedule-independent.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base ^ mix64(stream));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix64(derive_seed(base, a) ^ mix64(b + 0x51ed2701ULL));
}

// Stream tags for the independent substreams of one run.
namespace stream {
inline constexpr std::uint64_t kSynthView = 0x53594e54ULL;   // synthetic view data
inline constexpr std::uint64_t kPairKmeans = 0x504b4d53ULL;  // k-means inside pair selection
inline constexpr std::uint64_t kPairSample = 0x50534d50ULL;  // per-sample pair pools
inline constexpr std::uint64_t kEvalKmeans = 0x45564b4dULL;  // consensus metric repeats
inline constexpr std::uint64_t kEachKmeans = 0x45414348ULL;  // single-view metric repeats
}  // namespace stream

// Draws r distinct elements of `pool` (partial Fisher-Yates). If the pool has
// at most r elements the whole pool is returned and the generator is untouched.
inline std::vector<int> sample_without_replacement(std::vector<int> pool, int r,
                                                   std::mt19937_64& gen) {
  const int n = static_cast<int>(pool.size());
  if (r >= n) return pool;
  for (int i = 0; i < r; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(pool[i], pool[pick(gen)]);
  }
  pool.resize(r);
  return pool;
}

inline Matrix gaussian_matrix(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = g(gen);
  return m;
}

// Orthonormal n x k matrix from the QR of a Gaussian draw, with the R-diagonal
// sign fix that makes the distribution Haar.
inline Matrix random_orthonormal(int n, int k, std::mt19937_64& gen) {
  Matrix g = gaussian_matrix(n, k, gen);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, k);
  Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

inline Matrix random_orthogonal(int k, std::mt19937_64& gen) {
  return random_orthonormal(k, k, gen);
}

}  // namespace cmvc
