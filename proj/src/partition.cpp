#include "cmvc/partition.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "cmvc/error.hpp"

namespace cmvc {

double orthonormality_error(const Matrix& h) {
  const int k = static_cast<int>(h.cols());
  Matrix g = h.transpose() * h - Matrix::Identity(k, k);
  return g.cwiseAbs().maxCoeff();
}

void require_orthonormal(const Matrix& h, double tol, const char* what) {
  double err = orthonormality_error(h);
  if (!(err <= tol))
    throw InvariantError(std::string(what) + ": orthonormality defect " + std::to_string(err) +
                         " exceeds " + std::to_string(tol));
}

void canonicalize_column_signs(Matrix& h) {
  for (int j = 0; j < h.cols(); ++j) {
    int arg = 0;
    double best = std::abs(h(0, j));
    for (int i = 1; i < h.rows(); ++i) {
      double a = std::abs(h(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (h(arg, j) < 0) h.col(j) = -h.col(j);
  }
}

Matrix extract_partition(const Matrix& data, int k, int kernel_eigen_max_n) {
  const int n = static_cast<int>(data.rows());
  const int d = static_cast<int>(data.cols());
  if (k > n) throw DataError("extract_partition: k > n");
  if (k < 1) throw DataError("extract_partition: k must be >= 1");
  if (!data.allFinite()) throw DataError("extract_partition: non-finite entries in view data");

  Matrix xn = data;
  bool any_nonzero = false;
  for (int i = 0; i < n; ++i) {
    double norm = xn.row(i).norm();
    if (norm > 0) {
      xn.row(i) /= norm;
      any_nonzero = true;
    }
  }
  if (!any_nonzero) throw DataError("extract_partition: all-zero data matrix");

  Matrix h(n, k);
  if (n <= kernel_eigen_max_n || d < k) {
    if (n > kernel_eigen_max_n)
      throw DataError("extract_partition: n > " + std::to_string(kernel_eigen_max_n) +
                      " requires feature dimension >= k");
    Matrix s = xn * xn.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
    if (eig.info() != Eigen::Success)
      throw DataError("extract_partition: eigendecomposition failed");
    // eigenvalues ascend; take the top k in descending order
    for (int j = 0; j < k; ++j) h.col(j) = eig.eigenvectors().col(n - 1 - j);
  } else {
    Eigen::BDCSVD<Matrix> svd(xn, Eigen::ComputeThinU);
    h = svd.matrixU().leftCols(k);  // singular values descend
  }
  canonicalize_column_signs(h);
  return h;
}

}  // namespace cmvc
