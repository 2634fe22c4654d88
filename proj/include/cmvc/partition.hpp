#pragma once

#include "cmvc/csv.hpp"
#include "cmvc/rng.hpp"

namespace cmvc {

// max |(H^T H - I)_{ij}|
double orthonormality_error(const Matrix& h);

// Throws InvariantError when the orthonormality defect exceeds tol.
void require_orthonormal(const Matrix& h, double tol, const char* what);

// Flips each column so its largest-magnitude entry is positive
// (first occurrence wins on ties).
void canonicalize_column_signs(Matrix& h);

// Soft partition matrix of one view: top-k eigenvectors of the linear-kernel
// similarity of the row-normalized data, columns ordered by descending
// eigenvalue, signs canonicalized. Zero rows stay zero under normalization.
// Uses the n x n symmetric eigensolver up to kernel_eigen_max_n samples and
// the SVD of the normalized data beyond that (same spectrum).
Matrix extract_partition(const Matrix& data, int k, int kernel_eigen_max_n = 5000);

inline Matrix extract_partition(const ViewMatrix& view, int k) {
  return extract_partition(view.data, k);
}

}  // namespace cmvc
