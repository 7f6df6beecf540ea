#ifndef DNHB_LINALG_HPP
#define DNHB_LINALG_HPP

#include <vector>

#include "dnhb/complex_matrix.hpp"

namespace dnhb::linalg {

// Decomposition kit for the classical baselines (block diagonalization and
// OMP). Matrices here are small (tens of rows), so the implementations favor
// accuracy and simplicity: Householder QR and one-sided Jacobi SVD.

struct Qr {
  ComplexMatrix q;  // m x m unitary
  ComplexMatrix r;  // m x n upper triangular
};

// Full Householder QR, a = q * r.
Qr householder_qr(const ComplexMatrix& a);

// Orthonormal basis of the right null space {x : a x = 0} of a wide
// full-row-rank matrix (rows < cols), via QR of a^H. Returns cols - rows
// columns; throws NumericError if a is (numerically) row-rank deficient.
ComplexMatrix null_space(const ComplexMatrix& a);

struct Svd {
  ComplexMatrix u;                     // m x min(m,n), zero columns past rank
  std::vector<double> singular_values; // descending, length min(m,n)
  ComplexMatrix v;                     // n x min(m,n)
};

// One-sided Jacobi SVD, a = u * diag(s) * v^H.
Svd svd(const ComplexMatrix& a);

// Least squares min ||a x - b||_F for a tall full-column-rank a, via QR.
// When a is column-rank deficient, falls back to the ridge-regularized
// normal equations (a^H a + ridge I) x = a^H b and sets *ridge_used.
ComplexMatrix least_squares(const ComplexMatrix& a, const ComplexMatrix& b,
                            double ridge, bool* ridge_used);

// Gaussian elimination with partial pivoting; throws NumericError on a
// (numerically) singular system.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

// Moore-Penrose pseudo-inverse via the Jacobi SVD; singular values below
// tol * s_max are treated as zero.
ComplexMatrix pseudo_inverse(const ComplexMatrix& a, double tol = 1e-12);

}  // namespace dnhb::linalg

#endif  // DNHB_LINALG_HPP
