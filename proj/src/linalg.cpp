#include "dnhb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "dnhb/errors.hpp"

namespace dnhb::linalg {

namespace {

using cd = std::complex<double>;

// Householder vectors of the factorization; reflector k lives on rows k..m-1.
struct Reflectors {
  std::vector<std::vector<cd>> v;
};

// Reduces a to upper triangular in place, returning the reflectors.
Reflectors householder_reduce(ComplexMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t steps = std::min(m, n);
  Reflectors refl;
  refl.v.resize(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    double norm_sq = 0.0;
    for (std::size_t i = k; i < m; ++i) norm_sq += std::norm(a.at(i, k));
    const double norm = std::sqrt(norm_sq);
    if (norm == 0.0) continue;
    const cd pivot = a.at(k, k);
    const cd phase =
        (std::abs(pivot) == 0.0) ? cd(1.0, 0.0) : pivot / std::abs(pivot);
    std::vector<cd> v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = a.at(i, k);
    v[0] += phase * norm;
    double v_norm_sq = 0.0;
    for (const cd& x : v) v_norm_sq += std::norm(x);
    if (v_norm_sq == 0.0) continue;
    const double inv_vnorm = 1.0 / std::sqrt(v_norm_sq);
    for (cd& x : v) x *= inv_vnorm;
    // a[k:, k:] -= 2 v (v^H a[k:, k:])
    for (std::size_t j = k; j < n; ++j) {
      cd dot = 0.0;
      for (std::size_t i = k; i < m; ++i)
        dot += std::conj(v[i - k]) * a.at(i, j);
      dot *= 2.0;
      for (std::size_t i = k; i < m; ++i)
        a.set(i, j, a.at(i, j) - dot * v[i - k]);
    }
    refl.v[k] = std::move(v);
  }
  return refl;
}

// q = H_0 H_1 ... H_{steps-1}, assembled by applying reflectors to identity.
ComplexMatrix assemble_q(const Reflectors& refl, std::size_t m) {
  ComplexMatrix q = ComplexMatrix::identity(m);
  for (std::size_t k = refl.v.size(); k-- > 0;) {
    const auto& v = refl.v[k];
    if (v.empty()) continue;
    for (std::size_t j = 0; j < m; ++j) {
      cd dot = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i)
        dot += std::conj(v[i]) * q.at(k + i, j);
      dot *= 2.0;
      for (std::size_t i = 0; i < v.size(); ++i)
        q.set(k + i, j, q.at(k + i, j) - dot * v[i]);
    }
  }
  return q;
}

}  // namespace

Qr householder_qr(const ComplexMatrix& a) {
  ComplexMatrix r = a;
  const Reflectors refl = householder_reduce(r);
  // Clear the negligible subdiagonal fill left by the reduction.
  for (std::size_t j = 0; j < r.cols(); ++j)
    for (std::size_t i = j + 1; i < r.rows(); ++i) r.set(i, j, 0.0);
  return {assemble_q(refl, a.rows()), std::move(r)};
}

ComplexMatrix null_space(const ComplexMatrix& a) {
  if (a.rows() >= a.cols())
    throw ShapeError("null_space: expected a wide matrix, got " +
                     shape_string(a));
  const Qr qr = householder_qr(hermitian(a));  // (cols x rows), tall
  const std::size_t n = a.cols(), p = a.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    max_diag = std::max(max_diag, std::abs(qr.r.at(i, i)));
  for (std::size_t i = 0; i < p; ++i)
    if (std::abs(qr.r.at(i, i)) < 1e-12 * std::max(1.0, max_diag))
      throw NumericError("null_space: matrix is row-rank deficient");
  ComplexMatrix basis(n, n - p);
  for (std::size_t j = 0; j < n - p; ++j)
    for (std::size_t i = 0; i < n; ++i) basis.set(i, j, qr.q.at(i, p + j));
  return basis;
}

Svd svd(const ComplexMatrix& a) {
  if (a.rows() < a.cols()) {
    Svd t = svd(hermitian(a));
    return {std::move(t.v), std::move(t.singular_values), std::move(t.u)};
  }
  const std::size_t m = a.rows(), n = a.cols();
  ComplexMatrix work = a;
  ComplexMatrix v = ComplexMatrix::identity(n);

  // One-sided Jacobi: rotate column pairs until all are mutually orthogonal.
  const double tol = 1e-14;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool converged = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double aii = 0.0, ajj = 0.0;
        cd aij = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          const cd ci = work.at(r, i), cj = work.at(r, j);
          aii += std::norm(ci);
          ajj += std::norm(cj);
          aij += std::conj(ci) * cj;
        }
        const double off = std::abs(aij);
        if (off == 0.0 || off <= tol * std::sqrt(aii * ajj)) continue;
        converged = false;
        // Unitary 2x2 zeroing the (i,j) Gram entry: columns become
        // ci' = c*ci - conj(s)*cj, cj' = s*ci + c*cj with s = c*t*phase,
        // where t is the small-magnitude root of t^2 - 2*zeta*t - 1 = 0.
        const double zeta = (aii - ajj) / (2.0 * off);
        const double t_val = (zeta >= 0.0 ? -1.0 : 1.0) /
                             (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t_val * t_val);
        const cd phase = aij / off;
        const cd s = c * t_val * phase;
        for (std::size_t r = 0; r < m; ++r) {
          const cd ci = work.at(r, i), cj = work.at(r, j);
          work.set(r, i, c * ci - std::conj(s) * cj);
          work.set(r, j, s * ci + c * cj);
        }
        for (std::size_t r = 0; r < n; ++r) {
          const cd vi = v.at(r, i), vj = v.at(r, j);
          v.set(r, i, c * vi - std::conj(s) * vj);
          v.set(r, j, s * vi + c * vj);
        }
      }
    }
    if (converged) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(work.col_norm_sq(j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Svd out;
  out.u = ComplexMatrix(m, n);
  out.v = ComplexMatrix(n, n);
  out.singular_values.resize(n);
  const double s_max = n == 0 ? 0.0 : sigma[order[0]];
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::size_t j = order[idx];
    out.singular_values[idx] = sigma[j];
    for (std::size_t r = 0; r < n; ++r) out.v.set(r, idx, v.at(r, j));
    if (sigma[j] > 0.0 && sigma[j] > 1e-15 * s_max) {
      const double inv = 1.0 / sigma[j];
      for (std::size_t r = 0; r < m; ++r)
        out.u.set(r, idx, work.at(r, j) * inv);
    }
  }
  return out;
}

ComplexMatrix least_squares(const ComplexMatrix& a, const ComplexMatrix& b,
                            double ridge, bool* ridge_used) {
  if (a.rows() != b.rows())
    throw ShapeError("least_squares: a " + shape_string(a) + " vs b " +
                     shape_string(b));
  if (a.rows() < a.cols())
    throw ShapeError("least_squares: system is underdetermined, a is " +
                     shape_string(a));
  if (ridge_used) *ridge_used = false;
  const Qr qr = householder_qr(a);
  const std::size_t n = a.cols();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    max_diag = std::max(max_diag, std::abs(qr.r.at(i, i)));
  bool deficient = (max_diag == 0.0);
  for (std::size_t i = 0; i < n && !deficient; ++i)
    if (std::abs(qr.r.at(i, i)) < 1e-10 * max_diag) deficient = true;

  if (deficient) {
    if (ridge_used) *ridge_used = true;
    const ComplexMatrix ah = hermitian(a);
    ComplexMatrix gram = multiply(ah, a);
    for (std::size_t i = 0; i < n; ++i) gram.re(i, i) += ridge;
    return solve(gram, multiply(ah, b));
  }

  // x = R^-1 (Q^H b), back substitution on the leading n rows.
  const ComplexMatrix qhb = multiply(hermitian(qr.q), b);
  ComplexMatrix x(n, b.cols());
  for (std::size_t col = 0; col < b.cols(); ++col)
    for (std::size_t i = n; i-- > 0;) {
      cd acc = qhb.at(i, col);
      for (std::size_t j = i + 1; j < n; ++j)
        acc -= qr.r.at(i, j) * x.at(j, col);
      x.set(i, col, acc / qr.r.at(i, i));
    }
  return x;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols())
    throw ShapeError("solve: matrix must be square, got " + shape_string(a));
  if (a.rows() != b.rows())
    throw ShapeError("solve: a " + shape_string(a) + " vs b " +
                     shape_string(b));
  const std::size_t n = a.rows();
  ComplexMatrix lu = a;
  ComplexMatrix x = b;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      scale = std::max(scale, std::abs(lu.at(i, j)));
  const double pivot_floor = 1e-14 * std::max(1.0, scale);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot_row = k;
    double pivot_mag = std::abs(lu.at(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu.at(i, k)) > pivot_mag) {
        pivot_mag = std::abs(lu.at(i, k));
        pivot_row = i;
      }
    if (pivot_mag < pivot_floor)
      throw NumericError("solve: singular system at pivot " +
                         std::to_string(k));
    if (pivot_row != k) {
      for (std::size_t j = 0; j < n; ++j) {
        const cd tmp = lu.at(k, j);
        lu.set(k, j, lu.at(pivot_row, j));
        lu.set(pivot_row, j, tmp);
      }
      for (std::size_t j = 0; j < x.cols(); ++j) {
        const cd tmp = x.at(k, j);
        x.set(k, j, x.at(pivot_row, j));
        x.set(pivot_row, j, tmp);
      }
    }
    const cd pivot = lu.at(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cd factor = lu.at(i, k) / pivot;
      if (factor == cd(0.0, 0.0)) continue;
      for (std::size_t j = k; j < n; ++j)
        lu.set(i, j, lu.at(i, j) - factor * lu.at(k, j));
      for (std::size_t j = 0; j < x.cols(); ++j)
        x.set(i, j, x.at(i, j) - factor * x.at(k, j));
    }
  }
  for (std::size_t col = 0; col < x.cols(); ++col)
    for (std::size_t i = n; i-- > 0;) {
      cd acc = x.at(i, col);
      for (std::size_t j = i + 1; j < n; ++j)
        acc -= lu.at(i, j) * x.at(j, col);
      x.set(i, col, acc / lu.at(i, i));
    }
  return x;
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& a, double tol) {
  const Svd decomp = svd(a);
  const double cutoff =
      tol * (decomp.singular_values.empty() ? 1.0 : decomp.singular_values[0]);
  // a^+ = v diag(1/s) u^H over the significant singular values.
  ComplexMatrix scaled_v = decomp.v;
  for (std::size_t j = 0; j < decomp.singular_values.size(); ++j) {
    const double s = decomp.singular_values[j];
    const double inv = (s > cutoff && s > 0.0) ? 1.0 / s : 0.0;
    for (std::size_t i = 0; i < scaled_v.rows(); ++i) {
      scaled_v.re(i, j) *= inv;
      scaled_v.im(i, j) *= inv;
    }
  }
  return multiply(scaled_v, hermitian(decomp.u));
}

}  // namespace dnhb::linalg
