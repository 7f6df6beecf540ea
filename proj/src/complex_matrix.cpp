#include "dnhb/complex_matrix.hpp"

#include <cmath>
#include <string>

#include "dnhb/errors.hpp"

namespace dnhb {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.re(i, i) = 1.0;
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (double v : re_)
    if (!std::isfinite(v)) return false;
  for (double v : im_)
    if (!std::isfinite(v)) return false;
  return true;
}

double ComplexMatrix::col_norm_sq(std::size_t j) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    const double r = re_[i * cols_ + j];
    const double m = im_[i * cols_ + j];
    acc += r * r + m * m;
  }
  return acc;
}

ComplexMatrix ComplexMatrix::column(std::size_t j) const {
  ComplexMatrix c(rows_, 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    c.re(i, 0) = re_[i * cols_ + j];
    c.im(i, 0) = im_[i * cols_ + j];
  }
  return c;
}

void ComplexMatrix::set_column(std::size_t j, const ComplexMatrix& col) {
  if (col.rows() != rows_ || col.cols() != 1)
    throw ShapeError("set_column: expected " + std::to_string(rows_) +
                     "x1 column, got " + shape_string(col));
  for (std::size_t i = 0; i < rows_; ++i) {
    re_[i * cols_ + j] = col.re(i, 0);
    im_[i * cols_ + j] = col.im(i, 0);
  }
}

std::string shape_string(const ComplexMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("multiply: cannot multiply " + shape_string(a) + " by " +
                     shape_string(b));
  ComplexMatrix out(a.rows(), b.cols());
  const std::size_t n = a.rows(), k_dim = a.cols(), m = b.cols();
  const double* are = a.re_data().data();
  const double* aim = a.im_data().data();
  const double* bre = b.re_data().data();
  const double* bim = b.im_data().data();
  double* ore = out.re_data().data();
  double* oim = out.im_data().data();
  // i-k-j loop order keeps the inner access contiguous in b and out.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < k_dim; ++k) {
      const double ar = are[i * k_dim + k];
      const double ai = aim[i * k_dim + k];
      const double* br = bre + k * m;
      const double* bi = bim + k * m;
      double* orow = ore + i * m;
      double* oirow = oim + i * m;
      for (std::size_t j = 0; j < m; ++j) {
        orow[j] += ar * br[j] - ai * bi[j];
        oirow[j] += ar * bi[j] + ai * br[j];
      }
    }
  }
  return out;
}

ComplexMatrix hermitian(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out.re(j, i) = a.re(i, j);
      out.im(j, i) = -a.im(i, j);
    }
  return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out.re(j, i) = a.re(i, j);
      out.im(j, i) = a.im(i, j);
    }
  return out;
}

double frobenius_norm_sq(const ComplexMatrix& a) {
  double acc = 0.0;
  for (double v : a.re_data()) acc += v * v;
  for (double v : a.im_data()) acc += v * v;
  return acc;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b))
    throw ShapeError("add: shape mismatch " + shape_string(a) + " vs " +
                     shape_string(b));
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.re_data()[i] = a.re_data()[i] + b.re_data()[i];
    out.im_data()[i] = a.im_data()[i] + b.im_data()[i];
  }
  return out;
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b))
    throw ShapeError("subtract: shape mismatch " + shape_string(a) + " vs " +
                     shape_string(b));
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.re_data()[i] = a.re_data()[i] - b.re_data()[i];
    out.im_data()[i] = a.im_data()[i] - b.im_data()[i];
  }
  return out;
}

ComplexMatrix scale(const ComplexMatrix& a, double factor) {
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.re_data()[i] = a.re_data()[i] * factor;
    out.im_data()[i] = a.im_data()[i] * factor;
  }
  return out;
}

ComplexMatrix scale(const ComplexMatrix& a, std::complex<double> factor) {
  ComplexMatrix out(a.rows(), a.cols());
  const double fr = factor.real(), fi = factor.imag();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = a.re_data()[i];
    const double m = a.im_data()[i];
    out.re_data()[i] = r * fr - m * fi;
    out.im_data()[i] = r * fi + m * fr;
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b))
    throw ShapeError("max_abs_diff: shape mismatch " + shape_string(a) +
                     " vs " + shape_string(b));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a.at(i, j) - b.at(i, j)));
  return worst;
}

}  // namespace dnhb
