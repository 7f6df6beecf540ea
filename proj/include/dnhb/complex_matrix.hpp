#ifndef DNHB_COMPLEX_MATRIX_HPP
#define DNHB_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace dnhb {

// Dense complex matrix stored as two row-major real planes (re, im).
// All layer math in this library works on the planes directly, so the
// storage convention and the network math share one representation.
// Values are immutable by convention once an operation has produced them;
// sharing across threads is safe as long as no thread writes.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), re_(rows * cols, 0.0), im_(rows * cols, 0.0) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return rows_ * cols_; }

  double& re(std::size_t i, std::size_t j) { return re_[i * cols_ + j]; }
  double re(std::size_t i, std::size_t j) const { return re_[i * cols_ + j]; }
  double& im(std::size_t i, std::size_t j) { return im_[i * cols_ + j]; }
  double im(std::size_t i, std::size_t j) const { return im_[i * cols_ + j]; }

  std::complex<double> at(std::size_t i, std::size_t j) const {
    return {re_[i * cols_ + j], im_[i * cols_ + j]};
  }
  void set(std::size_t i, std::size_t j, std::complex<double> v) {
    re_[i * cols_ + j] = v.real();
    im_[i * cols_ + j] = v.imag();
  }

  std::vector<double>& re_data() { return re_; }
  const std::vector<double>& re_data() const { return re_; }
  std::vector<double>& im_data() { return im_; }
  const std::vector<double>& im_data() const { return im_; }

  bool same_shape(const ComplexMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;

  // |entry|^2 summed over column j.
  double col_norm_sq(std::size_t j) const;

  ComplexMatrix column(std::size_t j) const;
  void set_column(std::size_t j, const ComplexMatrix& col);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> re_;
  std::vector<double> im_;
};

// Complex matrix product, re/im planes assembled from the real-pair expansion
// (W_re + jW_im)(x_re + jx_im). Throws ShapeError naming both shapes on a
// dimension mismatch.
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return multiply(a, b);
}

// Conjugate transpose.
ComplexMatrix hermitian(const ComplexMatrix& a);

// Plain transpose (no conjugation).
ComplexMatrix transpose(const ComplexMatrix& a);

// sum_ij |a(i,j)|^2
double frobenius_norm_sq(const ComplexMatrix& a);

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  return add(a, b);
}
inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  return subtract(a, b);
}

ComplexMatrix scale(const ComplexMatrix& a, double factor);
ComplexMatrix scale(const ComplexMatrix& a, std::complex<double> factor);

// max_ij |a(i,j) - b(i,j)|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

std::string shape_string(const ComplexMatrix& a);

}  // namespace dnhb

#endif  // DNHB_COMPLEX_MATRIX_HPP
