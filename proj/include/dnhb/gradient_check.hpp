#ifndef DNHB_GRADIENT_CHECK_HPP
#define DNHB_GRADIENT_CHECK_HPP

#include <functional>
#include <vector>

namespace dnhb {

// Central-difference gradient of a scalar function of a real parameter
// vector: g_i = (f(p + h e_i) - f(p - h e_i)) / (2h). This is the oracle
// every analytic gradient in the library is verified against. Throws
// NumericError if f returns a non-finite value or step <= 0.
std::vector<double> finite_diff_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& params, double step);

// max_i |a_i - b_i| / max(1, |a_i|, |b_i|) over two gradient vectors.
double max_relative_error(const std::vector<double>& a,
                          const std::vector<double>& b);

}  // namespace dnhb

#endif  // DNHB_GRADIENT_CHECK_HPP
