#include "dnhb/gradient_check.hpp"

#include <cmath>
#include <string>

#include "dnhb/errors.hpp"

namespace dnhb {

std::vector<double> finite_diff_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& params, double step) {
  if (!(step > 0.0))
    throw NumericError("finite_diff_gradient: step must be positive, got " +
                       std::to_string(step));
  std::vector<double> grad(params.size(), 0.0);
  std::vector<double> point = params;
  for (std::size_t i = 0; i < params.size(); ++i) {
    point[i] = params[i] + step;
    const double plus = f(point);
    point[i] = params[i] - step;
    const double minus = f(point);
    point[i] = params[i];
    if (!std::isfinite(plus) || !std::isfinite(minus))
      throw NumericError(
          "finite_diff_gradient: non-finite function value at coordinate " +
          std::to_string(i));
    grad[i] = (plus - minus) / (2.0 * step);
  }
  return grad;
}

double max_relative_error(const std::vector<double>& a,
                          const std::vector<double>& b) {
  if (a.size() != b.size())
    throw ShapeError("max_relative_error: length mismatch " +
                     std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  // Relative above unit magnitude, absolute below.
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

}  // namespace dnhb
