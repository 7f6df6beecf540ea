#include <doctest.h>

#include <cmath>

#include "dnhb/complex_matrix.hpp"
#include "dnhb/errors.hpp"
#include "dnhb/gradient_check.hpp"
#include "dnhb/rng.hpp"
#include "oracles.hpp"

using namespace dnhb;

namespace {

ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  return randn_complex(rng, rows, cols, 1.0);
}

}  // namespace

TEST_CASE("multiply: identity leaves a matrix unchanged") {
  Rng rng(7);
  const ComplexMatrix b = random_matrix(rng, 2, 2);
  const ComplexMatrix out = multiply(ComplexMatrix::identity(2), b);
  CHECK(max_abs_diff(out, b) == 0.0);
}

TEST_CASE("multiply: j * j = -1") {
  ComplexMatrix a(1, 1), b(1, 1);
  a.set(0, 0, {0.0, 1.0});
  b.set(0, 0, {0.0, 1.0});
  const ComplexMatrix out = multiply(a, b);
  CHECK(out.re(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(out.im(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("multiply: random product matches the loop oracle") {
  Rng rng(11);
  const ComplexMatrix a = random_matrix(rng, 3, 4);
  const ComplexMatrix b = random_matrix(rng, 4, 2);
  CHECK(max_abs_diff(multiply(a, b), oracle::naive_matmul(a, b)) < 1e-12);
}

TEST_CASE("multiply: shape error names both shapes") {
  const ComplexMatrix a(3, 4), b(5, 2);
  try {
    multiply(a, b);
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("3x4") != std::string::npos);
    CHECK(msg.find("5x2") != std::string::npos);
  }
}

TEST_CASE("hermitian: conjugate transpose of a scalar") {
  ComplexMatrix a(1, 1);
  a.set(0, 0, {1.0, 2.0});
  const ComplexMatrix h = hermitian(a);
  CHECK(h.re(0, 0) == 1.0);
  CHECK(h.im(0, 0) == -2.0);
}

TEST_CASE("hermitian: fixed point on a Hermitian matrix and involution") {
  Rng rng(3);
  const ComplexMatrix x = random_matrix(rng, 3, 3);
  const ComplexMatrix herm = scale(add(x, hermitian(x)), 0.5);
  CHECK(max_abs_diff(hermitian(herm), herm) < 1e-15);
  CHECK(max_abs_diff(hermitian(hermitian(x)), x) == 0.0);
}

TEST_CASE("hermitian: (AB)^H = B^H A^H") {
  Rng rng(5);
  const ComplexMatrix a = random_matrix(rng, 3, 4);
  const ComplexMatrix b = random_matrix(rng, 4, 3);
  CHECK(max_abs_diff(hermitian(multiply(a, b)),
                     multiply(hermitian(b), hermitian(a))) < 1e-12);
}

TEST_CASE("frobenius_norm_sq: zero, 3+4j and a random matrix") {
  CHECK(frobenius_norm_sq(ComplexMatrix(4, 5)) == 0.0);
  ComplexMatrix a(1, 1);
  a.set(0, 0, {3.0, 4.0});
  CHECK(frobenius_norm_sq(a) == doctest::Approx(25.0).epsilon(1e-15));
  Rng rng(13);
  const ComplexMatrix x = random_matrix(rng, 6, 3);
  CHECK(frobenius_norm_sq(x) ==
        doctest::Approx(oracle::naive_frobenius_sq(x)).epsilon(1e-12));
}

TEST_CASE("frobenius of a product agrees with the loop oracle") {
  Rng rng(17);
  const ComplexMatrix a = random_matrix(rng, 4, 6);
  const ComplexMatrix b = random_matrix(rng, 6, 5);
  const double got = frobenius_norm_sq(multiply(a, b));
  const double want = oracle::naive_frobenius_sq(oracle::naive_matmul(a, b));
  CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
}

TEST_CASE("randn_complex: mean power converges to the variance") {
  for (const double variance : {0.5, 1.0, 4.0}) {
    Rng rng(101 + static_cast<std::uint64_t>(variance * 10));
    const std::size_t n = 100000;
    const ComplexMatrix z = randn_complex(rng, n, 1, variance);
    double mean_power = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      mean_power += z.re(i, 0) * z.re(i, 0) + z.im(i, 0) * z.im(i, 0);
    mean_power /= static_cast<double>(n);
    CHECK(mean_power > 0.98 * variance);
    CHECK(mean_power < 1.02 * variance);
  }
}

TEST_CASE("randn_complex: identical seeds give identical matrices") {
  Rng a(42), b(42);
  const ComplexMatrix x = randn_complex(a, 5, 4, 1.0);
  const ComplexMatrix y = randn_complex(b, 5, 4, 1.0);
  CHECK(max_abs_diff(x, y) == 0.0);
}

TEST_CASE("randn_complex: nonpositive variance rejected") {
  Rng rng(1);
  CHECK_THROWS_AS(randn_complex(rng, 2, 2, 0.0), NumericError);
  CHECK_THROWS_AS(randn_complex(rng, 2, 2, -1.0), NumericError);
}

TEST_CASE("rng: child seeds are deterministic and distinct") {
  CHECK(Rng::child_seed(9, 0) == Rng::child_seed(9, 0));
  CHECK(Rng::child_seed(9, 0) != Rng::child_seed(9, 1));
  CHECK(Rng::child_seed(9, 0) != Rng::child_seed(10, 0));
}

TEST_CASE("finite_diff_gradient: quadratic, constant and sine") {
  auto square = [](const std::vector<double>& p) { return p[0] * p[0]; };
  auto g = finite_diff_gradient(square, {3.0}, 1e-6);
  CHECK(std::abs(g[0] - 6.0) < 1e-6);

  auto constant = [](const std::vector<double>&) { return 2.5; };
  g = finite_diff_gradient(constant, {1.0, -2.0, 0.5}, 1e-4);
  for (double v : g) CHECK(std::abs(v) < 1e-9);

  auto sine = [](const std::vector<double>& p) { return std::sin(p[0]); };
  g = finite_diff_gradient(sine, {0.0}, 1e-5);
  CHECK(std::abs(g[0] - 1.0) < 1e-9);
}

TEST_CASE("finite_diff_gradient: rejects bad step and non-finite values") {
  auto square = [](const std::vector<double>& p) { return p[0] * p[0]; };
  CHECK_THROWS_AS(finite_diff_gradient(square, {1.0}, 0.0), NumericError);
  auto blows_up = [](const std::vector<double>& p) {
    return 1.0 / (p[0] - p[0]);
  };
  CHECK_THROWS_AS(finite_diff_gradient(blows_up, {1.0}, 1e-6), NumericError);
}
