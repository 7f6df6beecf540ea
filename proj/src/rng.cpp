#include "dnhb/rng.hpp"

#include <cmath>
#include <string>

#include "dnhb/errors.hpp"

namespace dnhb {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t sm = seed;
  for (auto& s : state_) s = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw NumericError("uniform_index: n must be positive");
  // Rejection sampling removes the modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 is kept away from zero so log(u1) is finite.
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(kTwoPi * u2);
  have_spare_ = true;
  return radius * std::cos(kTwoPi * u2);
}

double Rng::laplacian(double scale) {
  const double u = uniform() - 0.5;
  const double s = (u < 0.0) ? -1.0 : 1.0;
  return -scale * s * std::log(1.0 - 2.0 * std::abs(u));
}

std::uint64_t Rng::child_seed(std::uint64_t parent_seed,
                              std::uint64_t stream_index) {
  std::uint64_t a = parent_seed;
  std::uint64_t b = stream_index + 0x9E3779B97F4A7C15ULL;
  std::uint64_t mixed = splitmix64(a) ^ splitmix64(b);
  return splitmix64(mixed);
}

ComplexMatrix randn_complex(Rng& rng, std::size_t rows, std::size_t cols,
                            double variance) {
  if (!(variance > 0.0))
    throw NumericError("randn_complex: variance must be positive, got " +
                       std::to_string(variance));
  const double sigma = std::sqrt(variance / 2.0);
  ComplexMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      out.re(i, j) = sigma * rng.gaussian();
      out.im(i, j) = sigma * rng.gaussian();
    }
  return out;
}

}  // namespace dnhb
