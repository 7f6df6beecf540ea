#ifndef DNHB_RNG_HPP
#define DNHB_RNG_HPP

#include <cstdint>

#include "dnhb/complex_matrix.hpp"

namespace dnhb {

// Deterministic random number generator: xoshiro256++ (Blackman/Vigna),
// state seeded through SplitMix64. The algorithm is fixed for the lifetime
// of this repository; identical seeds give identical streams on every
// platform (the integer stream is bit-exact, floating-point outputs depend
// only on IEEE-754 double arithmetic plus libm's log/cos/sin/sqrt).
//
// An Rng is single-owner. Parallel work derives independent streams with
// child(stream_index), where child_seed = splitmix64(splitmix64(parent_seed)
// ^ splitmix64(stream_index + 0x9E3779B97F4A7C15)).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Uniform integer on [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double gaussian();

  // Laplacian with zero mean and the given scale parameter b (stddev b*sqrt(2)).
  double laplacian(double scale);

  static std::uint64_t child_seed(std::uint64_t parent_seed,
                                  std::uint64_t stream_index);
  Rng child(std::uint64_t stream_index) const {
    return Rng(child_seed(seed_, stream_index));
  }

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// rows x cols matrix of i.i.d. CN(0, variance) entries: independent real and
// imaginary parts, each N(0, variance/2). Throws NumericError for
// variance <= 0.
ComplexMatrix randn_complex(Rng& rng, std::size_t rows, std::size_t cols,
                            double variance);

}  // namespace dnhb

#endif  // DNHB_RNG_HPP
