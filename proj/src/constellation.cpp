#include "dnhb/constellation.hpp"

#include <cmath>
#include <limits>

#include "dnhb/errors.hpp"

namespace dnhb {

Constellation::Constellation(std::string name, std::size_t bits_per_symbol,
                             std::vector<std::complex<double>> points)
    : name_(std::move(name)),
      bits_per_symbol_(bits_per_symbol),
      points_(std::move(points)) {}

Constellation Constellation::qpsk() {
  const double s = 1.0 / std::sqrt(2.0);
  // index = (b0 << 1) | b1
  return Constellation("qpsk", 2,
                       {{s, s}, {s, -s}, {-s, s}, {-s, -s}});
}

Constellation Constellation::qam16() {
  // Per-axis Gray code: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
  const double axis[4] = {-3.0, -1.0, 1.0, 3.0};
  auto gray_level = [&](std::size_t two_bits) {
    switch (two_bits) {
      case 0b00: return axis[0];
      case 0b01: return axis[1];
      case 0b11: return axis[2];
      default: return axis[3];  // 0b10
    }
  };
  const double s = 1.0 / std::sqrt(10.0);
  std::vector<std::complex<double>> points(16);
  for (std::size_t idx = 0; idx < 16; ++idx) {
    const std::size_t i_bits = idx >> 2;
    const std::size_t q_bits = idx & 0b11;
    points[idx] = {s * gray_level(i_bits), s * gray_level(q_bits)};
  }
  return Constellation("qam16", 4, std::move(points));
}

Constellation Constellation::from_name(const std::string& name) {
  if (name == "qpsk") return qpsk();
  if (name == "qam16") return qam16();
  throw ConfigError("unknown constellation '" + name +
                    "', expected qpsk or qam16");
}

std::vector<std::complex<double>> Constellation::modulate(
    const std::vector<std::uint8_t>& bits) const {
  if (bits.size() % bits_per_symbol_ != 0)
    throw ShapeError("modulate: bit count " + std::to_string(bits.size()) +
                     " is not a multiple of " +
                     std::to_string(bits_per_symbol_));
  std::vector<std::complex<double>> symbols(bits.size() / bits_per_symbol_);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    std::size_t idx = 0;
    for (std::size_t b = 0; b < bits_per_symbol_; ++b)
      idx = (idx << 1) | (bits[s * bits_per_symbol_ + b] & 1);
    symbols[s] = points_[idx];
  }
  return symbols;
}

std::size_t Constellation::nearest_index(std::complex<double> symbol) const {
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double d = std::norm(symbol - points_[i]);
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

std::vector<std::uint8_t> Constellation::demodulate(
    const std::vector<std::complex<double>>& symbols) const {
  std::vector<std::uint8_t> bits(symbols.size() * bits_per_symbol_);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const std::size_t idx = nearest_index(symbols[s]);
    for (std::size_t b = 0; b < bits_per_symbol_; ++b)
      bits[s * bits_per_symbol_ + b] =
          static_cast<std::uint8_t>((idx >> (bits_per_symbol_ - 1 - b)) & 1);
  }
  return bits;
}

ComplexMatrix Constellation::sample_symbols(std::size_t rows, std::size_t cols,
                                            Rng& rng) const {
  ComplexMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i)
      m.set(i, j, points_[rng.uniform_index(points_.size())]);
  return m;
}

std::size_t count_bit_errors(const std::vector<std::uint8_t>& a,
                             const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size())
    throw ShapeError("count_bit_errors: length mismatch " +
                     std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  std::size_t errors = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((a[i] & 1) != (b[i] & 1)) ++errors;
  return errors;
}

}  // namespace dnhb
