#ifndef DNHB_CONSTELLATION_HPP
#define DNHB_CONSTELLATION_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dnhb/complex_matrix.hpp"
#include "dnhb/rng.hpp"

namespace dnhb {

// Gray-mapped unit-energy constellation (mean |point|^2 = 1).
//
// QPSK maps bit pairs (b0, b1) to ((1-2*b0) + j*(1-2*b1))/sqrt(2), so
// bits 00 -> (1+j)/sqrt(2). 16-QAM uses the per-axis Gray code
// 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3 on each of I (first two bits) and
// Q (last two bits), scaled by 1/sqrt(10).
class Constellation {
 public:
  static Constellation qpsk();
  static Constellation qam16();
  static Constellation from_name(const std::string& name);  // "qpsk"|"qam16"

  const std::string& name() const { return name_; }
  std::size_t bits_per_symbol() const { return bits_per_symbol_; }
  std::size_t size() const { return points_.size(); }
  std::complex<double> point(std::size_t index) const { return points_[index]; }

  // Gray-mapped modulation; bit count must divide bits_per_symbol.
  std::vector<std::complex<double>> modulate(
      const std::vector<std::uint8_t>& bits) const;

  // Minimum-distance hard decision; inverse of modulate on clean symbols.
  std::vector<std::uint8_t> demodulate(
      const std::vector<std::complex<double>>& symbols) const;

  std::size_t nearest_index(std::complex<double> symbol) const;

  // rows x cols matrix of symbols drawn uniformly from the constellation,
  // the training distribution of the autoencoder.
  ComplexMatrix sample_symbols(std::size_t rows, std::size_t cols,
                               Rng& rng) const;

 private:
  Constellation(std::string name, std::size_t bits_per_symbol,
                std::vector<std::complex<double>> points);

  std::string name_;
  std::size_t bits_per_symbol_;
  std::vector<std::complex<double>> points_;  // indexed by bit pattern, MSB first
};

std::size_t count_bit_errors(const std::vector<std::uint8_t>& a,
                             const std::vector<std::uint8_t>& b);

}  // namespace dnhb

#endif  // DNHB_CONSTELLATION_HPP
