#ifndef DNHB_BASELINES_HPP
#define DNHB_BASELINES_HPP

#include <optional>
#include <string>
#include <vector>

#include "dnhb/channel.hpp"
#include "dnhb/complex_matrix.hpp"
#include "dnhb/rng.hpp"
#include "dnhb/system_config.hpp"

namespace dnhb {

// Classical linear transceiver with explicit matrices. An absent f_analog
// marks a full-digital design (identity analog stages on both ends);
// otherwise all analog entries have unit modulus.
struct LinearTransceiver {
  std::optional<ComplexMatrix> f_analog;  // n_t x n_rf_t
  ComplexMatrix f_digital;                // (n_rf_t or n_t) x k*n_s
  std::vector<ComplexMatrix> w_analog;    // per user n_r x n_rf_r; empty = identity
  std::vector<ComplexMatrix> w_digital;   // per user (n_rf_r or n_r) x n_s
  std::string label;

  bool full_digital() const { return !f_analog.has_value(); }
  // F_A F_D (or F_D when full digital), the n_t x k*n_s transmit map.
  ComplexMatrix effective_precoder() const;
  // Checks tr{F F^H} <= P (1e-9 slack) and unit-modulus analog entries.
  void validate(const SystemConfig& cfg) const;
};

// Full-digital block diagonalization: each user's precoder lives in the null
// space of the other users' stacked channels, with per-user SVD stream
// directions and equal power P/(k*n_s) per stream; combiners are the left
// singular vectors. Requires n_t >= k_users*n_r.
LinearTransceiver bd_full_digital(const ChannelRealization& realization,
                                  const SystemConfig& cfg);

// Spatially sparse precoding via orthogonal matching pursuit: greedily picks
// dictionary columns most correlated with the residual, least-squares refits
// the digital matrix and recomputes the residual, for n_chains iterations.
// When power_budget is set, the digital matrix is rescaled at the end so
// ||analog * digital||_F^2 equals it exactly. A rank-deficient least-squares
// step falls back to a ridge (1e-10) solve and sets ridge_used.
struct OmpResult {
  ComplexMatrix analog;                // dictionary columns, one per chain
  ComplexMatrix digital;               // chains x target columns
  std::vector<double> residual_trace;  // ||target - analog*digital||_F per iter
  bool ridge_used = false;
};

OmpResult omp_hybrid_precoder(const ComplexMatrix& target,
                              const ComplexMatrix& dictionary,
                              std::size_t n_chains,
                              std::optional<double> power_budget);

// MMSE linear combiner for y = h_eff s + n with E[ss^H] = I and noise
// variance sigma^2 at the combiner input:
//   W = (h_eff h_eff^H + sigma^2 I)^-1 h_eff[:, first..first+count)
// With sigma^2 = 0 and a rank-deficient h_eff the inverse falls back to a
// pseudo-inverse and *pseudo_inverse_used is set.
ComplexMatrix mmse_combiner(const ComplexMatrix& h_eff, double noise_variance,
                            std::size_t first_stream, std::size_t n_streams,
                            bool* pseudo_inverse_used = nullptr);

// s~_k = W_Dk^H W_Ak^H (H_k F_A F_D s + n_k) for every user; the explicit
// matrix pipeline including inter-user interference.
std::vector<ComplexMatrix> evaluate_linear_transceiver(
    const LinearTransceiver& tx, const ChannelRealization& realization,
    const ComplexMatrix& symbols, double noise_variance, Rng& rng);

// Overload with caller-supplied noise (per user n_r x batch), for oracle
// comparisons that need the same noise on both paths.
std::vector<ComplexMatrix> evaluate_linear_transceiver(
    const LinearTransceiver& tx, const ChannelRealization& realization,
    const ComplexMatrix& symbols, const std::vector<ComplexMatrix>& noise);

// Steering dictionaries for OMP, entries scaled to unit modulus
// (sqrt(n) * array response). The transmit dictionary stacks every user's
// path departure angles; the receive dictionary is per user.
ComplexMatrix transmit_steering_dictionary(const ChannelRealization& realization,
                                           const SystemConfig& cfg);
ComplexMatrix receive_steering_dictionary(const ChannelGeometry& geometry,
                                          const SystemConfig& cfg);

// The sigma^2-independent part of the OMP hybrid baseline: analog stages and
// the OMP digital precoder (target = block-diagonalization solution).
// omp_transceiver attaches MMSE digital combiners for a given noise level.
struct OmpHybridSolution {
  ComplexMatrix f_analog;
  ComplexMatrix f_digital;
  std::vector<ComplexMatrix> w_analog;   // per user
  std::vector<double> precoder_residual_trace;
  bool ridge_used = false;
};

OmpHybridSolution omp_hybrid_solution(const ChannelRealization& realization,
                                      const SystemConfig& cfg);

LinearTransceiver omp_transceiver(const OmpHybridSolution& solution,
                                  const ChannelRealization& realization,
                                  const SystemConfig& cfg,
                                  double noise_variance);

}  // namespace dnhb

#endif  // DNHB_BASELINES_HPP
