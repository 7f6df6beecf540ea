#ifndef DNHB_LAYERS_HPP
#define DNHB_LAYERS_HPP

#include <cstddef>
#include <vector>

#include "dnhb/channel.hpp"
#include "dnhb/complex_matrix.hpp"
#include "dnhb/rng.hpp"

namespace dnhb {

// Batches are ComplexMatrix values with one sample per column.
// All backward passes return gradients of a scalar loss with respect to the
// real parameter planes; every formula is checked against
// finite_diff_gradient in the test suite.

enum class Activation { kIdentity, kTanh };

// Complex fully-connected layer y = act(W x + b), computed on the re/im
// planes: re(z) = W_re x_re - W_im x_im + b_re,
//         im(z) = W_re x_im + W_im x_re + b_im,
// with the activation applied to each plane.
struct ComplexDenseLayer {
  ComplexMatrix weights;  // out_dim x in_dim
  ComplexMatrix bias;     // out_dim x 1
  Activation activation = Activation::kIdentity;

  std::size_t in_dim() const { return weights.cols(); }
  std::size_t out_dim() const { return weights.rows(); }
};

struct DenseCache {
  ComplexMatrix input;
  ComplexMatrix pre_activation;
};

struct DenseGrads {
  ComplexMatrix weights;  // d loss / d (w_re, w_im)
  ComplexMatrix bias;
};

ComplexMatrix dense_forward(const ComplexDenseLayer& layer,
                            const ComplexMatrix& x, DenseCache* cache);

// Returns the input gradient; parameter gradients land in *grads.
ComplexMatrix dense_backward(const ComplexDenseLayer& layer,
                             const DenseCache& cache,
                             const ComplexMatrix& upstream, DenseGrads* grads);

enum class AnalogTopology { kFullyConnected, kPartiallyConnected };

// Phase-shifter network: each connected (input p, output n) pair contributes
// x_p * e^{j theta}, i.e. re += x_re cos - x_im sin, im += x_re sin + x_im cos.
// Every implied coefficient has unit modulus by construction, which is how the
// constant-modulus constraint is enforced.
//
// Fully connected: phases has in_dim*out_dim entries, theta(p, n) stored at
// p*out_dim + n; every input feeds every output.
// Partially connected: antennas are split into contiguous equal blocks, one
// per RF chain, and phases has one entry per antenna. On the transmit side
// (out_dim > in_dim) the antennas are the outputs; on the receive side
// (in_dim > out_dim) they are the inputs.
struct PhaseShiftLayer {
  AnalogTopology topology = AnalogTopology::kFullyConnected;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<double> phases;

  std::size_t antenna_count() const { return std::max(in_dim, out_dim); }
  std::size_t chain_count() const { return std::min(in_dim, out_dim); }
  std::size_t block_size() const { return antenna_count() / chain_count(); }
};

// Validated constructor; throws ConfigError when the partial topology's
// antenna count is not divisible by its RF-chain count.
PhaseShiftLayer make_phase_shift_layer(AnalogTopology topology,
                                       std::size_t in_dim, std::size_t out_dim);

struct PhaseCache {
  ComplexMatrix input;
};

ComplexMatrix phase_forward(const PhaseShiftLayer& layer,
                            const ComplexMatrix& x, PhaseCache* cache);

ComplexMatrix phase_backward(const PhaseShiftLayer& layer,
                             const PhaseCache& cache,
                             const ComplexMatrix& upstream,
                             std::vector<double>* phase_grads);

// The layer's coefficients as an explicit out_dim x in_dim complex matrix
// (unit-modulus entries on the connected support, zero elsewhere).
ComplexMatrix phase_coefficient_matrix(const PhaseShiftLayer& layer);

// Per-column power control: y_col = rho * x_col with rho = sqrt(P)/||x_col||,
// so every transmitted sample leaves with total power exactly P. Throws
// NumericError on a zero-norm column (degenerate batch).
struct PowerNormCache {
  ComplexMatrix input;
  std::vector<double> norm_sq;  // per column
  std::vector<double> rho;      // per column
};

ComplexMatrix power_normalize_forward(const ComplexMatrix& x,
                                      double power_budget,
                                      PowerNormCache* cache);

ComplexMatrix power_normalize_backward(const PowerNormCache& cache,
                                       const ComplexMatrix& upstream);

// Fixed (non-trainable) channel-plus-noise layer. Noise is drawn once per
// forward pass and cached, so the backward pass treats it as an additive
// constant. noise_variance == 0 gives a noiseless pass.
struct ChannelNoise {
  std::vector<ComplexMatrix> per_user;  // each n_r x batch
};

ChannelNoise draw_channel_noise(const ChannelRealization& realization,
                                std::size_t batch, double noise_variance,
                                Rng& rng);

// y_k = H_k x + n_k for every user, stacked into a (k_users*n_r) x batch
// matrix in user order.
ComplexMatrix channel_forward(const ChannelRealization& realization,
                              const ComplexMatrix& x,
                              const ChannelNoise& noise);

// Input gradient: sum_k H_k^H upstream_k.
ComplexMatrix channel_backward(const ChannelRealization& realization,
                               const ComplexMatrix& upstream);

// Partition the stacked channel output into the per-user blocks each user's
// combiner sees. split/concat are exact inverses.
std::vector<ComplexMatrix> split_users(const ComplexMatrix& stacked,
                                       std::size_t k_users);
ComplexMatrix concat_users(const std::vector<ComplexMatrix>& per_user);

}  // namespace dnhb

#endif  // DNHB_LAYERS_HPP
