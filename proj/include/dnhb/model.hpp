#ifndef DNHB_MODEL_HPP
#define DNHB_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dnhb/channel.hpp"
#include "dnhb/constellation.hpp"
#include "dnhb/layers.hpp"

namespace dnhb {

// In linear mode every activation is identity and every bias stays zero, so
// the trained network collapses to explicit beamforming matrices
// (extract_matrices). Nonlinear mode uses tanh on hidden digital layers.
enum class ModelMode { kLinear, kNonlinear };

// The end-to-end transceiver network: digital beamformer -> phase-shifter
// beamformer -> per-sample power control -> fixed channel+noise -> per-user
// (phase-shifter combiner -> digital combiner). Trainable parameters are the
// digital weights/biases and the analog phases.
struct DnhbModel {
  struct UserReceiver {
    PhaseShiftLayer analog;                  // n_r -> n_rf_r
    std::vector<ComplexDenseLayer> digital;  // n_rf_r -> ... -> n_s
  };

  SystemConfig cfg;
  ModelMode mode = ModelMode::kNonlinear;
  AnalogTopology topology = AnalogTopology::kFullyConnected;
  std::vector<ComplexDenseLayer> tx_digital;  // k*n_s -> ... -> n_rf_t
  PhaseShiftLayer tx_analog;                  // n_rf_t -> n_t
  std::vector<UserReceiver> receivers;        // k_users entries
};

// Builds a model with `digital_layers` dense stages on each side (hidden
// width = max of the endpoint dims, tanh hidden activations in nonlinear
// mode, identity outputs). Phases initialize uniform on [0, 2pi), weights
// uniform +-sqrt(1/fan_in), biases zero.
DnhbModel build_model(const SystemConfig& cfg, AnalogTopology topology,
                      ModelMode mode, Rng& init_rng,
                      std::size_t digital_layers = 2);

// Checks that the layer dimensions chain correctly for the bound config and
// that linear mode carries no biases or nonlinear activations.
void validate_model(const DnhbModel& model);

struct ForwardCache {
  std::vector<DenseCache> tx_digital;
  PhaseCache tx_analog;
  PowerNormCache power;
  ChannelNoise noise;
  std::vector<ComplexMatrix> channels;  // fixed H_k of the pass, for backward
  std::vector<PhaseCache> rx_analog;
  std::vector<std::vector<DenseCache>> rx_digital;
  std::vector<ComplexMatrix> outputs;  // per-user n_s x batch
  std::size_t batch = 0;
};

// Full forward pass with explicit noise (noise.per_user may be zero matrices
// for a noiseless pass). Returns the per-user recovered symbol batches.
std::vector<ComplexMatrix> model_forward(const DnhbModel& model,
                                         const ComplexMatrix& symbols,
                                         const ChannelRealization& realization,
                                         const ChannelNoise& noise,
                                         ForwardCache* cache);

// Convenience overload that draws CN(0, noise_variance) antenna noise.
std::vector<ComplexMatrix> model_forward(const DnhbModel& model,
                                         const ComplexMatrix& symbols,
                                         const ChannelRealization& realization,
                                         double noise_variance, Rng& rng,
                                         ForwardCache* cache = nullptr);

// Sum-MSE reconstruction loss: sum over users of the batch-mean squared
// error of the re and im planes, i.e. ||S - S~||_F^2 / batch on the stacked
// matrices.
double sum_mse_loss(const ComplexMatrix& sent, const ComplexMatrix& received);
double sum_mse_loss(const ComplexMatrix& sent,
                    const std::vector<ComplexMatrix>& received_per_user);

// Gradients of sum_mse_loss through the whole network. Mirrors the model's
// parameter structure.
struct ModelGradients {
  struct UserGrads {
    std::vector<double> analog_phases;
    std::vector<DenseGrads> digital;
  };
  std::vector<DenseGrads> tx_digital;
  std::vector<double> tx_analog_phases;
  std::vector<UserGrads> receivers;
};

ModelGradients model_backward(const DnhbModel& model, const ForwardCache& cache,
                              const ComplexMatrix& sent_symbols);

// Flat real-parameter view used by the optimizer, the checkpoint writer and
// the finite-difference oracle. Order is fixed: tx digital layers (w_re,
// w_im, b_re, b_im per layer), tx phases, then per user analog phases and
// digital layers.
enum class ParamKind { kDenseWeight, kDenseBias, kPhase };

struct ParamBlockInfo {
  std::string name;
  ParamKind kind;
  std::size_t offset;
  std::size_t size;
};

std::vector<ParamBlockInfo> parameter_layout(const DnhbModel& model);
std::size_t parameter_count(const DnhbModel& model);
std::vector<double> flatten_parameters(const DnhbModel& model);
void set_parameters(DnhbModel& model, const std::vector<double>& flat);
std::vector<double> flatten_gradients(const ModelGradients& grads,
                                      const DnhbModel& model);

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  std::size_t epochs = 300;
  std::size_t steps_per_epoch = 50;
  // Per-batch train SNR (dB) sampled uniformly from [min, max]; set both
  // equal for a fixed train SNR.
  double train_snr_db_min = 0.0;
  double train_snr_db_max = 10.0;
  enum class Optimizer { kSgd, kAdam } optimizer = Optimizer::kAdam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 1;

  void validate() const;
};

struct TrainingReport {
  std::vector<double> epoch_loss;  // mean loss per epoch
  double final_loss = 0.0;
};

// End-to-end self-supervised training: per step, sample a symbol batch from
// the constellation, run forward at a sampled train SNR, backpropagate and
// step the optimizer. Deterministic given TrainConfig::seed. Throws
// NumericError naming the epoch if the loss turns non-finite.
TrainingReport train(DnhbModel& model, const ChannelRealization& realization,
                     const TrainConfig& cfg, const Constellation& constellation);

// Equivalent beamforming matrices of a linear-mode model:
// F_A(n,p) = e^{j theta_t(p,n)}, F_D = product of the digital layer matrices,
// W_Ak/W_Dk such that W_Dk^H W_Ak^H y reproduces the receiver network.
// Throws ConfigError for a nonlinear-mode model.
struct ExtractedMatrices {
  ComplexMatrix f_analog;               // n_t x n_rf_t
  ComplexMatrix f_digital;              // n_rf_t x k*n_s
  std::vector<ComplexMatrix> w_analog;  // n_r x n_rf_r per user
  std::vector<ComplexMatrix> w_digital; // n_rf_r x n_s per user
};

ExtractedMatrices extract_matrices(const DnhbModel& model);

// Model checkpoint persistence (JSON, format-versioned, lossless round trip).
void save_model(const std::string& path, const DnhbModel& model,
                std::uint64_t training_seed, double final_loss);

struct LoadedModel {
  DnhbModel model;
  std::uint64_t training_seed = 0;
  double final_loss = 0.0;
};

LoadedModel load_model(const std::string& path);

}  // namespace dnhb

#endif  // DNHB_MODEL_HPP
