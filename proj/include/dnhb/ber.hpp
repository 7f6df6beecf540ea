#ifndef DNHB_BER_HPP
#define DNHB_BER_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dnhb/baselines.hpp"
#include "dnhb/channel.hpp"
#include "dnhb/constellation.hpp"
#include "dnhb/model.hpp"

namespace dnhb {

// Anything that can carry a symbol batch end to end at a given noise level.
// One channel use transmits k_users*n_s symbols (one batch column).
class Transceiver {
 public:
  virtual ~Transceiver() = default;
  virtual std::vector<ComplexMatrix> transmit_receive(
      const ComplexMatrix& symbols, double noise_variance, Rng& rng) const = 0;
  virtual const SystemConfig& config() const = 0;
  virtual std::string label() const = 0;
};

// Trained autoencoder evaluated on its bound realization.
class DnhbTransceiver : public Transceiver {
 public:
  DnhbTransceiver(DnhbModel model, ChannelRealization realization,
                  std::string label = "dnhb");
  std::vector<ComplexMatrix> transmit_receive(const ComplexMatrix& symbols,
                                              double noise_variance,
                                              Rng& rng) const override;
  const SystemConfig& config() const override { return model_.cfg; }
  std::string label() const override { return label_; }
  const DnhbModel& model() const { return model_; }

 private:
  DnhbModel model_;
  ChannelRealization realization_;
  std::string label_;
};

// Fixed-matrix transceiver (block diagonalization, or any explicit design).
class FixedLinearTransceiver : public Transceiver {
 public:
  FixedLinearTransceiver(LinearTransceiver tx, ChannelRealization realization,
                         SystemConfig cfg);
  std::vector<ComplexMatrix> transmit_receive(const ComplexMatrix& symbols,
                                              double noise_variance,
                                              Rng& rng) const override;
  const SystemConfig& config() const override { return cfg_; }
  std::string label() const override { return tx_.label; }

 private:
  LinearTransceiver tx_;
  ChannelRealization realization_;
  SystemConfig cfg_;
};

// OMP hybrid baseline whose MMSE digital combiner is recomputed for each
// noise level (the receiver knows its own SNR).
class OmpHybridTransceiver : public Transceiver {
 public:
  OmpHybridTransceiver(OmpHybridSolution solution,
                       ChannelRealization realization, SystemConfig cfg);
  std::vector<ComplexMatrix> transmit_receive(const ComplexMatrix& symbols,
                                              double noise_variance,
                                              Rng& rng) const override;
  const SystemConfig& config() const override { return cfg_; }
  std::string label() const override { return "omp_hybrid"; }

 private:
  OmpHybridSolution solution_;
  ChannelRealization realization_;
  SystemConfig cfg_;
};

struct TrialResult {
  std::uint64_t errors = 0;
  std::uint64_t bits = 0;
};

// One Monte Carlo BER measurement: noise_variance = P / 10^(snr_db/10)
// (SNR = P / sigma^2 with P the total transmit power and sigma^2 the
// per-receive-antenna noise variance). Draws at least n_bits random bits
// (rounded up to whole channel uses), runs the transceiver and hard-decodes
// every user's streams, counting bit errors across all users.
TrialResult ber_trial(const Transceiver& transceiver, double snr_db,
                      std::uint64_t n_bits, const Constellation& constellation,
                      Rng& rng);

// Convenience overloads mirroring the two transceiver families.
TrialResult ber_trial(const DnhbModel& model,
                      const ChannelRealization& realization, double snr_db,
                      std::uint64_t n_bits, const Constellation& constellation,
                      Rng& rng);
TrialResult ber_trial(const LinearTransceiver& tx,
                      const ChannelRealization& realization,
                      const SystemConfig& cfg, double snr_db,
                      std::uint64_t n_bits, const Constellation& constellation,
                      Rng& rng);

struct BerCurve {
  std::string method;
  std::vector<double> snr_db;
  std::vector<std::uint64_t> errors;
  std::vector<std::uint64_t> bits;
  std::size_t realization_count = 0;
  std::uint64_t seed = 0;

  double ber(std::size_t i) const {
    return static_cast<double>(errors[i]) / static_cast<double>(bits[i]);
  }
};

// Builds (trains or solves) one transceiver per realization; seed is the
// per-realization child seed to use for anything stochastic in the build.
using TransceiverFactory = std::function<std::unique_ptr<Transceiver>(
    const ChannelRealization& realization, std::uint64_t seed)>;

// Full sweep: for every realization, obtain a transceiver and accumulate
// errors/bits at every SNR point; results aggregate across realizations.
// Realizations run concurrently up to `jobs` at a time with independent
// child seeds; the merge order is fixed, so results do not depend on
// scheduling.
BerCurve snr_sweep(const TransceiverFactory& factory,
                   const std::vector<ChannelRealization>& channel_set,
                   const std::vector<double>& snr_grid_db,
                   std::uint64_t bits_per_point,
                   const Constellation& constellation, std::uint64_t master_seed,
                   std::size_t jobs = 1);

// CSV persistence: header `method,snr_db,ber,errors,bits,realizations,seed`,
// one row per SNR point, shortest round-trip number formatting (so reruns
// are byte-identical).
void write_ber_csv(const std::string& path, const BerCurve& curve);
BerCurve read_ber_csv(const std::string& path);
std::string ber_csv_string(const BerCurve& curve);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

}  // namespace dnhb

#endif  // DNHB_BER_HPP
