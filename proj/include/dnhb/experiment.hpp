#ifndef DNHB_EXPERIMENT_HPP
#define DNHB_EXPERIMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dnhb/ber.hpp"
#include "dnhb/channel.hpp"
#include "dnhb/model.hpp"
#include "dnhb/system_config.hpp"

namespace dnhb {

// Known method names: dnhb_full, dnhb_partial, bd_full_digital, omp_hybrid.
bool is_known_method(const std::string& method);
bool is_dnhb_method(const std::string& method);

struct ChannelParams {
  ChannelGeometryParams geometry;
  std::size_t realizations = 4;
};

struct SweepParams {
  std::vector<double> snr_db;
  std::uint64_t bits_per_point = 200000;
};

// Everything one experiment needs, loadable from a JSON file. Defaults fill
// every field except the system dimensions; unknown keys are rejected with
// their key path. Validation checks every requested method's preconditions
// up front, so an accepted config runs without dimension errors.
struct ExperimentConfig {
  SystemConfig system;
  ChannelParams channel;
  TrainConfig training;
  bool training_snr_from_sweep = true;  // default: sample over the sweep range
  std::string constellation = "qpsk";
  SweepParams sweep;
  std::vector<std::string> methods = {"dnhb_full", "bd_full_digital",
                                      "omp_hybrid"};
  std::string output_dir = "results";
  std::uint64_t master_seed = 1;
  std::size_t jobs = 1;

  void validate() const;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_json(const nlohmann::json& j,
                                   const std::string& context);
// Echo of every effective value (what the manifest records).
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// "START:STEP:END" (inclusive) -> grid; also accepts a single "X".
std::vector<double> parse_snr_spec(const std::string& spec);

// Flag overrides, applied after the config file (flags > file > defaults).
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<std::vector<std::string>> methods;
  std::optional<std::string> snr_spec;
  std::optional<std::size_t> jobs;
};
void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& overrides);

// Deterministic seed derivation shared by the subcommands, so `train` +
// `sweep` reproduce exactly what `run` does.
std::uint64_t channel_seed(const ExperimentConfig& cfg);
std::uint64_t method_train_seed(const ExperimentConfig& cfg,
                                const std::string& method,
                                std::size_t realization_index);
std::uint64_t method_sweep_seed(const ExperimentConfig& cfg,
                                const std::string& method);

std::string channels_file_path(const ExperimentConfig& cfg);
std::string curve_file_path(const ExperimentConfig& cfg,
                            const std::string& method);
std::string checkpoint_file_path(const ExperimentConfig& cfg,
                                 const std::string& method,
                                 std::size_t realization_index);
std::string manifest_file_path(const ExperimentConfig& cfg);

// Creates the output directory (and parents) and verifies it is writable;
// throws IoError before any compute happens otherwise.
void prepare_output_dir(const ExperimentConfig& cfg);

// Channel set for this experiment, generated from the master seed; `save`
// also writes channels.json to the output directory.
std::vector<ChannelRealization> generate_experiment_channels(
    const ExperimentConfig& cfg, bool save);

struct TrainedMethod {
  std::string method;
  std::vector<DnhbModel> models;        // one per realization
  std::vector<TrainingReport> reports;  // aligned with models
};

// Trains one autoencoder per realization (concurrently up to cfg.jobs),
// deterministic per (master seed, method, realization index).
TrainedMethod train_method(const ExperimentConfig& cfg,
                           const std::string& method,
                           const std::vector<ChannelRealization>& channels);

void save_method_checkpoints(const ExperimentConfig& cfg,
                             const TrainedMethod& trained);

// Loads previously saved checkpoints; std::nullopt when any file is missing.
std::optional<TrainedMethod> load_method_checkpoints(
    const ExperimentConfig& cfg, const std::string& method,
    std::size_t realization_count);

// BER curve for one method. For dnhb methods `trained` must hold the models;
// classical baselines solve per realization inside the sweep.
BerCurve sweep_method(const ExperimentConfig& cfg, const std::string& method,
                      const std::vector<ChannelRealization>& channels,
                      const TrainedMethod* trained);

struct ExperimentResult {
  std::string channels_file;
  std::vector<std::string> curve_files;
  std::string manifest_file;
};

// The full pipeline: channels -> train -> sweep -> CSV/manifest/checkpoints.
// Rerunning with the same config and seed reproduces every CSV byte.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Comparison of >= 2 saved curves on the intersection of their SNR grids,
// plus the SNR each method needs to reach a reference BER (log-linear
// interpolation) and the dB gap to the first method.
struct Comparison {
  std::vector<std::string> methods;
  std::vector<double> snr_db;              // common grid
  std::vector<std::vector<double>> ber;    // [method][point]
  double reference_ber = 1e-2;
  std::vector<std::optional<double>> snr_at_reference;  // per method
  std::vector<std::optional<double>> gap_db_vs_first;   // per method

  std::string to_text() const;
};

Comparison compare_curves(const std::vector<BerCurve>& curves,
                          double reference_ber = 1e-2);

// SNR (dB) where the curve crosses `target` BER, log-linearly interpolated
// between grid points; std::nullopt when the curve never crosses it.
std::optional<double> snr_at_ber(const BerCurve& curve, double target);

}  // namespace dnhb

#endif  // DNHB_EXPERIMENT_HPP
