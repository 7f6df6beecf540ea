// dnhb: autoencoder hybrid-beamforming simulator CLI.
//
// Subcommands:
//   gen-channels  draw a channel set and write channels.json
//   train         train the autoencoder methods and write checkpoints
//   sweep         run BER sweeps (reusing checkpoints when present)
//   run           composite: channels + training + sweeps + manifest
//   compare       tabulate saved curves and the dB gap at a reference BER
//
// Flags override config-file keys (flags > file > defaults).
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dnhb/errors.hpp"
#include "dnhb/experiment.hpp"
#include "dnhb/serialize.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::string> out_dir;
  std::optional<std::string> methods_csv;
  std::optional<std::string> snr_spec;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config JSON")
      ->required();
  cmd->add_option("--seed", flags.seed, "master seed override");
  cmd->add_option("--jobs", flags.jobs, "max concurrent jobs");
  cmd->add_option("--out", flags.out_dir, "output directory override");
  cmd->add_option("--methods", flags.methods_csv,
                  "comma-separated method list override");
  cmd->add_option("--snr", flags.snr_spec, "SNR grid override, START:STEP:END");
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

dnhb::ExperimentConfig load_config(const CommonFlags& flags) {
  dnhb::ExperimentConfig cfg = [&] {
    try {
      return dnhb::parse_config(flags.config_path);
    } catch (const dnhb::IoError& e) {
      // An unreadable config file is a configuration problem (exit 2).
      throw dnhb::ConfigError(e.what());
    }
  }();
  dnhb::ConfigOverrides overrides;
  overrides.seed = flags.seed;
  overrides.output_dir = flags.out_dir;
  if (flags.methods_csv) overrides.methods = split_csv(*flags.methods_csv);
  overrides.snr_spec = flags.snr_spec;
  overrides.jobs = flags.jobs;
  dnhb::apply_overrides(cfg, overrides);
  return cfg;
}

int cmd_gen_channels(const CommonFlags& flags) {
  const dnhb::ExperimentConfig cfg = load_config(flags);
  dnhb::prepare_output_dir(cfg);
  dnhb::generate_experiment_channels(cfg, /*save=*/true);
  std::cout << "wrote " << dnhb::channels_file_path(cfg) << " ("
            << cfg.channel.realizations << " realizations)\n";
  return 0;
}

int cmd_train(const CommonFlags& flags) {
  const dnhb::ExperimentConfig cfg = load_config(flags);
  dnhb::prepare_output_dir(cfg);
  const auto channels = dnhb::generate_experiment_channels(cfg, /*save=*/true);
  bool trained_any = false;
  for (const auto& method : cfg.methods) {
    if (!dnhb::is_dnhb_method(method)) continue;
    trained_any = true;
    std::cout << "training " << method << " on " << channels.size()
              << " realizations...\n";
    const dnhb::TrainedMethod trained =
        dnhb::train_method(cfg, method, channels);
    dnhb::save_method_checkpoints(cfg, trained);
    for (std::size_t i = 0; i < trained.reports.size(); ++i)
      std::cout << "  realization " << i << ": final loss "
                << trained.reports[i].final_loss << "\n";
  }
  if (!trained_any)
    std::cout << "no trainable (dnhb_*) methods in the method list\n";
  return 0;
}

int cmd_sweep(const CommonFlags& flags) {
  const dnhb::ExperimentConfig cfg = load_config(flags);
  dnhb::prepare_output_dir(cfg);
  const auto channels = dnhb::generate_experiment_channels(cfg, /*save=*/true);
  for (const auto& method : cfg.methods) {
    std::optional<dnhb::TrainedMethod> trained;
    if (dnhb::is_dnhb_method(method)) {
      trained =
          dnhb::load_method_checkpoints(cfg, method, channels.size());
      if (!trained) {
        std::cout << "no checkpoints for " << method << ", training...\n";
        trained = dnhb::train_method(cfg, method, channels);
        dnhb::save_method_checkpoints(cfg, *trained);
      }
    }
    std::cout << "sweeping " << method << "...\n";
    const dnhb::BerCurve curve = dnhb::sweep_method(
        cfg, method, channels, trained ? &*trained : nullptr);
    dnhb::write_ber_csv(dnhb::curve_file_path(cfg, method), curve);
    std::cout << "wrote " << dnhb::curve_file_path(cfg, method) << "\n";
  }
  return 0;
}

int cmd_run(const CommonFlags& flags) {
  const dnhb::ExperimentConfig cfg = load_config(flags);
  const dnhb::ExperimentResult result = dnhb::run_experiment(cfg);
  std::cout << "wrote " << result.channels_file << "\n";
  for (const auto& file : result.curve_files)
    std::cout << "wrote " << file << "\n";
  std::cout << "wrote " << result.manifest_file << "\n";
  return 0;
}

int cmd_compare(const std::vector<std::string>& files, double reference_ber) {
  if (files.size() < 2)
    throw dnhb::ConfigError("compare: need at least two curve files");
  std::vector<dnhb::BerCurve> curves;
  curves.reserve(files.size());
  for (const auto& file : files) curves.push_back(dnhb::read_ber_csv(file));
  const dnhb::Comparison cmp = dnhb::compare_curves(curves, reference_ber);
  std::cout << cmp.to_text();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"autoencoder hybrid beamforming simulator"};
  app.require_subcommand(1);

  CommonFlags gen_flags, train_flags, sweep_flags, run_flags;
  CLI::App* gen = app.add_subcommand("gen-channels", "generate a channel set");
  add_common_flags(gen, gen_flags);
  CLI::App* train = app.add_subcommand("train", "train autoencoder models");
  add_common_flags(train, train_flags);
  CLI::App* sweep = app.add_subcommand("sweep", "run BER sweeps");
  add_common_flags(sweep, sweep_flags);
  CLI::App* run = app.add_subcommand("run", "full experiment pipeline");
  add_common_flags(run, run_flags);

  std::vector<std::string> compare_files;
  double reference_ber = 1e-2;
  CLI::App* compare = app.add_subcommand("compare", "compare saved BER curves");
  compare->add_option("files", compare_files, "curve CSV files (>= 2)")
      ->expected(-1);
  compare->add_option("--reference-ber", reference_ber,
                      "BER level for the dB-gap readout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen_channels(gen_flags);
    if (train->parsed()) return cmd_train(train_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags);
    if (run->parsed()) return cmd_run(run_flags);
    if (compare->parsed()) return cmd_compare(compare_files, reference_ber);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const dnhb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dnhb::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dnhb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
