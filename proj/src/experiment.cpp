#include "dnhb/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "dnhb/errors.hpp"
#include "dnhb/serialize.hpp"

namespace dnhb {

namespace {

constexpr int kManifestFormatVersion = 1;
constexpr double kDegToRad = 0.017453292519943295;

int method_tag(const std::string& method) {
  if (method == "dnhb_full") return 1;
  if (method == "dnhb_partial") return 2;
  if (method == "bd_full_digital") return 3;
  if (method == "omp_hybrid") return 4;
  throw ConfigError("unknown method '" + method + "'");
}

TrainConfig effective_training(const ExperimentConfig& cfg) {
  TrainConfig tc = cfg.training;
  if (cfg.training_snr_from_sweep) {
    double lo = cfg.sweep.snr_db.front(), hi = cfg.sweep.snr_db.front();
    for (double v : cfg.sweep.snr_db) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    tc.train_snr_db_min = lo;
    tc.train_snr_db_max = hi;
  }
  return tc;
}

std::size_t realization_index(const ChannelRealization& realization,
                              std::size_t count) {
  const std::size_t idx = static_cast<std::size_t>(realization.realization_id);
  if (idx >= count)
    throw ConfigError("realization id " + std::to_string(idx) +
                      " outside the experiment's channel set");
  return idx;
}

}  // namespace

bool is_known_method(const std::string& method) {
  return method == "dnhb_full" || method == "dnhb_partial" ||
         method == "bd_full_digital" || method == "omp_hybrid";
}

bool is_dnhb_method(const std::string& method) {
  return method == "dnhb_full" || method == "dnhb_partial";
}

void ExperimentConfig::validate() const {
  system.validate();
  if (channel.realizations == 0)
    throw ConfigError("channel.realizations must be at least 1");
  if (channel.geometry.n_clusters == 0 || channel.geometry.n_rays == 0)
    throw ConfigError("channel cluster and ray counts must be positive");
  if (sweep.snr_db.empty()) throw ConfigError("sweep.snr_db is empty");
  if (methods.empty()) throw ConfigError("methods list is empty");

  const Constellation spec = Constellation::from_name(constellation);
  const std::uint64_t bits_per_use =
      spec.bits_per_symbol() * system.total_streams();
  if (sweep.bits_per_point < bits_per_use)
    throw ConfigError("sweep.bits_per_point (" +
                      std::to_string(sweep.bits_per_point) +
                      ") is below one channel use (" +
                      std::to_string(bits_per_use) + " bits)");

  effective_training(*this).validate();

  const std::size_t paths =
      channel.geometry.n_clusters * channel.geometry.n_rays;
  for (const auto& method : methods) {
    if (!is_known_method(method))
      throw ConfigError("unknown method '" + method + "'");
    if (method == "dnhb_partial") {
      if (system.n_t % system.n_rf_t != 0 || system.n_r % system.n_rf_r != 0)
        throw ConfigError(
            "method dnhb_partial needs antenna counts divisible by RF-chain "
            "counts (n_t/n_rf_t and n_r/n_rf_r)");
    }
    if (method == "bd_full_digital" || method == "omp_hybrid") {
      if (system.n_t < system.k_users * system.n_r)
        throw ConfigError("method " + method +
                          " needs n_t >= k_users*n_r for the null-space "
                          "construction, got n_t = " +
                          std::to_string(system.n_t) + ", k_users*n_r = " +
                          std::to_string(system.k_users * system.n_r));
    }
    if (method == "omp_hybrid") {
      if (system.n_rf_t > system.k_users * paths)
        throw ConfigError(
            "method omp_hybrid: transmit dictionary has only " +
            std::to_string(system.k_users * paths) + " steering vectors for " +
            std::to_string(system.n_rf_t) + " RF chains");
      if (system.n_rf_r > paths)
        throw ConfigError("method omp_hybrid: receive dictionary has only " +
                          std::to_string(paths) + " steering vectors for " +
                          std::to_string(system.n_rf_r) + " RF chains");
    }
  }
}

std::vector<double> parse_snr_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream stream(spec);
  while (std::getline(stream, part, ':')) parts.push_back(part);
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad SNR spec '" + spec + "': '" + s +
                        "' is not a number");
    }
  };
  if (parts.size() == 1) return {to_double(parts[0])};
  if (parts.size() != 3)
    throw ConfigError("bad SNR spec '" + spec +
                      "', expected START:STEP:END or a single value");
  const double start = to_double(parts[0]);
  const double step = to_double(parts[1]);
  const double end = to_double(parts[2]);
  if (!(step > 0.0))
    throw ConfigError("bad SNR spec '" + spec + "': step must be positive");
  if (end < start)
    throw ConfigError("bad SNR spec '" + spec + "': END below START");
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double v = start + step * static_cast<double>(i);
    if (v > end + step * 1e-9) break;
    grid.push_back(v);
  }
  return grid;
}

ExperimentConfig parse_config_json(const nlohmann::json& j,
                                   const std::string& context) {
  reject_unknown_keys(j,
                      {"system", "channel", "training", "constellation",
                       "sweep", "methods", "output_dir", "master_seed", "jobs"},
                      context);
  ExperimentConfig cfg;
  cfg.system =
      system_config_from_json(require_key(j, "system", context));

  if (j.contains("channel")) {
    const auto& cj = j["channel"];
    reject_unknown_keys(
        cj, {"n_clusters", "n_rays", "angular_spread_deg", "realizations"},
        context + ".channel");
    if (cj.contains("n_clusters"))
      cfg.channel.geometry.n_clusters = cj["n_clusters"].get<std::size_t>();
    if (cj.contains("n_rays"))
      cfg.channel.geometry.n_rays = cj["n_rays"].get<std::size_t>();
    if (cj.contains("angular_spread_deg"))
      cfg.channel.geometry.angular_spread_rad =
          cj["angular_spread_deg"].get<double>() * kDegToRad;
    if (cj.contains("realizations"))
      cfg.channel.realizations = cj["realizations"].get<std::size_t>();
  }

  if (j.contains("training")) {
    const auto& tj = j["training"];
    reject_unknown_keys(tj,
                        {"learning_rate", "batch_size", "epochs",
                         "steps_per_epoch", "optimizer", "train_snr_db",
                         "adam_beta1", "adam_beta2", "adam_epsilon"},
                        context + ".training");
    if (tj.contains("learning_rate"))
      cfg.training.learning_rate = tj["learning_rate"].get<double>();
    if (tj.contains("batch_size"))
      cfg.training.batch_size = tj["batch_size"].get<std::size_t>();
    if (tj.contains("epochs"))
      cfg.training.epochs = tj["epochs"].get<std::size_t>();
    if (tj.contains("steps_per_epoch"))
      cfg.training.steps_per_epoch = tj["steps_per_epoch"].get<std::size_t>();
    if (tj.contains("optimizer")) {
      const std::string opt = tj["optimizer"].get<std::string>();
      if (opt == "adam")
        cfg.training.optimizer = TrainConfig::Optimizer::kAdam;
      else if (opt == "sgd")
        cfg.training.optimizer = TrainConfig::Optimizer::kSgd;
      else
        throw ParseError(context + ".training.optimizer: unknown optimizer '" +
                         opt + "'");
    }
    if (tj.contains("adam_beta1"))
      cfg.training.adam_beta1 = tj["adam_beta1"].get<double>();
    if (tj.contains("adam_beta2"))
      cfg.training.adam_beta2 = tj["adam_beta2"].get<double>();
    if (tj.contains("adam_epsilon"))
      cfg.training.adam_epsilon = tj["adam_epsilon"].get<double>();
    if (tj.contains("train_snr_db")) {
      cfg.training_snr_from_sweep = false;
      const auto& sj = tj["train_snr_db"];
      if (sj.is_number()) {
        cfg.training.train_snr_db_min = sj.get<double>();
        cfg.training.train_snr_db_max = sj.get<double>();
      } else if (sj.is_array() && sj.size() == 2) {
        cfg.training.train_snr_db_min = sj[0].get<double>();
        cfg.training.train_snr_db_max = sj[1].get<double>();
      } else {
        throw ParseError(context +
                         ".training.train_snr_db: expected a number or "
                         "[min, max]");
      }
    }
  }

  if (j.contains("constellation"))
    cfg.constellation = j["constellation"].get<std::string>();

  if (j.contains("sweep")) {
    const auto& sj = j["sweep"];
    reject_unknown_keys(sj, {"snr_db", "bits_per_point"}, context + ".sweep");
    if (sj.contains("snr_db")) {
      if (sj["snr_db"].is_string())
        cfg.sweep.snr_db = parse_snr_spec(sj["snr_db"].get<std::string>());
      else if (sj["snr_db"].is_array())
        cfg.sweep.snr_db = sj["snr_db"].get<std::vector<double>>();
      else
        throw ParseError(context +
                         ".sweep.snr_db: expected \"START:STEP:END\" or an "
                         "array of values");
    }
    if (sj.contains("bits_per_point"))
      cfg.sweep.bits_per_point = sj["bits_per_point"].get<std::uint64_t>();
  }
  if (cfg.sweep.snr_db.empty()) cfg.sweep.snr_db = parse_snr_spec("0:2:12");

  if (j.contains("methods"))
    cfg.methods = j["methods"].get<std::vector<std::string>>();
  if (j.contains("output_dir"))
    cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("master_seed"))
    cfg.master_seed = j["master_seed"].get<std::uint64_t>();
  if (j.contains("jobs")) cfg.jobs = j["jobs"].get<std::size_t>();
  if (cfg.jobs == 0) cfg.jobs = 1;

  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  return parse_config_json(load_json_file(path), path);
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  const TrainConfig tc = effective_training(cfg);
  nlohmann::json j;
  j["system"] = system_config_to_json(cfg.system);
  j["channel"] = {
      {"n_clusters", cfg.channel.geometry.n_clusters},
      {"n_rays", cfg.channel.geometry.n_rays},
      {"angular_spread_deg", cfg.channel.geometry.angular_spread_rad / kDegToRad},
      {"realizations", cfg.channel.realizations}};
  j["training"] = {
      {"learning_rate", tc.learning_rate},
      {"batch_size", tc.batch_size},
      {"epochs", tc.epochs},
      {"steps_per_epoch", tc.steps_per_epoch},
      {"optimizer",
       tc.optimizer == TrainConfig::Optimizer::kAdam ? "adam" : "sgd"},
      {"adam_beta1", tc.adam_beta1},
      {"adam_beta2", tc.adam_beta2},
      {"adam_epsilon", tc.adam_epsilon},
      {"train_snr_db",
       nlohmann::json::array({tc.train_snr_db_min, tc.train_snr_db_max})}};
  j["constellation"] = cfg.constellation;
  j["sweep"] = {{"snr_db", cfg.sweep.snr_db},
                {"bits_per_point", cfg.sweep.bits_per_point}};
  j["methods"] = cfg.methods;
  j["output_dir"] = cfg.output_dir;
  j["master_seed"] = cfg.master_seed;
  j["jobs"] = cfg.jobs;
  return j;
}

void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& overrides) {
  if (overrides.seed) cfg.master_seed = *overrides.seed;
  if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;
  if (overrides.methods) cfg.methods = *overrides.methods;
  if (overrides.snr_spec) cfg.sweep.snr_db = parse_snr_spec(*overrides.snr_spec);
  if (overrides.jobs && *overrides.jobs > 0) cfg.jobs = *overrides.jobs;
  cfg.validate();
}

std::uint64_t channel_seed(const ExperimentConfig& cfg) {
  return Rng::child_seed(cfg.master_seed, 101);
}

std::uint64_t method_train_seed(const ExperimentConfig& cfg,
                                const std::string& method,
                                std::size_t realization_index) {
  return Rng::child_seed(Rng::child_seed(cfg.master_seed, 200 + method_tag(method)),
                         realization_index);
}

std::uint64_t method_sweep_seed(const ExperimentConfig& cfg,
                                const std::string& method) {
  return Rng::child_seed(cfg.master_seed, 300 + method_tag(method));
}

std::string channels_file_path(const ExperimentConfig& cfg) {
  return cfg.output_dir + "/channels.json";
}

std::string curve_file_path(const ExperimentConfig& cfg,
                            const std::string& method) {
  return cfg.output_dir + "/" + method + ".csv";
}

std::string checkpoint_file_path(const ExperimentConfig& cfg,
                                 const std::string& method,
                                 std::size_t realization_index) {
  return cfg.output_dir + "/model_" + method + "_r" +
         std::to_string(realization_index) + ".json";
}

std::string manifest_file_path(const ExperimentConfig& cfg) {
  return cfg.output_dir + "/manifest.json";
}

void prepare_output_dir(const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + cfg.output_dir +
                  "': " + ec.message());
  const std::string probe = cfg.output_dir + "/.write_probe";
  {
    std::ofstream out(probe, std::ios::trunc);
    if (!out || !(out << "ok"))
      throw IoError("output directory '" + cfg.output_dir +
                    "' is not writable");
  }
  std::remove(probe.c_str());
}

std::vector<ChannelRealization> generate_experiment_channels(
    const ExperimentConfig& cfg, bool save) {
  const auto set = generate_channel_set(cfg.system, cfg.channel.geometry,
                                        cfg.channel.realizations,
                                        Rng(channel_seed(cfg)));
  if (save)
    save_channel_set(channels_file_path(cfg), cfg.system, cfg.channel.geometry,
                     cfg.master_seed, set);
  return set;
}

TrainedMethod train_method(const ExperimentConfig& cfg,
                           const std::string& method,
                           const std::vector<ChannelRealization>& channels) {
  if (!is_dnhb_method(method))
    throw ConfigError("train_method: '" + method + "' is not trainable");
  const AnalogTopology topology = method == "dnhb_partial"
                                      ? AnalogTopology::kPartiallyConnected
                                      : AnalogTopology::kFullyConnected;
  const Constellation spec = Constellation::from_name(cfg.constellation);

  auto train_one = [&](std::size_t idx) {
    const std::uint64_t seed = method_train_seed(cfg, method, idx);
    Rng build_rng(Rng::child_seed(seed, 0));
    DnhbModel model = build_model(cfg.system, topology, ModelMode::kNonlinear,
                                  build_rng);
    TrainConfig tc = effective_training(cfg);
    tc.seed = Rng::child_seed(seed, 1);
    TrainingReport report = train(model, channels[idx], tc, spec);
    return std::make_pair(std::move(model), std::move(report));
  };

  TrainedMethod out;
  out.method = method;
  out.models.resize(channels.size());
  out.reports.resize(channels.size());
  for (std::size_t start = 0; start < channels.size(); start += cfg.jobs) {
    const std::size_t end = std::min(start + cfg.jobs, channels.size());
    std::vector<std::future<std::pair<DnhbModel, TrainingReport>>> wave;
    for (std::size_t i = start; i < end; ++i)
      wave.push_back(std::async(std::launch::async, train_one, i));
    for (std::size_t i = start; i < end; ++i) {
      auto [model, report] = wave[i - start].get();
      out.models[i] = std::move(model);
      out.reports[i] = std::move(report);
    }
  }
  return out;
}

void save_method_checkpoints(const ExperimentConfig& cfg,
                             const TrainedMethod& trained) {
  for (std::size_t i = 0; i < trained.models.size(); ++i)
    save_model(checkpoint_file_path(cfg, trained.method, i), trained.models[i],
               method_train_seed(cfg, trained.method, i),
               trained.reports[i].final_loss);
}

std::optional<TrainedMethod> load_method_checkpoints(
    const ExperimentConfig& cfg, const std::string& method,
    std::size_t realization_count) {
  TrainedMethod out;
  out.method = method;
  for (std::size_t i = 0; i < realization_count; ++i) {
    const std::string path = checkpoint_file_path(cfg, method, i);
    if (!std::filesystem::exists(path)) return std::nullopt;
    LoadedModel loaded = load_model(path);
    out.models.push_back(std::move(loaded.model));
    TrainingReport report;
    report.final_loss = loaded.final_loss;
    report.epoch_loss = {loaded.final_loss};
    out.reports.push_back(std::move(report));
  }
  return out;
}

BerCurve sweep_method(const ExperimentConfig& cfg, const std::string& method,
                      const std::vector<ChannelRealization>& channels,
                      const TrainedMethod* trained) {
  const Constellation spec = Constellation::from_name(cfg.constellation);
  TransceiverFactory factory;
  if (is_dnhb_method(method)) {
    if (!trained || trained->models.size() != channels.size())
      throw ConfigError("sweep_method: '" + method +
                        "' needs one trained model per realization");
    factory = [&, method](const ChannelRealization& realization,
                          std::uint64_t) -> std::unique_ptr<Transceiver> {
      const std::size_t idx =
          realization_index(realization, trained->models.size());
      return std::make_unique<DnhbTransceiver>(trained->models[idx],
                                               realization, method);
    };
  } else if (method == "bd_full_digital") {
    factory = [&](const ChannelRealization& realization,
                  std::uint64_t) -> std::unique_ptr<Transceiver> {
      return std::make_unique<FixedLinearTransceiver>(
          bd_full_digital(realization, cfg.system), realization, cfg.system);
    };
  } else if (method == "omp_hybrid") {
    factory = [&](const ChannelRealization& realization,
                  std::uint64_t) -> std::unique_ptr<Transceiver> {
      return std::make_unique<OmpHybridTransceiver>(
          omp_hybrid_solution(realization, cfg.system), realization,
          cfg.system);
    };
  } else {
    throw ConfigError("sweep_method: unknown method '" + method + "'");
  }

  return snr_sweep(factory, channels, cfg.sweep.snr_db, cfg.sweep.bits_per_point,
                   spec, method_sweep_seed(cfg, method), cfg.jobs);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  prepare_output_dir(cfg);

  // Present while the run is in flight; an aborted run leaves it behind to
  // mark the directory's outputs as partial.
  const std::string incomplete_marker = cfg.output_dir + "/.incomplete";
  {
    std::ofstream marker(incomplete_marker, std::ios::trunc);
    marker << "run in progress\n";
  }

  ExperimentResult result;
  const auto channels = generate_experiment_channels(cfg, /*save=*/true);
  result.channels_file = channels_file_path(cfg);

  nlohmann::json manifest;
  manifest["format_version"] = kManifestFormatVersion;
  manifest["config"] = config_to_json(cfg);
  manifest["channels_file"] = result.channels_file;
  nlohmann::json curves = nlohmann::json::object();
  nlohmann::json training_summary = nlohmann::json::object();
  nlohmann::json checkpoints = nlohmann::json::object();

  for (const auto& method : cfg.methods) {
    std::optional<TrainedMethod> trained;
    if (is_dnhb_method(method)) {
      trained = train_method(cfg, method, channels);
      save_method_checkpoints(cfg, *trained);
      nlohmann::json losses = nlohmann::json::array();
      nlohmann::json files = nlohmann::json::array();
      for (std::size_t i = 0; i < trained->models.size(); ++i) {
        losses.push_back(trained->reports[i].final_loss);
        files.push_back(checkpoint_file_path(cfg, method, i));
      }
      training_summary[method] = {{"final_loss", losses}};
      checkpoints[method] = files;
    }
    const BerCurve curve =
        sweep_method(cfg, method, channels, trained ? &*trained : nullptr);
    const std::string path = curve_file_path(cfg, method);
    write_ber_csv(path, curve);
    result.curve_files.push_back(path);
    curves[method] = path;
  }

  manifest["curves"] = curves;
  manifest["training"] = training_summary;
  manifest["checkpoints"] = checkpoints;
  result.manifest_file = manifest_file_path(cfg);
  save_json_file(result.manifest_file, manifest);
  std::remove(incomplete_marker.c_str());
  return result;
}

std::optional<double> snr_at_ber(const BerCurve& curve, double target) {
  if (!(target > 0.0)) throw ConfigError("snr_at_ber: target must be positive");
  // Floor zero-error points at a half error so the log interpolation works.
  auto effective_ber = [&](std::size_t i) {
    const double floor = 0.5 / static_cast<double>(curve.bits[i]);
    return std::max(curve.ber(i), floor);
  };
  for (std::size_t i = 0; i + 1 < curve.snr_db.size(); ++i) {
    const double hi = effective_ber(i);
    const double lo = effective_ber(i + 1);
    if (hi >= target && target >= lo) {
      if (hi == lo) return curve.snr_db[i];
      const double t =
          (std::log(hi) - std::log(target)) / (std::log(hi) - std::log(lo));
      return curve.snr_db[i] + t * (curve.snr_db[i + 1] - curve.snr_db[i]);
    }
  }
  if (!curve.snr_db.empty() && effective_ber(0) <= target)
    return curve.snr_db.front();
  return std::nullopt;
}

Comparison compare_curves(const std::vector<BerCurve>& curves,
                          double reference_ber) {
  if (curves.size() < 2)
    throw ConfigError("compare: need at least two curves, got " +
                      std::to_string(curves.size()));

  Comparison cmp;
  cmp.reference_ber = reference_ber;
  for (const auto& curve : curves) cmp.methods.push_back(curve.method);

  // Intersection of the SNR grids, in the first curve's order.
  for (std::size_t p = 0; p < curves[0].snr_db.size(); ++p) {
    const double snr = curves[0].snr_db[p];
    bool everywhere = true;
    for (std::size_t c = 1; c < curves.size() && everywhere; ++c) {
      bool found = false;
      for (double v : curves[c].snr_db)
        if (v == snr) {
          found = true;
          break;
        }
      everywhere = found;
    }
    if (everywhere) cmp.snr_db.push_back(snr);
  }
  if (cmp.snr_db.empty())
    throw ConfigError("compare: the curves' SNR grids do not overlap");

  cmp.ber.resize(curves.size());
  for (std::size_t c = 0; c < curves.size(); ++c)
    for (double snr : cmp.snr_db)
      for (std::size_t p = 0; p < curves[c].snr_db.size(); ++p)
        if (curves[c].snr_db[p] == snr) {
          cmp.ber[c].push_back(curves[c].ber(p));
          break;
        }

  for (std::size_t c = 0; c < curves.size(); ++c)
    cmp.snr_at_reference.push_back(snr_at_ber(curves[c], reference_ber));
  for (std::size_t c = 0; c < curves.size(); ++c) {
    if (cmp.snr_at_reference[0] && cmp.snr_at_reference[c])
      cmp.gap_db_vs_first.push_back(*cmp.snr_at_reference[c] -
                                    *cmp.snr_at_reference[0]);
    else
      cmp.gap_db_vs_first.push_back(std::nullopt);
  }
  return cmp;
}

std::string Comparison::to_text() const {
  std::ostringstream out;
  out << "snr_db";
  for (const auto& m : methods) out << "," << m;
  out << "\n";
  char buf[64];
  for (std::size_t p = 0; p < snr_db.size(); ++p) {
    std::snprintf(buf, sizeof(buf), "%g", snr_db[p]);
    out << buf;
    for (std::size_t c = 0; c < methods.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.6e", ber[c][p]);
      out << "," << buf;
    }
    out << "\n";
  }
  std::snprintf(buf, sizeof(buf), "%g", reference_ber);
  out << "\nSNR at BER " << buf << ":\n";
  for (std::size_t c = 0; c < methods.size(); ++c) {
    out << "  " << methods[c] << ": ";
    if (snr_at_reference[c]) {
      std::snprintf(buf, sizeof(buf), "%.2f dB", *snr_at_reference[c]);
      out << buf;
    } else {
      out << "not reached";
    }
    if (c > 0 && gap_db_vs_first[c]) {
      std::snprintf(buf, sizeof(buf), " (%+.2f dB vs %s)", *gap_db_vs_first[c],
                    methods[0].c_str());
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace dnhb
