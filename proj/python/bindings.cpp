// Python bindings for the dnhb core: complex matrices map to/from numpy
// complex128 arrays, everything else is thin wrappers over the C++ API.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>

#include "dnhb/baselines.hpp"
#include "dnhb/ber.hpp"
#include "dnhb/channel.hpp"
#include "dnhb/constellation.hpp"
#include "dnhb/errors.hpp"
#include "dnhb/experiment.hpp"
#include "dnhb/gradient_check.hpp"
#include "dnhb/model.hpp"

namespace py = pybind11;
using namespace dnhb;

namespace {

using ComplexArray = py::array_t<std::complex<double>,
                                 py::array::c_style | py::array::forcecast>;

ComplexMatrix matrix_from_numpy(const ComplexArray& array) {
  if (array.ndim() == 1) {
    ComplexMatrix m(static_cast<std::size_t>(array.shape(0)), 1);
    const auto view = array.unchecked<1>();
    for (py::ssize_t i = 0; i < array.shape(0); ++i)
      m.set(static_cast<std::size_t>(i), 0, view(i));
    return m;
  }
  if (array.ndim() != 2)
    throw ShapeError("expected a 1-d or 2-d complex array");
  ComplexMatrix m(static_cast<std::size_t>(array.shape(0)),
                  static_cast<std::size_t>(array.shape(1)));
  const auto view = array.unchecked<2>();
  for (py::ssize_t i = 0; i < array.shape(0); ++i)
    for (py::ssize_t j = 0; j < array.shape(1); ++j)
      m.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
            view(i, j));
  return m;
}

py::array_t<std::complex<double>> matrix_to_numpy(const ComplexMatrix& m) {
  py::array_t<std::complex<double>> array(
      {static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
  auto view = array.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) =
          m.at(i, j);
  return array;
}

std::vector<py::array_t<std::complex<double>>> matrices_to_numpy(
    const std::vector<ComplexMatrix>& blocks) {
  std::vector<py::array_t<std::complex<double>>> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.push_back(matrix_to_numpy(b));
  return out;
}

AnalogTopology topology_from_name(const std::string& name) {
  if (name == "fully_connected") return AnalogTopology::kFullyConnected;
  if (name == "partially_connected") return AnalogTopology::kPartiallyConnected;
  throw ConfigError("unknown topology '" + name +
                    "', expected fully_connected or partially_connected");
}

ModelMode mode_from_name(const std::string& name) {
  if (name == "linear") return ModelMode::kLinear;
  if (name == "nonlinear") return ModelMode::kNonlinear;
  throw ConfigError("unknown mode '" + name +
                    "', expected linear or nonlinear");
}

}  // namespace

PYBIND11_MODULE(_dnhb, m) {
  m.doc() = "autoencoder hybrid beamforming simulator core";

  py::register_exception<Error>(m, "DnhbError");

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", [](Rng& rng) { return rng.uniform(); })
      .def("gaussian", &Rng::gaussian)
      .def("child", &Rng::child, py::arg("stream_index"))
      .def_property_readonly("seed", &Rng::seed)
      .def_static("child_seed", &Rng::child_seed, py::arg("parent_seed"),
                  py::arg("stream_index"));

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init([](std::size_t n_t, std::size_t n_r, std::size_t n_rf_t,
                       std::size_t n_rf_r, std::size_t n_s, std::size_t k_users,
                       double power_budget, double noise_variance) {
             SystemConfig cfg{n_t, n_r, n_rf_t, n_rf_r, n_s, k_users,
                              power_budget, noise_variance};
             cfg.validate();
             return cfg;
           }),
           py::arg("n_t"), py::arg("n_r"), py::arg("n_rf_t"),
           py::arg("n_rf_r"), py::arg("n_s"), py::arg("k_users"),
           py::arg("power_budget") = 1.0, py::arg("noise_variance") = 1.0)
      .def_readwrite("n_t", &SystemConfig::n_t)
      .def_readwrite("n_r", &SystemConfig::n_r)
      .def_readwrite("n_rf_t", &SystemConfig::n_rf_t)
      .def_readwrite("n_rf_r", &SystemConfig::n_rf_r)
      .def_readwrite("n_s", &SystemConfig::n_s)
      .def_readwrite("k_users", &SystemConfig::k_users)
      .def_readwrite("power_budget", &SystemConfig::power_budget)
      .def_readwrite("noise_variance", &SystemConfig::noise_variance)
      .def("total_streams", &SystemConfig::total_streams)
      .def("validate", &SystemConfig::validate);

  py::class_<ChannelRealization>(m, "ChannelRealization")
      .def_property_readonly("channels",
                             [](const ChannelRealization& real) {
                               std::vector<ComplexMatrix> h;
                               for (const auto& u : real.per_user)
                                 h.push_back(u.h);
                               return matrices_to_numpy(h);
                             })
      .def_readonly("realization_id", &ChannelRealization::realization_id)
      .def_readonly("seed", &ChannelRealization::seed);

  m.def(
      "array_response_ula",
      [](std::size_t n_elements, double angle) {
        return matrix_to_numpy(array_response_ula(n_elements, angle));
      },
      py::arg("n_elements"), py::arg("angle"));

  m.def(
      "generate_channel",
      [](const SystemConfig& cfg, std::size_t n_clusters, std::size_t n_rays,
         double angular_spread_rad, std::uint64_t seed) {
        ChannelGeometryParams geom{n_clusters, n_rays, angular_spread_rad};
        Rng rng(seed);
        return generate_channel(cfg, geom, rng);
      },
      py::arg("cfg"), py::arg("n_clusters") = 2, py::arg("n_rays") = 2,
      py::arg("angular_spread_rad") = 0.17453292519943295, py::arg("seed") = 1);

  m.def(
      "generate_channel_set",
      [](const SystemConfig& cfg, std::size_t count, std::size_t n_clusters,
         std::size_t n_rays, double angular_spread_rad, std::uint64_t seed) {
        ChannelGeometryParams geom{n_clusters, n_rays, angular_spread_rad};
        return generate_channel_set(cfg, geom, count, Rng(seed));
      },
      py::arg("cfg"), py::arg("count"), py::arg("n_clusters") = 2,
      py::arg("n_rays") = 2,
      py::arg("angular_spread_rad") = 0.17453292519943295, py::arg("seed") = 1);

  m.def("randn_complex",
        [](std::size_t rows, std::size_t cols, double variance,
           std::uint64_t seed) {
          Rng rng(seed);
          return matrix_to_numpy(randn_complex(rng, rows, cols, variance));
        },
        py::arg("rows"), py::arg("cols"), py::arg("variance") = 1.0,
        py::arg("seed") = 1);

  py::class_<Constellation>(m, "Constellation")
      .def_static("qpsk", &Constellation::qpsk)
      .def_static("qam16", &Constellation::qam16)
      .def_static("from_name", &Constellation::from_name, py::arg("name"))
      .def_property_readonly("name", &Constellation::name)
      .def_property_readonly("bits_per_symbol", &Constellation::bits_per_symbol)
      .def("modulate", &Constellation::modulate, py::arg("bits"))
      .def("demodulate", &Constellation::demodulate, py::arg("symbols"));

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("steps_per_epoch", &TrainConfig::steps_per_epoch)
      .def_readwrite("train_snr_db_min", &TrainConfig::train_snr_db_min)
      .def_readwrite("train_snr_db_max", &TrainConfig::train_snr_db_max)
      .def_readwrite("seed", &TrainConfig::seed);

  py::class_<TrainingReport>(m, "TrainingReport")
      .def_readonly("epoch_loss", &TrainingReport::epoch_loss)
      .def_readonly("final_loss", &TrainingReport::final_loss);

  py::class_<DnhbModel>(m, "DnhbModel")
      .def_property_readonly("config",
                             [](const DnhbModel& model) { return model.cfg; })
      .def_property_readonly("parameter_count", [](const DnhbModel& model) {
        return parameter_count(model);
      });

  m.def(
      "build_model",
      [](const SystemConfig& cfg, const std::string& topology,
         const std::string& mode, std::uint64_t seed,
         std::size_t digital_layers) {
        Rng rng(seed);
        return build_model(cfg, topology_from_name(topology),
                           mode_from_name(mode), rng, digital_layers);
      },
      py::arg("cfg"), py::arg("topology") = "fully_connected",
      py::arg("mode") = "nonlinear", py::arg("seed") = 1,
      py::arg("digital_layers") = 2);

  m.def(
      "train",
      [](DnhbModel& model, const ChannelRealization& realization,
         const TrainConfig& cfg, const Constellation& constellation) {
        return train(model, realization, cfg, constellation);
      },
      py::arg("model"), py::arg("realization"), py::arg("cfg"),
      py::arg("constellation"));

  m.def(
      "model_forward",
      [](const DnhbModel& model, const ComplexArray& symbols,
         const ChannelRealization& realization, double noise_variance,
         std::uint64_t seed) {
        Rng rng(seed);
        return matrices_to_numpy(model_forward(
            model, matrix_from_numpy(symbols), realization, noise_variance,
            rng));
      },
      py::arg("model"), py::arg("symbols"), py::arg("realization"),
      py::arg("noise_variance") = 0.0, py::arg("seed") = 1);

  m.def(
      "sum_mse_loss",
      [](const ComplexArray& sent, const ComplexArray& received) {
        return sum_mse_loss(matrix_from_numpy(sent),
                            matrix_from_numpy(received));
      },
      py::arg("sent"), py::arg("received"));

  m.def("extract_matrices", [](const DnhbModel& model) {
    const ExtractedMatrices mats = extract_matrices(model);
    py::dict out;
    out["f_analog"] = matrix_to_numpy(mats.f_analog);
    out["f_digital"] = matrix_to_numpy(mats.f_digital);
    out["w_analog"] = matrices_to_numpy(mats.w_analog);
    out["w_digital"] = matrices_to_numpy(mats.w_digital);
    return out;
  });

  m.def("save_model", &save_model, py::arg("path"), py::arg("model"),
        py::arg("training_seed") = 0, py::arg("final_loss") = 0.0);
  m.def("load_model", [](const std::string& path) {
    return load_model(path).model;
  });

  py::class_<LinearTransceiver>(m, "LinearTransceiver")
      .def_readonly("label", &LinearTransceiver::label)
      .def_property_readonly("f_digital",
                             [](const LinearTransceiver& tx) {
                               return matrix_to_numpy(tx.f_digital);
                             })
      .def_property_readonly("f_analog",
                             [](const LinearTransceiver& tx) -> py::object {
                               if (!tx.f_analog) return py::none();
                               return matrix_to_numpy(*tx.f_analog);
                             })
      .def("effective_precoder", [](const LinearTransceiver& tx) {
        return matrix_to_numpy(tx.effective_precoder());
      });

  m.def("bd_full_digital", &bd_full_digital, py::arg("realization"),
        py::arg("cfg"));

  m.def(
      "omp_hybrid",
      [](const ChannelRealization& realization, const SystemConfig& cfg,
         double noise_variance) {
        return omp_transceiver(omp_hybrid_solution(realization, cfg),
                               realization, cfg, noise_variance);
      },
      py::arg("realization"), py::arg("cfg"), py::arg("noise_variance"));

  m.def(
      "evaluate_linear_transceiver",
      [](const LinearTransceiver& tx, const ChannelRealization& realization,
         const ComplexArray& symbols, double noise_variance,
         std::uint64_t seed) {
        Rng rng(seed);
        return matrices_to_numpy(evaluate_linear_transceiver(
            tx, realization, matrix_from_numpy(symbols), noise_variance, rng));
      },
      py::arg("tx"), py::arg("realization"), py::arg("symbols"),
      py::arg("noise_variance") = 0.0, py::arg("seed") = 1);

  m.def(
      "ber_trial_model",
      [](const DnhbModel& model, const ChannelRealization& realization,
         double snr_db, std::uint64_t n_bits, const Constellation& spec,
         std::uint64_t seed) {
        Rng rng(seed);
        const TrialResult r =
            ber_trial(model, realization, snr_db, n_bits, spec, rng);
        return py::make_tuple(r.errors, r.bits);
      },
      py::arg("model"), py::arg("realization"), py::arg("snr_db"),
      py::arg("n_bits"), py::arg("constellation"), py::arg("seed") = 1);

  m.def(
      "ber_trial_linear",
      [](const LinearTransceiver& tx, const ChannelRealization& realization,
         const SystemConfig& cfg, double snr_db, std::uint64_t n_bits,
         const Constellation& spec, std::uint64_t seed) {
        Rng rng(seed);
        const TrialResult r =
            ber_trial(tx, realization, cfg, snr_db, n_bits, spec, rng);
        return py::make_tuple(r.errors, r.bits);
      },
      py::arg("tx"), py::arg("realization"), py::arg("cfg"), py::arg("snr_db"),
      py::arg("n_bits"), py::arg("constellation"), py::arg("seed") = 1);

  m.def(
      "finite_diff_gradient",
      [](const py::function& f, const std::vector<double>& params,
         double step) {
        return finite_diff_gradient(
            [&](const std::vector<double>& p) {
              return f(p).cast<double>();
            },
            params, step);
      },
      py::arg("f"), py::arg("params"), py::arg("step") = 1e-6);

  m.def("run_experiment_file", [](const std::string& config_path) {
    const ExperimentConfig cfg = parse_config(config_path);
    const ExperimentResult result = run_experiment(cfg);
    py::dict out;
    out["channels_file"] = result.channels_file;
    out["curve_files"] = result.curve_files;
    out["manifest_file"] = result.manifest_file;
    return out;
  });
}
