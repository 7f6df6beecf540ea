#include "dnhb/model.hpp"

#include <cmath>
#include <string>

#include "dnhb/errors.hpp"
#include "dnhb/serialize.hpp"

namespace dnhb {

namespace {

constexpr int kModelFormatVersion = 1;
constexpr double kTwoPi = 6.283185307179586476925286766559;

ComplexDenseLayer make_dense(std::size_t out_dim, std::size_t in_dim,
                             Activation act, Rng& rng) {
  ComplexDenseLayer layer;
  layer.weights = ComplexMatrix(out_dim, in_dim);
  layer.bias = ComplexMatrix(out_dim, 1);
  layer.activation = act;
  const double bound = std::sqrt(1.0 / static_cast<double>(in_dim));
  for (std::size_t i = 0; i < out_dim; ++i)
    for (std::size_t j = 0; j < in_dim; ++j) {
      layer.weights.re(i, j) = rng.uniform(-bound, bound);
      layer.weights.im(i, j) = rng.uniform(-bound, bound);
    }
  return layer;
}

// A digital stage of `layers` dense layers from in_dim to out_dim, hidden
// width max(in_dim, out_dim); hidden activations tanh in nonlinear mode.
std::vector<ComplexDenseLayer> make_digital_stage(std::size_t in_dim,
                                                  std::size_t out_dim,
                                                  std::size_t layers,
                                                  ModelMode mode, Rng& rng) {
  const std::size_t hidden = std::max(in_dim, out_dim);
  std::vector<ComplexDenseLayer> stage;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t li = (l == 0) ? in_dim : hidden;
    const std::size_t lo = (l + 1 == layers) ? out_dim : hidden;
    const bool is_output = (l + 1 == layers);
    const Activation act = (mode == ModelMode::kNonlinear && !is_output)
                               ? Activation::kTanh
                               : Activation::kIdentity;
    stage.push_back(make_dense(lo, li, act, rng));
  }
  return stage;
}

void init_phases(PhaseShiftLayer& layer, Rng& rng) {
  for (double& th : layer.phases) th = rng.uniform(0.0, kTwoPi);
}

void check_chain(const std::vector<ComplexDenseLayer>& stage,
                 std::size_t in_dim, std::size_t out_dim,
                 const std::string& name) {
  if (stage.empty()) throw ConfigError("model: " + name + " has no layers");
  if (stage.front().in_dim() != in_dim)
    throw ConfigError("model: " + name + "[0] expects input dim " +
                      std::to_string(stage.front().in_dim()) +
                      ", config needs " + std::to_string(in_dim));
  for (std::size_t l = 0; l + 1 < stage.size(); ++l)
    if (stage[l].out_dim() != stage[l + 1].in_dim())
      throw ConfigError("model: " + name + "[" + std::to_string(l) +
                        "] output dim " + std::to_string(stage[l].out_dim()) +
                        " does not feed layer " + std::to_string(l + 1));
  if (stage.back().out_dim() != out_dim)
    throw ConfigError("model: " + name + " final output dim " +
                      std::to_string(stage.back().out_dim()) +
                      ", config needs " + std::to_string(out_dim));
}

void check_linear_stage(const std::vector<ComplexDenseLayer>& stage,
                        const std::string& name) {
  for (std::size_t l = 0; l < stage.size(); ++l)
    if (stage[l].activation != Activation::kIdentity)
      throw ConfigError("model: linear mode requires identity activations, " +
                        name + "[" + std::to_string(l) + "] is nonlinear");
}

void check_zero_bias_stage(const std::vector<ComplexDenseLayer>& stage,
                           const std::string& name) {
  for (const auto& layer : stage) {
    for (double v : layer.bias.re_data())
      if (v != 0.0)
        throw ConfigError("linear-mode model carries a nonzero bias in " +
                          name);
    for (double v : layer.bias.im_data())
      if (v != 0.0)
        throw ConfigError("linear-mode model carries a nonzero bias in " +
                          name);
  }
}

// Parameter walk. visit_model_params and visit_gradient_params must stay in
// the same block order; the optimizer, flatten/set and the checkpoint format
// all rely on the alignment.
template <typename Fn>
void visit_model_params(DnhbModel& m, Fn&& fn) {
  for (std::size_t l = 0; l < m.tx_digital.size(); ++l) {
    const std::string base = "tx_digital[" + std::to_string(l) + "]";
    fn(base + ".w_re", ParamKind::kDenseWeight,
       m.tx_digital[l].weights.re_data());
    fn(base + ".w_im", ParamKind::kDenseWeight,
       m.tx_digital[l].weights.im_data());
    fn(base + ".b_re", ParamKind::kDenseBias, m.tx_digital[l].bias.re_data());
    fn(base + ".b_im", ParamKind::kDenseBias, m.tx_digital[l].bias.im_data());
  }
  fn("tx_analog.phases", ParamKind::kPhase, m.tx_analog.phases);
  for (std::size_t k = 0; k < m.receivers.size(); ++k) {
    const std::string user = "rx[" + std::to_string(k) + "]";
    fn(user + ".analog.phases", ParamKind::kPhase,
       m.receivers[k].analog.phases);
    for (std::size_t l = 0; l < m.receivers[k].digital.size(); ++l) {
      const std::string base = user + ".digital[" + std::to_string(l) + "]";
      auto& layer = m.receivers[k].digital[l];
      fn(base + ".w_re", ParamKind::kDenseWeight, layer.weights.re_data());
      fn(base + ".w_im", ParamKind::kDenseWeight, layer.weights.im_data());
      fn(base + ".b_re", ParamKind::kDenseBias, layer.bias.re_data());
      fn(base + ".b_im", ParamKind::kDenseBias, layer.bias.im_data());
    }
  }
}

template <typename Fn>
void visit_gradient_params(ModelGradients& g, Fn&& fn) {
  for (std::size_t l = 0; l < g.tx_digital.size(); ++l) {
    const std::string base = "tx_digital[" + std::to_string(l) + "]";
    fn(base + ".w_re", ParamKind::kDenseWeight,
       g.tx_digital[l].weights.re_data());
    fn(base + ".w_im", ParamKind::kDenseWeight,
       g.tx_digital[l].weights.im_data());
    fn(base + ".b_re", ParamKind::kDenseBias, g.tx_digital[l].bias.re_data());
    fn(base + ".b_im", ParamKind::kDenseBias, g.tx_digital[l].bias.im_data());
  }
  fn("tx_analog.phases", ParamKind::kPhase, g.tx_analog_phases);
  for (std::size_t k = 0; k < g.receivers.size(); ++k) {
    const std::string user = "rx[" + std::to_string(k) + "]";
    fn(user + ".analog.phases", ParamKind::kPhase,
       g.receivers[k].analog_phases);
    for (std::size_t l = 0; l < g.receivers[k].digital.size(); ++l) {
      const std::string base = user + ".digital[" + std::to_string(l) + "]";
      auto& layer = g.receivers[k].digital[l];
      fn(base + ".w_re", ParamKind::kDenseWeight, layer.weights.re_data());
      fn(base + ".w_im", ParamKind::kDenseWeight, layer.weights.im_data());
      fn(base + ".b_re", ParamKind::kDenseBias, layer.bias.re_data());
      fn(base + ".b_im", ParamKind::kDenseBias, layer.bias.im_data());
    }
  }
}

void check_realization(const DnhbModel& model,
                       const ChannelRealization& realization) {
  if (realization.per_user.size() != model.cfg.k_users)
    throw ShapeError("forward: realization has " +
                     std::to_string(realization.per_user.size()) +
                     " users, model config has " +
                     std::to_string(model.cfg.k_users));
  for (std::size_t k = 0; k < realization.per_user.size(); ++k) {
    const auto& h = realization.per_user[k].h;
    if (h.rows() != model.cfg.n_r || h.cols() != model.cfg.n_t)
      throw ShapeError("forward: user " + std::to_string(k) + " channel is " +
                       shape_string(h) + ", model config needs " +
                       std::to_string(model.cfg.n_r) + "x" +
                       std::to_string(model.cfg.n_t));
  }
}

}  // namespace

DnhbModel build_model(const SystemConfig& cfg, AnalogTopology topology,
                      ModelMode mode, Rng& init_rng,
                      std::size_t digital_layers) {
  cfg.validate();
  if (digital_layers == 0)
    throw ConfigError("build_model: need at least one digital layer");
  DnhbModel m;
  m.cfg = cfg;
  m.mode = mode;
  m.topology = topology;
  m.tx_digital = make_digital_stage(cfg.total_streams(), cfg.n_rf_t,
                                    digital_layers, mode, init_rng);
  m.tx_analog = make_phase_shift_layer(topology, cfg.n_rf_t, cfg.n_t);
  init_phases(m.tx_analog, init_rng);
  m.receivers.resize(cfg.k_users);
  for (auto& user : m.receivers) {
    user.analog = make_phase_shift_layer(topology, cfg.n_r, cfg.n_rf_r);
    init_phases(user.analog, init_rng);
    user.digital =
        make_digital_stage(cfg.n_rf_r, cfg.n_s, digital_layers, mode, init_rng);
  }
  validate_model(m);
  return m;
}

void validate_model(const DnhbModel& model) {
  model.cfg.validate();
  check_chain(model.tx_digital, model.cfg.total_streams(), model.cfg.n_rf_t,
              "tx_digital");
  if (model.tx_analog.in_dim != model.cfg.n_rf_t ||
      model.tx_analog.out_dim != model.cfg.n_t)
    throw ConfigError("model: tx_analog maps " +
                      std::to_string(model.tx_analog.in_dim) + "->" +
                      std::to_string(model.tx_analog.out_dim) +
                      ", config needs " + std::to_string(model.cfg.n_rf_t) +
                      "->" + std::to_string(model.cfg.n_t));
  if (model.receivers.size() != model.cfg.k_users)
    throw ConfigError("model: has " + std::to_string(model.receivers.size()) +
                      " receivers, config needs " +
                      std::to_string(model.cfg.k_users));
  for (std::size_t k = 0; k < model.receivers.size(); ++k) {
    const auto& user = model.receivers[k];
    if (user.analog.in_dim != model.cfg.n_r ||
        user.analog.out_dim != model.cfg.n_rf_r)
      throw ConfigError("model: rx[" + std::to_string(k) + "] analog maps " +
                        std::to_string(user.analog.in_dim) + "->" +
                        std::to_string(user.analog.out_dim) +
                        ", config needs " + std::to_string(model.cfg.n_r) +
                        "->" + std::to_string(model.cfg.n_rf_r));
    check_chain(user.digital, model.cfg.n_rf_r, model.cfg.n_s,
                "rx[" + std::to_string(k) + "].digital");
  }
  if (model.mode == ModelMode::kLinear) {
    check_linear_stage(model.tx_digital, "tx_digital");
    for (std::size_t k = 0; k < model.receivers.size(); ++k)
      check_linear_stage(model.receivers[k].digital,
                         "rx[" + std::to_string(k) + "].digital");
  }
}

std::vector<ComplexMatrix> model_forward(const DnhbModel& model,
                                         const ComplexMatrix& symbols,
                                         const ChannelRealization& realization,
                                         const ChannelNoise& noise,
                                         ForwardCache* cache) {
  validate_model(model);
  check_realization(model, realization);
  if (symbols.rows() != model.cfg.total_streams())
    throw ShapeError("forward: symbol batch " + shape_string(symbols) +
                     " does not carry k_users*n_s = " +
                     std::to_string(model.cfg.total_streams()) + " streams");

  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.batch = symbols.cols();
  c.tx_digital.resize(model.tx_digital.size());
  c.rx_analog.resize(model.receivers.size());
  c.rx_digital.resize(model.receivers.size());
  c.outputs.clear();
  c.noise = noise;
  c.channels.clear();
  for (const auto& user : realization.per_user) c.channels.push_back(user.h);

  ComplexMatrix x = symbols;
  for (std::size_t l = 0; l < model.tx_digital.size(); ++l)
    x = dense_forward(model.tx_digital[l], x, &c.tx_digital[l]);
  x = phase_forward(model.tx_analog, x, &c.tx_analog);
  x = power_normalize_forward(x, model.cfg.power_budget, &c.power);
  const ComplexMatrix stacked = channel_forward(realization, x, c.noise);
  const std::vector<ComplexMatrix> per_user =
      split_users(stacked, model.cfg.k_users);

  std::vector<ComplexMatrix> outputs;
  outputs.reserve(model.receivers.size());
  for (std::size_t k = 0; k < model.receivers.size(); ++k) {
    ComplexMatrix u =
        phase_forward(model.receivers[k].analog, per_user[k], &c.rx_analog[k]);
    c.rx_digital[k].resize(model.receivers[k].digital.size());
    for (std::size_t l = 0; l < model.receivers[k].digital.size(); ++l)
      u = dense_forward(model.receivers[k].digital[l], u, &c.rx_digital[k][l]);
    outputs.push_back(std::move(u));
  }
  c.outputs = outputs;
  return outputs;
}

std::vector<ComplexMatrix> model_forward(const DnhbModel& model,
                                         const ComplexMatrix& symbols,
                                         const ChannelRealization& realization,
                                         double noise_variance, Rng& rng,
                                         ForwardCache* cache) {
  ChannelNoise noise =
      draw_channel_noise(realization, symbols.cols(), noise_variance, rng);
  return model_forward(model, symbols, realization, noise, cache);
}

double sum_mse_loss(const ComplexMatrix& sent, const ComplexMatrix& received) {
  if (!sent.same_shape(received))
    throw ShapeError("loss: sent " + shape_string(sent) + " vs received " +
                     shape_string(received));
  if (sent.cols() == 0) throw ShapeError("loss: empty batch");
  return frobenius_norm_sq(subtract(sent, received)) /
         static_cast<double>(sent.cols());
}

double sum_mse_loss(const ComplexMatrix& sent,
                    const std::vector<ComplexMatrix>& received_per_user) {
  return sum_mse_loss(sent, concat_users(received_per_user));
}

ModelGradients model_backward(const DnhbModel& model, const ForwardCache& cache,
                              const ComplexMatrix& sent_symbols) {
  if (cache.outputs.size() != model.receivers.size() ||
      cache.tx_digital.size() != model.tx_digital.size() ||
      cache.channels.size() != model.cfg.k_users)
    throw ShapeError("backward: cache does not match model (stale cache?)");
  if (sent_symbols.rows() != model.cfg.total_streams() ||
      sent_symbols.cols() != cache.batch)
    throw ShapeError("backward: sent symbols " + shape_string(sent_symbols) +
                     " do not match cached batch of " +
                     std::to_string(cache.batch));

  const double inv_batch = 1.0 / static_cast<double>(cache.batch);
  const std::vector<ComplexMatrix> sent_split =
      split_users(sent_symbols, model.cfg.k_users);

  ModelGradients grads;
  grads.tx_digital.resize(model.tx_digital.size());
  grads.receivers.resize(model.receivers.size());

  // Per-user upstream dL/dS~ = (2/B)(S~ - S) back through the combiner
  // stacks, then H_k^H into the shared transmit path.
  ComplexMatrix d_transmit(model.cfg.n_t, cache.batch);
  for (std::size_t k = 0; k < model.receivers.size(); ++k) {
    ComplexMatrix up =
        scale(subtract(cache.outputs[k], sent_split[k]), 2.0 * inv_batch);
    const auto& user = model.receivers[k];
    grads.receivers[k].digital.resize(user.digital.size());
    for (std::size_t l = user.digital.size(); l-- > 0;)
      up = dense_backward(user.digital[l], cache.rx_digital[k][l], up,
                          &grads.receivers[k].digital[l]);
    up = phase_backward(user.analog, cache.rx_analog[k], up,
                        &grads.receivers[k].analog_phases);
    d_transmit = add(d_transmit, multiply(hermitian(cache.channels[k]), up));
  }

  ComplexMatrix d = power_normalize_backward(cache.power, d_transmit);
  d = phase_backward(model.tx_analog, cache.tx_analog, d,
                     &grads.tx_analog_phases);
  for (std::size_t l = model.tx_digital.size(); l-- > 0;)
    d = dense_backward(model.tx_digital[l], cache.tx_digital[l], d,
                       &grads.tx_digital[l]);
  return grads;
}

std::vector<ParamBlockInfo> parameter_layout(const DnhbModel& model) {
  std::vector<ParamBlockInfo> layout;
  std::size_t offset = 0;
  auto& m = const_cast<DnhbModel&>(model);  // read-only walk
  visit_model_params(m, [&](const std::string& name, ParamKind kind,
                            std::vector<double>& data) {
    layout.push_back({name, kind, offset, data.size()});
    offset += data.size();
  });
  return layout;
}

std::size_t parameter_count(const DnhbModel& model) {
  std::size_t count = 0;
  auto& m = const_cast<DnhbModel&>(model);
  visit_model_params(m, [&](const std::string&, ParamKind,
                            std::vector<double>& data) { count += data.size(); });
  return count;
}

std::vector<double> flatten_parameters(const DnhbModel& model) {
  std::vector<double> flat;
  flat.reserve(parameter_count(model));
  auto& m = const_cast<DnhbModel&>(model);
  visit_model_params(m, [&](const std::string&, ParamKind,
                            std::vector<double>& data) {
    flat.insert(flat.end(), data.begin(), data.end());
  });
  return flat;
}

void set_parameters(DnhbModel& model, const std::vector<double>& flat) {
  std::size_t offset = 0;
  visit_model_params(model, [&](const std::string& name, ParamKind,
                                std::vector<double>& data) {
    if (offset + data.size() > flat.size())
      throw ShapeError("set_parameters: flat vector too short at block " + name);
    std::copy(flat.begin() + offset, flat.begin() + offset + data.size(),
              data.begin());
    offset += data.size();
  });
  if (offset != flat.size())
    throw ShapeError("set_parameters: flat vector has " +
                     std::to_string(flat.size()) + " entries, model needs " +
                     std::to_string(offset));
}

std::vector<double> flatten_gradients(const ModelGradients& grads,
                                      const DnhbModel& model) {
  std::vector<double> flat;
  flat.reserve(parameter_count(model));
  auto& g = const_cast<ModelGradients&>(grads);
  visit_gradient_params(g, [&](const std::string&, ParamKind,
                               std::vector<double>& data) {
    flat.insert(flat.end(), data.begin(), data.end());
  });
  if (flat.size() != parameter_count(model))
    throw ShapeError("flatten_gradients: gradient structure does not match "
                     "model parameters");
  return flat;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0))
    throw ConfigError("train config: learning_rate must be positive");
  if (batch_size < 1) throw ConfigError("train config: batch_size must be >= 1");
  if (epochs < 1) throw ConfigError("train config: epochs must be >= 1");
  if (steps_per_epoch < 1)
    throw ConfigError("train config: steps_per_epoch must be >= 1");
  if (train_snr_db_max < train_snr_db_min)
    throw ConfigError("train config: train SNR range is inverted");
  if (optimizer == Optimizer::kAdam) {
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
        !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) || !(adam_epsilon > 0.0))
      throw ConfigError("train config: invalid adam parameters");
  }
}

TrainingReport train(DnhbModel& model, const ChannelRealization& realization,
                     const TrainConfig& cfg,
                     const Constellation& constellation) {
  cfg.validate();
  validate_model(model);

  // Bias entries stay frozen at zero in linear mode so the network remains an
  // exact matrix transceiver.
  const std::vector<ParamBlockInfo> layout = parameter_layout(model);
  std::vector<bool> frozen(parameter_count(model), false);
  if (model.mode == ModelMode::kLinear)
    for (const auto& block : layout)
      if (block.kind == ParamKind::kDenseBias)
        for (std::size_t i = 0; i < block.size; ++i)
          frozen[block.offset + i] = true;

  Rng rng(cfg.seed);
  std::vector<double> adam_m, adam_v;
  if (cfg.optimizer == TrainConfig::Optimizer::kAdam) {
    adam_m.assign(parameter_count(model), 0.0);
    adam_v.assign(parameter_count(model), 0.0);
  }
  std::uint64_t step_count = 0;

  TrainingReport report;
  report.epoch_loss.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_acc = 0.0;
    for (std::size_t step = 0; step < cfg.steps_per_epoch; ++step) {
      const ComplexMatrix symbols = constellation.sample_symbols(
          model.cfg.total_streams(), cfg.batch_size, rng);
      const double snr_db =
          rng.uniform(cfg.train_snr_db_min, cfg.train_snr_db_max);
      const double noise_var =
          model.cfg.power_budget / std::pow(10.0, snr_db / 10.0);
      ForwardCache cache;
      const auto outputs =
          model_forward(model, symbols, realization, noise_var, rng, &cache);
      const double loss = sum_mse_loss(symbols, outputs);
      if (!std::isfinite(loss))
        throw NumericError("train: loss diverged (non-finite) at epoch " +
                           std::to_string(epoch));
      epoch_acc += loss;

      const ModelGradients grads = model_backward(model, cache, symbols);
      std::vector<double> g = flatten_gradients(grads, model);
      std::vector<double> p = flatten_parameters(model);
      ++step_count;
      if (cfg.optimizer == TrainConfig::Optimizer::kAdam) {
        const double b1t = std::pow(cfg.adam_beta1, double(step_count));
        const double b2t = std::pow(cfg.adam_beta2, double(step_count));
        for (std::size_t i = 0; i < p.size(); ++i) {
          if (frozen[i]) continue;
          adam_m[i] = cfg.adam_beta1 * adam_m[i] + (1.0 - cfg.adam_beta1) * g[i];
          adam_v[i] =
              cfg.adam_beta2 * adam_v[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
          const double m_hat = adam_m[i] / (1.0 - b1t);
          const double v_hat = adam_v[i] / (1.0 - b2t);
          p[i] -= cfg.learning_rate * m_hat /
                  (std::sqrt(v_hat) + cfg.adam_epsilon);
        }
      } else {
        for (std::size_t i = 0; i < p.size(); ++i)
          if (!frozen[i]) p[i] -= cfg.learning_rate * g[i];
      }
      set_parameters(model, p);
    }
    report.epoch_loss.push_back(epoch_acc /
                                static_cast<double>(cfg.steps_per_epoch));
  }
  report.final_loss = report.epoch_loss.back();
  return report;
}

ExtractedMatrices extract_matrices(const DnhbModel& model) {
  if (model.mode != ModelMode::kLinear)
    throw ConfigError(
        "extract_matrices: model is in nonlinear mode, matrices only exist "
        "for linear-mode models");
  validate_model(model);
  check_zero_bias_stage(model.tx_digital, "tx_digital");
  for (std::size_t k = 0; k < model.receivers.size(); ++k)
    check_zero_bias_stage(model.receivers[k].digital,
                          "rx[" + std::to_string(k) + "].digital");

  ExtractedMatrices out;
  out.f_analog = phase_coefficient_matrix(model.tx_analog);  // n_t x n_rf_t

  ComplexMatrix f_digital = model.tx_digital.front().weights;
  for (std::size_t l = 1; l < model.tx_digital.size(); ++l)
    f_digital = multiply(model.tx_digital[l].weights, f_digital);
  out.f_digital = f_digital;

  for (const auto& user : model.receivers) {
    // The receiver network applies C = coefficient matrix then D = product of
    // digital weights; the combiner convention wants W_A, W_D with
    // W_D^H W_A^H = D C.
    const ComplexMatrix c = phase_coefficient_matrix(user.analog);
    out.w_analog.push_back(hermitian(c));
    ComplexMatrix d = user.digital.front().weights;
    for (std::size_t l = 1; l < user.digital.size(); ++l)
      d = multiply(user.digital[l].weights, d);
    out.w_digital.push_back(hermitian(d));
  }
  return out;
}

namespace {

nlohmann::json dense_to_json(const ComplexDenseLayer& layer) {
  return nlohmann::json{
      {"weights", matrix_to_json(layer.weights)},
      {"bias", matrix_to_json(layer.bias)},
      {"activation",
       layer.activation == Activation::kTanh ? "tanh" : "identity"}};
}

ComplexDenseLayer dense_from_json(const nlohmann::json& j,
                                  const std::string& ctx) {
  ComplexDenseLayer layer;
  layer.weights = matrix_from_json(require_key(j, "weights", ctx), ctx);
  layer.bias = matrix_from_json(require_key(j, "bias", ctx), ctx);
  const std::string act = require_key(j, "activation", ctx).get<std::string>();
  if (act == "tanh")
    layer.activation = Activation::kTanh;
  else if (act == "identity")
    layer.activation = Activation::kIdentity;
  else
    throw ParseError(ctx + ": unknown activation '" + act + "'");
  return layer;
}

nlohmann::json phase_to_json(const PhaseShiftLayer& layer) {
  return nlohmann::json{
      {"topology", layer.topology == AnalogTopology::kFullyConnected
                       ? "fully_connected"
                       : "partially_connected"},
      {"in_dim", layer.in_dim},
      {"out_dim", layer.out_dim},
      {"phases", layer.phases}};
}

PhaseShiftLayer phase_from_json(const nlohmann::json& j,
                                const std::string& ctx) {
  const std::string topo = require_key(j, "topology", ctx).get<std::string>();
  AnalogTopology topology;
  if (topo == "fully_connected")
    topology = AnalogTopology::kFullyConnected;
  else if (topo == "partially_connected")
    topology = AnalogTopology::kPartiallyConnected;
  else
    throw ParseError(ctx + ": unknown topology '" + topo + "'");
  PhaseShiftLayer layer = make_phase_shift_layer(
      topology, require_key(j, "in_dim", ctx).get<std::size_t>(),
      require_key(j, "out_dim", ctx).get<std::size_t>());
  const auto phases =
      require_key(j, "phases", ctx).get<std::vector<double>>();
  if (phases.size() != layer.phases.size())
    throw ParseError(ctx + ": expected " +
                     std::to_string(layer.phases.size()) + " phases, found " +
                     std::to_string(phases.size()));
  layer.phases = phases;
  return layer;
}

}  // namespace

void save_model(const std::string& path, const DnhbModel& model,
                std::uint64_t training_seed, double final_loss) {
  validate_model(model);
  nlohmann::json j;
  j["format_version"] = kModelFormatVersion;
  j["config"] = system_config_to_json(model.cfg);
  j["mode"] = model.mode == ModelMode::kLinear ? "linear" : "nonlinear";
  j["topology"] = model.topology == AnalogTopology::kFullyConnected
                      ? "fully_connected"
                      : "partially_connected";
  nlohmann::json arch;
  arch["tx_digital_layers"] = model.tx_digital.size();
  arch["rx_digital_layers"] =
      model.receivers.empty() ? 0 : model.receivers.front().digital.size();
  j["architecture"] = arch;
  nlohmann::json tx = nlohmann::json::array();
  for (const auto& layer : model.tx_digital) tx.push_back(dense_to_json(layer));
  j["tx_digital"] = std::move(tx);
  j["tx_analog"] = phase_to_json(model.tx_analog);
  nlohmann::json rx = nlohmann::json::array();
  for (const auto& user : model.receivers) {
    nlohmann::json digital = nlohmann::json::array();
    for (const auto& layer : user.digital)
      digital.push_back(dense_to_json(layer));
    rx.push_back(nlohmann::json{{"analog", phase_to_json(user.analog)},
                                {"digital", std::move(digital)}});
  }
  j["receivers"] = std::move(rx);
  j["training_seed"] = training_seed;
  j["final_loss"] = final_loss;
  save_json_file(path, j);
}

LoadedModel load_model(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  const int version = require_key(j, "format_version", "model").get<int>();
  if (version != kModelFormatVersion)
    throw ParseError(path + ": unsupported model format version " +
                     std::to_string(version) + ", expected " +
                     std::to_string(kModelFormatVersion));
  LoadedModel out;
  out.model.cfg = system_config_from_json(require_key(j, "config", "model"));
  const std::string mode = require_key(j, "mode", "model").get<std::string>();
  if (mode == "linear")
    out.model.mode = ModelMode::kLinear;
  else if (mode == "nonlinear")
    out.model.mode = ModelMode::kNonlinear;
  else
    throw ParseError(path + ": unknown mode '" + mode + "'");
  const std::string topo =
      require_key(j, "topology", "model").get<std::string>();
  if (topo == "fully_connected")
    out.model.topology = AnalogTopology::kFullyConnected;
  else if (topo == "partially_connected")
    out.model.topology = AnalogTopology::kPartiallyConnected;
  else
    throw ParseError(path + ": unknown topology '" + topo + "'");
  for (const auto& lj : require_key(j, "tx_digital", "model"))
    out.model.tx_digital.push_back(dense_from_json(lj, "tx_digital"));
  out.model.tx_analog =
      phase_from_json(require_key(j, "tx_analog", "model"), "tx_analog");
  for (const auto& uj : require_key(j, "receivers", "model")) {
    DnhbModel::UserReceiver user;
    user.analog = phase_from_json(require_key(uj, "analog", "receiver"),
                                  "receiver analog");
    for (const auto& lj : require_key(uj, "digital", "receiver"))
      user.digital.push_back(dense_from_json(lj, "receiver digital"));
    out.model.receivers.push_back(std::move(user));
  }
  out.training_seed =
      require_key(j, "training_seed", "model").get<std::uint64_t>();
  out.final_loss = require_key(j, "final_loss", "model").get<double>();
  validate_model(out.model);
  return out;
}

}  // namespace dnhb
