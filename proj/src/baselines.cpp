#include "dnhb/baselines.hpp"

#include <cmath>
#include <complex>

#include "dnhb/errors.hpp"
#include "dnhb/linalg.hpp"

namespace dnhb {

namespace {

using cd = std::complex<double>;

// Stacks the channels of every user except `skip` into one tall matrix.
ComplexMatrix stack_other_channels(const ChannelRealization& realization,
                                   std::size_t skip) {
  const std::size_t n_r = realization.per_user.front().h.rows();
  const std::size_t n_t = realization.per_user.front().h.cols();
  ComplexMatrix stacked((realization.per_user.size() - 1) * n_r, n_t);
  std::size_t row = 0;
  for (std::size_t l = 0; l < realization.per_user.size(); ++l) {
    if (l == skip) continue;
    for (std::size_t i = 0; i < n_r; ++i, ++row)
      for (std::size_t j = 0; j < n_t; ++j)
        stacked.set(row, j, realization.per_user[l].h.at(i, j));
  }
  return stacked;
}

ComplexMatrix take_columns(const ComplexMatrix& m, std::size_t first,
                           std::size_t count) {
  ComplexMatrix out(m.rows(), count);
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      out.set(i, j, m.at(i, first + j));
  return out;
}

}  // namespace

ComplexMatrix LinearTransceiver::effective_precoder() const {
  return full_digital() ? f_digital : multiply(*f_analog, f_digital);
}

void LinearTransceiver::validate(const SystemConfig& cfg) const {
  const double power = frobenius_norm_sq(effective_precoder());
  if (power > cfg.power_budget + 1e-9)
    throw ConfigError("linear transceiver '" + label +
                      "' exceeds the power budget: tr{FF^H} = " +
                      std::to_string(power));
  auto check_unit = [this](const ComplexMatrix& m, const std::string& what) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const double mod2 = m.re(i, j) * m.re(i, j) + m.im(i, j) * m.im(i, j);
        if (std::abs(mod2 - 1.0) > 1e-12)
          throw ConfigError("linear transceiver '" + label + "': " + what +
                            " entry without unit modulus");
      }
  };
  if (f_analog) check_unit(*f_analog, "analog precoder");
  for (const auto& w : w_analog) check_unit(w, "analog combiner");
}

LinearTransceiver bd_full_digital(const ChannelRealization& realization,
                                  const SystemConfig& cfg) {
  cfg.validate();
  const std::size_t k_users = realization.per_user.size();
  if (k_users != cfg.k_users)
    throw ConfigError("bd_full_digital: realization/config user mismatch");
  if (cfg.n_t < cfg.k_users * cfg.n_r)
    throw ConfigError(
        "bd_full_digital: infeasible config, null-space construction needs "
        "n_t >= k_users*n_r (got n_t = " +
        std::to_string(cfg.n_t) + ", k_users*n_r = " +
        std::to_string(cfg.k_users * cfg.n_r) + ")");

  const double stream_power =
      cfg.power_budget / static_cast<double>(cfg.total_streams());
  LinearTransceiver tx;
  tx.label = "bd_full_digital";
  tx.f_digital = ComplexMatrix(cfg.n_t, cfg.total_streams());

  for (std::size_t k = 0; k < k_users; ++k) {
    // Precoder columns live in the null space of the other users' channels.
    ComplexMatrix null_basis;
    if (k_users == 1) {
      null_basis = ComplexMatrix::identity(cfg.n_t);
    } else {
      null_basis = linalg::null_space(stack_other_channels(realization, k));
    }
    const ComplexMatrix projected =
        multiply(realization.per_user[k].h, null_basis);
    const linalg::Svd decomp = linalg::svd(projected);
    if (decomp.singular_values.size() < cfg.n_s)
      throw ConfigError("bd_full_digital: projected channel of user " +
                        std::to_string(k) + " supports fewer than n_s streams");

    // F_k = null_basis * V_s, unit columns, scaled to the per-stream power.
    const ComplexMatrix v_s = take_columns(decomp.v, 0, cfg.n_s);
    const ComplexMatrix f_k =
        scale(multiply(null_basis, v_s), std::sqrt(stream_power));
    for (std::size_t j = 0; j < cfg.n_s; ++j)
      for (std::size_t i = 0; i < cfg.n_t; ++i)
        tx.f_digital.set(i, k * cfg.n_s + j, f_k.at(i, j));

    tx.w_digital.push_back(take_columns(decomp.u, 0, cfg.n_s));
  }
  return tx;
}

OmpResult omp_hybrid_precoder(const ComplexMatrix& target,
                              const ComplexMatrix& dictionary,
                              std::size_t n_chains,
                              std::optional<double> power_budget) {
  if (dictionary.rows() != target.rows())
    throw ShapeError("omp: dictionary " + shape_string(dictionary) +
                     " does not match target " + shape_string(target));
  if (n_chains == 0 || n_chains > dictionary.cols())
    throw ConfigError("omp: need 1 <= n_chains <= dictionary size, got " +
                      std::to_string(n_chains) + " of " +
                      std::to_string(dictionary.cols()));

  OmpResult result;
  result.analog = ComplexMatrix(target.rows(), 0);
  ComplexMatrix residual = target;
  std::vector<bool> used(dictionary.cols(), false);

  for (std::size_t iter = 0; iter < n_chains; ++iter) {
    // Pick the unused atom with the largest total correlation to the residual.
    const ComplexMatrix corr = multiply(hermitian(dictionary), residual);
    std::size_t best = dictionary.cols();
    double best_score = -1.0;
    for (std::size_t a = 0; a < dictionary.cols(); ++a) {
      if (used[a]) continue;
      double score = 0.0;
      for (std::size_t j = 0; j < corr.cols(); ++j)
        score += std::norm(corr.at(a, j));
      if (score > best_score) {
        best_score = score;
        best = a;
      }
    }
    used[best] = true;

    ComplexMatrix analog(target.rows(), iter + 1);
    for (std::size_t j = 0; j < iter; ++j)
      for (std::size_t i = 0; i < target.rows(); ++i)
        analog.set(i, j, result.analog.at(i, j));
    for (std::size_t i = 0; i < target.rows(); ++i)
      analog.set(i, iter, dictionary.at(i, best));
    result.analog = std::move(analog);

    bool ridge_used = false;
    result.digital =
        linalg::least_squares(result.analog, target, 1e-10, &ridge_used);
    result.ridge_used = result.ridge_used || ridge_used;

    residual = subtract(target, multiply(result.analog, result.digital));
    result.residual_trace.push_back(std::sqrt(frobenius_norm_sq(residual)));
  }

  if (power_budget) {
    const double power =
        frobenius_norm_sq(multiply(result.analog, result.digital));
    if (power > 0.0)
      result.digital = scale(result.digital, std::sqrt(*power_budget / power));
  }
  return result;
}

ComplexMatrix mmse_combiner(const ComplexMatrix& h_eff, double noise_variance,
                            std::size_t first_stream, std::size_t n_streams,
                            bool* pseudo_inverse_used) {
  if (first_stream + n_streams > h_eff.cols())
    throw ShapeError("mmse_combiner: stream range [" +
                     std::to_string(first_stream) + ", " +
                     std::to_string(first_stream + n_streams) +
                     ") out of bounds for " + shape_string(h_eff));
  if (pseudo_inverse_used) *pseudo_inverse_used = false;
  ComplexMatrix gram = multiply(h_eff, hermitian(h_eff));
  for (std::size_t i = 0; i < gram.rows(); ++i)
    gram.re(i, i) += noise_variance;
  const ComplexMatrix rhs = take_columns(h_eff, first_stream, n_streams);
  try {
    return linalg::solve(gram, rhs);
  } catch (const NumericError&) {
    if (pseudo_inverse_used) *pseudo_inverse_used = true;
    return multiply(linalg::pseudo_inverse(gram, 1e-12), rhs);
  }
}

std::vector<ComplexMatrix> evaluate_linear_transceiver(
    const LinearTransceiver& tx, const ChannelRealization& realization,
    const ComplexMatrix& symbols, const std::vector<ComplexMatrix>& noise) {
  const std::size_t k_users = realization.per_user.size();
  if (noise.size() != k_users)
    throw ShapeError("evaluate_linear_transceiver: noise user count " +
                     std::to_string(noise.size()) + " vs " +
                     std::to_string(k_users));
  if (tx.w_digital.size() != k_users)
    throw ShapeError("evaluate_linear_transceiver: transceiver has " +
                     std::to_string(tx.w_digital.size()) +
                     " digital combiners for " + std::to_string(k_users) +
                     " users");
  const ComplexMatrix precoder = tx.effective_precoder();
  if (precoder.cols() != symbols.rows())
    throw ShapeError("evaluate_linear_transceiver: precoder " +
                     shape_string(precoder) + " vs symbols " +
                     shape_string(symbols));
  const ComplexMatrix x = multiply(precoder, symbols);

  std::vector<ComplexMatrix> outputs;
  outputs.reserve(k_users);
  for (std::size_t k = 0; k < k_users; ++k) {
    ComplexMatrix y = add(multiply(realization.per_user[k].h, x), noise[k]);
    if (!tx.w_analog.empty()) y = multiply(hermitian(tx.w_analog[k]), y);
    outputs.push_back(multiply(hermitian(tx.w_digital[k]), y));
  }
  return outputs;
}

std::vector<ComplexMatrix> evaluate_linear_transceiver(
    const LinearTransceiver& tx, const ChannelRealization& realization,
    const ComplexMatrix& symbols, double noise_variance, Rng& rng) {
  std::vector<ComplexMatrix> noise;
  noise.reserve(realization.per_user.size());
  for (const auto& user : realization.per_user) {
    if (noise_variance == 0.0)
      noise.emplace_back(user.h.rows(), symbols.cols());
    else
      noise.push_back(
          randn_complex(rng, user.h.rows(), symbols.cols(), noise_variance));
  }
  return evaluate_linear_transceiver(tx, realization, symbols, noise);
}

ComplexMatrix transmit_steering_dictionary(const ChannelRealization& realization,
                                           const SystemConfig& cfg) {
  std::vector<double> angles;
  for (const auto& user : realization.per_user)
    angles.insert(angles.end(), user.geometry.ray_aod.begin(),
                  user.geometry.ray_aod.end());
  if (angles.empty())
    throw ConfigError("transmit_steering_dictionary: no path angles recorded");
  ComplexMatrix dict(cfg.n_t, angles.size());
  const double to_unit = std::sqrt(static_cast<double>(cfg.n_t));
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const ComplexMatrix steer = array_response_ula(cfg.n_t, angles[a]);
    for (std::size_t i = 0; i < cfg.n_t; ++i)
      dict.set(i, a, steer.at(i, 0) * to_unit);
  }
  return dict;
}

ComplexMatrix receive_steering_dictionary(const ChannelGeometry& geometry,
                                          const SystemConfig& cfg) {
  if (geometry.ray_aoa.empty())
    throw ConfigError("receive_steering_dictionary: no path angles recorded");
  ComplexMatrix dict(cfg.n_r, geometry.ray_aoa.size());
  const double to_unit = std::sqrt(static_cast<double>(cfg.n_r));
  for (std::size_t a = 0; a < geometry.ray_aoa.size(); ++a) {
    const ComplexMatrix steer = array_response_ula(cfg.n_r, geometry.ray_aoa[a]);
    for (std::size_t i = 0; i < cfg.n_r; ++i)
      dict.set(i, a, steer.at(i, 0) * to_unit);
  }
  return dict;
}

OmpHybridSolution omp_hybrid_solution(const ChannelRealization& realization,
                                      const SystemConfig& cfg) {
  // Target: the full-digital block-diagonalization solution.
  const LinearTransceiver bd = bd_full_digital(realization, cfg);

  OmpHybridSolution sol;
  const OmpResult precoder = omp_hybrid_precoder(
      bd.f_digital, transmit_steering_dictionary(realization, cfg), cfg.n_rf_t,
      cfg.power_budget);
  sol.f_analog = precoder.analog;
  sol.f_digital = precoder.digital;
  sol.precoder_residual_trace = precoder.residual_trace;
  sol.ridge_used = precoder.ridge_used;

  for (std::size_t k = 0; k < realization.per_user.size(); ++k) {
    const OmpResult combiner = omp_hybrid_precoder(
        bd.w_digital[k],
        receive_steering_dictionary(realization.per_user[k].geometry, cfg),
        cfg.n_rf_r, std::nullopt);
    sol.w_analog.push_back(combiner.analog);
    sol.ridge_used = sol.ridge_used || combiner.ridge_used;
  }
  return sol;
}

LinearTransceiver omp_transceiver(const OmpHybridSolution& solution,
                                  const ChannelRealization& realization,
                                  const SystemConfig& cfg,
                                  double noise_variance) {
  LinearTransceiver tx;
  tx.label = "omp_hybrid";
  tx.f_analog = solution.f_analog;
  tx.f_digital = solution.f_digital;
  tx.w_analog = solution.w_analog;

  const ComplexMatrix precoder = tx.effective_precoder();
  for (std::size_t k = 0; k < realization.per_user.size(); ++k) {
    // Effective channel after analog combining; the unit-modulus combiner
    // columns have norm^2 = n_r, so the per-chain noise variance seen by the
    // digital combiner is n_r * sigma^2.
    const ComplexMatrix h_eff = multiply(
        hermitian(solution.w_analog[k]),
        multiply(realization.per_user[k].h, precoder));
    const double chain_noise =
        noise_variance * static_cast<double>(cfg.n_r);
    tx.w_digital.push_back(
        mmse_combiner(h_eff, chain_noise, k * cfg.n_s, cfg.n_s));
  }
  return tx;
}

}  // namespace dnhb
