#include "dnhb/layers.hpp"

#include <cmath>
#include <string>

#include "dnhb/errors.hpp"

namespace dnhb {

namespace {

void apply_activation(Activation act, ComplexMatrix& z) {
  if (act == Activation::kIdentity) return;
  for (double& v : z.re_data()) v = std::tanh(v);
  for (double& v : z.im_data()) v = std::tanh(v);
}

}  // namespace

ComplexMatrix dense_forward(const ComplexDenseLayer& layer,
                            const ComplexMatrix& x, DenseCache* cache) {
  if (x.rows() != layer.in_dim())
    throw ShapeError("dense_forward: input " + shape_string(x) +
                     " does not match layer weights " +
                     shape_string(layer.weights));
  ComplexMatrix z = multiply(layer.weights, x);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const double br = layer.bias.re(i, 0);
    const double bi = layer.bias.im(i, 0);
    for (std::size_t b = 0; b < z.cols(); ++b) {
      z.re(i, b) += br;
      z.im(i, b) += bi;
    }
  }
  if (cache) {
    cache->input = x;
    cache->pre_activation = z;
  }
  apply_activation(layer.activation, z);
  return z;
}

ComplexMatrix dense_backward(const ComplexDenseLayer& layer,
                             const DenseCache& cache,
                             const ComplexMatrix& upstream,
                             DenseGrads* grads) {
  if (cache.input.rows() != layer.in_dim() ||
      cache.pre_activation.rows() != layer.out_dim() ||
      !upstream.same_shape(cache.pre_activation))
    throw ShapeError("dense_backward: cache/upstream shapes do not match layer "
                     "(upstream " +
                     shape_string(upstream) + ", pre-activation " +
                     shape_string(cache.pre_activation) + ")");
  // The activation acts on each plane separately, so its local slope does too.
  ComplexMatrix dz = upstream;
  if (layer.activation == Activation::kTanh) {
    for (std::size_t i = 0; i < dz.size(); ++i) {
      const double tr = std::tanh(cache.pre_activation.re_data()[i]);
      const double ti = std::tanh(cache.pre_activation.im_data()[i]);
      dz.re_data()[i] *= 1.0 - tr * tr;
      dz.im_data()[i] *= 1.0 - ti * ti;
    }
  }
  if (grads) {
    // dW as a complex pair: dz * x^H carries (dL/dW_re, dL/dW_im) in its
    // re/im planes; db is the row sum of dz.
    grads->weights = multiply(dz, hermitian(cache.input));
    grads->bias = ComplexMatrix(layer.out_dim(), 1);
    for (std::size_t i = 0; i < dz.rows(); ++i) {
      double sr = 0.0, si = 0.0;
      for (std::size_t b = 0; b < dz.cols(); ++b) {
        sr += dz.re(i, b);
        si += dz.im(i, b);
      }
      grads->bias.re(i, 0) = sr;
      grads->bias.im(i, 0) = si;
    }
  }
  return multiply(hermitian(layer.weights), dz);
}

PhaseShiftLayer make_phase_shift_layer(AnalogTopology topology,
                                       std::size_t in_dim,
                                       std::size_t out_dim) {
  if (in_dim == 0 || out_dim == 0)
    throw ConfigError("phase layer: dimensions must be positive");
  PhaseShiftLayer layer;
  layer.topology = topology;
  layer.in_dim = in_dim;
  layer.out_dim = out_dim;
  if (topology == AnalogTopology::kFullyConnected) {
    layer.phases.assign(in_dim * out_dim, 0.0);
  } else {
    const std::size_t antennas = std::max(in_dim, out_dim);
    const std::size_t chains = std::min(in_dim, out_dim);
    if (antennas % chains != 0)
      throw ConfigError("phase layer: partially connected topology needs the "
                        "antenna count (" +
                        std::to_string(antennas) +
                        ") divisible by the RF-chain count (" +
                        std::to_string(chains) + ")");
    layer.phases.assign(antennas, 0.0);
  }
  return layer;
}

ComplexMatrix phase_forward(const PhaseShiftLayer& layer,
                            const ComplexMatrix& x, PhaseCache* cache) {
  if (x.rows() != layer.in_dim)
    throw ShapeError("phase_forward: input " + shape_string(x) +
                     " does not match layer in_dim " +
                     std::to_string(layer.in_dim));
  if (cache) cache->input = x;
  const std::size_t batch = x.cols();
  ComplexMatrix y(layer.out_dim, batch);
  if (layer.topology == AnalogTopology::kFullyConnected) {
    for (std::size_t p = 0; p < layer.in_dim; ++p) {
      for (std::size_t n = 0; n < layer.out_dim; ++n) {
        const double th = layer.phases[p * layer.out_dim + n];
        const double c = std::cos(th), s = std::sin(th);
        for (std::size_t b = 0; b < batch; ++b) {
          const double xr = x.re(p, b), xi = x.im(p, b);
          y.re(n, b) += xr * c - xi * s;
          y.im(n, b) += xr * s + xi * c;
        }
      }
    }
  } else if (layer.out_dim > layer.in_dim) {
    // Expansion (transmit): antenna n is driven by chain n / block_size only.
    const std::size_t block = layer.block_size();
    for (std::size_t n = 0; n < layer.out_dim; ++n) {
      const std::size_t p = n / block;
      const double c = std::cos(layer.phases[n]), s = std::sin(layer.phases[n]);
      for (std::size_t b = 0; b < batch; ++b) {
        const double xr = x.re(p, b), xi = x.im(p, b);
        y.re(n, b) = xr * c - xi * s;
        y.im(n, b) = xr * s + xi * c;
      }
    }
  } else {
    // Reduction (receive): chain q sums its own antenna block.
    const std::size_t block = layer.block_size();
    for (std::size_t m = 0; m < layer.in_dim; ++m) {
      const std::size_t q = m / block;
      const double c = std::cos(layer.phases[m]), s = std::sin(layer.phases[m]);
      for (std::size_t b = 0; b < batch; ++b) {
        const double xr = x.re(m, b), xi = x.im(m, b);
        y.re(q, b) += xr * c - xi * s;
        y.im(q, b) += xr * s + xi * c;
      }
    }
  }
  return y;
}

ComplexMatrix phase_backward(const PhaseShiftLayer& layer,
                             const PhaseCache& cache,
                             const ComplexMatrix& upstream,
                             std::vector<double>* phase_grads) {
  const ComplexMatrix& x = cache.input;
  if (x.rows() != layer.in_dim || upstream.rows() != layer.out_dim ||
      upstream.cols() != x.cols())
    throw ShapeError("phase_backward: cache " + shape_string(x) +
                     " / upstream " + shape_string(upstream) +
                     " do not match layer " + std::to_string(layer.in_dim) +
                     "->" + std::to_string(layer.out_dim));
  const std::size_t batch = x.cols();
  ComplexMatrix dx(layer.in_dim, batch);
  if (phase_grads) phase_grads->assign(layer.phases.size(), 0.0);

  // For one coefficient e^{j th} between input value v and output slot o:
  //   d th   += up_re(o)*(-v_re sin - v_im cos) + up_im(o)*(v_re cos - v_im sin)
  //   d v    += e^{-j th} * up(o)
  auto accumulate = [&](std::size_t phase_idx, std::size_t in_row,
                        std::size_t out_row) {
    const double th = layer.phases[phase_idx];
    const double c = std::cos(th), s = std::sin(th);
    double dth = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
      const double xr = x.re(in_row, b), xi = x.im(in_row, b);
      const double ur = upstream.re(out_row, b), ui = upstream.im(out_row, b);
      dth += ur * (-xr * s - xi * c) + ui * (xr * c - xi * s);
      dx.re(in_row, b) += ur * c + ui * s;
      dx.im(in_row, b) += -ur * s + ui * c;
    }
    if (phase_grads) (*phase_grads)[phase_idx] += dth;
  };

  if (layer.topology == AnalogTopology::kFullyConnected) {
    for (std::size_t p = 0; p < layer.in_dim; ++p)
      for (std::size_t n = 0; n < layer.out_dim; ++n)
        accumulate(p * layer.out_dim + n, p, n);
  } else if (layer.out_dim > layer.in_dim) {
    const std::size_t block = layer.block_size();
    for (std::size_t n = 0; n < layer.out_dim; ++n)
      accumulate(n, n / block, n);
  } else {
    const std::size_t block = layer.block_size();
    for (std::size_t m = 0; m < layer.in_dim; ++m)
      accumulate(m, m, m / block);
  }
  return dx;
}

ComplexMatrix phase_coefficient_matrix(const PhaseShiftLayer& layer) {
  ComplexMatrix c(layer.out_dim, layer.in_dim);
  if (layer.topology == AnalogTopology::kFullyConnected) {
    for (std::size_t p = 0; p < layer.in_dim; ++p)
      for (std::size_t n = 0; n < layer.out_dim; ++n) {
        const double th = layer.phases[p * layer.out_dim + n];
        c.re(n, p) = std::cos(th);
        c.im(n, p) = std::sin(th);
      }
  } else if (layer.out_dim > layer.in_dim) {
    const std::size_t block = layer.block_size();
    for (std::size_t n = 0; n < layer.out_dim; ++n) {
      c.re(n, n / block) = std::cos(layer.phases[n]);
      c.im(n, n / block) = std::sin(layer.phases[n]);
    }
  } else {
    const std::size_t block = layer.block_size();
    for (std::size_t m = 0; m < layer.in_dim; ++m) {
      c.re(m / block, m) = std::cos(layer.phases[m]);
      c.im(m / block, m) = std::sin(layer.phases[m]);
    }
  }
  return c;
}

ComplexMatrix power_normalize_forward(const ComplexMatrix& x,
                                      double power_budget,
                                      PowerNormCache* cache) {
  if (!(power_budget > 0.0))
    throw NumericError("power_normalize: power budget must be positive");
  ComplexMatrix y(x.rows(), x.cols());
  std::vector<double> norm_sq(x.cols());
  std::vector<double> rho(x.cols());
  for (std::size_t b = 0; b < x.cols(); ++b) {
    const double n2 = x.col_norm_sq(b);
    if (!(n2 > 0.0))
      throw NumericError("power_normalize: zero-norm transmit vector in batch "
                         "column " +
                         std::to_string(b));
    norm_sq[b] = n2;
    rho[b] = std::sqrt(power_budget / n2);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      y.re(i, b) = rho[b] * x.re(i, b);
      y.im(i, b) = rho[b] * x.im(i, b);
    }
  }
  if (cache) {
    cache->input = x;
    cache->norm_sq = std::move(norm_sq);
    cache->rho = std::move(rho);
  }
  return y;
}

ComplexMatrix power_normalize_backward(const PowerNormCache& cache,
                                       const ComplexMatrix& upstream) {
  const ComplexMatrix& x = cache.input;
  if (!upstream.same_shape(x) || cache.rho.size() != x.cols())
    throw ShapeError("power_normalize_backward: upstream " +
                     shape_string(upstream) + " does not match cached input " +
                     shape_string(x));
  // y = rho(x) x with rho = sqrt(P)/||x||; the chain rule through the norm
  // removes the radial component of the upstream gradient.
  ComplexMatrix dx(x.rows(), x.cols());
  for (std::size_t b = 0; b < x.cols(); ++b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
      dot += upstream.re(i, b) * x.re(i, b) + upstream.im(i, b) * x.im(i, b);
    const double scale_in = dot / cache.norm_sq[b];
    for (std::size_t i = 0; i < x.rows(); ++i) {
      dx.re(i, b) = cache.rho[b] * (upstream.re(i, b) - x.re(i, b) * scale_in);
      dx.im(i, b) = cache.rho[b] * (upstream.im(i, b) - x.im(i, b) * scale_in);
    }
  }
  return dx;
}

ChannelNoise draw_channel_noise(const ChannelRealization& realization,
                                std::size_t batch, double noise_variance,
                                Rng& rng) {
  if (noise_variance < 0.0)
    throw NumericError("draw_channel_noise: negative noise variance");
  ChannelNoise noise;
  noise.per_user.reserve(realization.per_user.size());
  for (const auto& user : realization.per_user) {
    if (noise_variance == 0.0)
      noise.per_user.emplace_back(user.h.rows(), batch);
    else
      noise.per_user.push_back(
          randn_complex(rng, user.h.rows(), batch, noise_variance));
  }
  return noise;
}

ComplexMatrix channel_forward(const ChannelRealization& realization,
                              const ComplexMatrix& x,
                              const ChannelNoise& noise) {
  if (realization.per_user.empty())
    throw ConfigError("channel_forward: realization has no users");
  if (noise.per_user.size() != realization.per_user.size())
    throw ShapeError("channel_forward: noise has " +
                     std::to_string(noise.per_user.size()) +
                     " users, realization has " +
                     std::to_string(realization.per_user.size()));
  const std::size_t n_r = realization.per_user.front().h.rows();
  ComplexMatrix stacked(realization.per_user.size() * n_r, x.cols());
  for (std::size_t k = 0; k < realization.per_user.size(); ++k) {
    const ComplexMatrix& h = realization.per_user[k].h;
    if (h.cols() != x.rows())
      throw ShapeError("channel_forward: transmit vector " + shape_string(x) +
                       " does not match channel " + shape_string(h) +
                       " for user " + std::to_string(k));
    ComplexMatrix y = multiply(h, x);
    const ComplexMatrix& nk = noise.per_user[k];
    if (!nk.same_shape(y))
      throw ShapeError("channel_forward: noise " + shape_string(nk) +
                       " does not match received block " + shape_string(y));
    for (std::size_t i = 0; i < y.rows(); ++i)
      for (std::size_t b = 0; b < y.cols(); ++b) {
        stacked.re(k * n_r + i, b) = y.re(i, b) + nk.re(i, b);
        stacked.im(k * n_r + i, b) = y.im(i, b) + nk.im(i, b);
      }
  }
  return stacked;
}

ComplexMatrix channel_backward(const ChannelRealization& realization,
                               const ComplexMatrix& upstream) {
  const std::size_t k_users = realization.per_user.size();
  const std::size_t n_r = realization.per_user.front().h.rows();
  const std::size_t n_t = realization.per_user.front().h.cols();
  if (upstream.rows() != k_users * n_r)
    throw ShapeError("channel_backward: upstream " + shape_string(upstream) +
                     " does not stack " + std::to_string(k_users) +
                     " users of " + std::to_string(n_r) + " antennas");
  ComplexMatrix dx(n_t, upstream.cols());
  for (std::size_t k = 0; k < k_users; ++k) {
    ComplexMatrix block(n_r, upstream.cols());
    for (std::size_t i = 0; i < n_r; ++i)
      for (std::size_t b = 0; b < upstream.cols(); ++b) {
        block.re(i, b) = upstream.re(k * n_r + i, b);
        block.im(i, b) = upstream.im(k * n_r + i, b);
      }
    dx = add(dx, multiply(hermitian(realization.per_user[k].h), block));
  }
  return dx;
}

std::vector<ComplexMatrix> split_users(const ComplexMatrix& stacked,
                                       std::size_t k_users) {
  if (k_users == 0 || stacked.rows() % k_users != 0)
    throw ShapeError("split_users: cannot split " +
                     std::to_string(stacked.rows()) + " rows into " +
                     std::to_string(k_users) + " users");
  const std::size_t per = stacked.rows() / k_users;
  std::vector<ComplexMatrix> out;
  out.reserve(k_users);
  for (std::size_t k = 0; k < k_users; ++k) {
    ComplexMatrix block(per, stacked.cols());
    for (std::size_t i = 0; i < per; ++i)
      for (std::size_t b = 0; b < stacked.cols(); ++b) {
        block.re(i, b) = stacked.re(k * per + i, b);
        block.im(i, b) = stacked.im(k * per + i, b);
      }
    out.push_back(std::move(block));
  }
  return out;
}

ComplexMatrix concat_users(const std::vector<ComplexMatrix>& per_user) {
  if (per_user.empty()) throw ShapeError("concat_users: no blocks");
  const std::size_t per = per_user.front().rows();
  const std::size_t cols = per_user.front().cols();
  for (const auto& block : per_user)
    if (block.rows() != per || block.cols() != cols)
      throw ShapeError("concat_users: inconsistent block shapes " +
                       shape_string(per_user.front()) + " vs " +
                       shape_string(block));
  ComplexMatrix stacked(per_user.size() * per, cols);
  for (std::size_t k = 0; k < per_user.size(); ++k)
    for (std::size_t i = 0; i < per; ++i)
      for (std::size_t b = 0; b < cols; ++b) {
        stacked.re(k * per + i, b) = per_user[k].re(i, b);
        stacked.im(k * per + i, b) = per_user[k].im(i, b);
      }
  return stacked;
}

}  // namespace dnhb
