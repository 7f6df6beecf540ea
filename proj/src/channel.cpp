#include "dnhb/channel.hpp"

#include <cmath>

#include "dnhb/errors.hpp"
#include "dnhb/serialize.hpp"

namespace dnhb {

namespace {

constexpr int kChannelSetFormatVersion = 1;
constexpr double kPi = 3.141592653589793238462643383279;

ChannelGeometry draw_geometry(const ChannelGeometryParams& params, Rng& rng) {
  if (params.n_clusters == 0 || params.n_rays == 0)
    throw ConfigError("channel geometry: cluster and ray counts must be positive");
  ChannelGeometry g;
  g.n_clusters = params.n_clusters;
  g.n_rays = params.n_rays;
  g.angular_spread_rad = params.angular_spread_rad;
  g.cluster_aod.resize(params.n_clusters);
  g.cluster_aoa.resize(params.n_clusters);
  const std::size_t paths = params.n_clusters * params.n_rays;
  g.ray_aod.resize(paths);
  g.ray_aoa.resize(paths);
  g.ray_gain.resize(paths);
  for (std::size_t c = 0; c < params.n_clusters; ++c) {
    g.cluster_aod[c] = rng.uniform(0.0, 2.0 * kPi);
    g.cluster_aoa[c] = rng.uniform(0.0, 2.0 * kPi);
    for (std::size_t r = 0; r < params.n_rays; ++r) {
      const std::size_t p = c * params.n_rays + r;
      g.ray_aod[p] = g.cluster_aod[c] + rng.laplacian(params.angular_spread_rad);
      g.ray_aoa[p] = g.cluster_aoa[c] + rng.laplacian(params.angular_spread_rad);
      const double gr = rng.gaussian() / std::sqrt(2.0);
      const double gi = rng.gaussian() / std::sqrt(2.0);
      g.ray_gain[p] = {gr, gi};
    }
  }
  return g;
}

nlohmann::json geometry_to_json(const ChannelGeometry& g) {
  nlohmann::json gains_re = nlohmann::json::array();
  nlohmann::json gains_im = nlohmann::json::array();
  for (const auto& v : g.ray_gain) {
    gains_re.push_back(v.real());
    gains_im.push_back(v.imag());
  }
  return nlohmann::json{{"n_clusters", g.n_clusters},
                        {"n_rays", g.n_rays},
                        {"angular_spread_rad", g.angular_spread_rad},
                        {"cluster_aod", g.cluster_aod},
                        {"cluster_aoa", g.cluster_aoa},
                        {"ray_aod", g.ray_aod},
                        {"ray_aoa", g.ray_aoa},
                        {"ray_gain_re", gains_re},
                        {"ray_gain_im", gains_im}};
}

ChannelGeometry geometry_from_json(const nlohmann::json& j,
                                   const std::string& context) {
  ChannelGeometry g;
  g.n_clusters = require_key(j, "n_clusters", context).get<std::size_t>();
  g.n_rays = require_key(j, "n_rays", context).get<std::size_t>();
  g.angular_spread_rad =
      require_key(j, "angular_spread_rad", context).get<double>();
  g.cluster_aod =
      require_key(j, "cluster_aod", context).get<std::vector<double>>();
  g.cluster_aoa =
      require_key(j, "cluster_aoa", context).get<std::vector<double>>();
  g.ray_aod = require_key(j, "ray_aod", context).get<std::vector<double>>();
  g.ray_aoa = require_key(j, "ray_aoa", context).get<std::vector<double>>();
  const auto re =
      require_key(j, "ray_gain_re", context).get<std::vector<double>>();
  const auto im =
      require_key(j, "ray_gain_im", context).get<std::vector<double>>();
  if (re.size() != im.size())
    throw ParseError(context + ": ray gain re/im length mismatch");
  g.ray_gain.resize(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) g.ray_gain[i] = {re[i], im[i]};
  return g;
}

}  // namespace

ComplexMatrix array_response_ula(std::size_t n_elements, double angle) {
  if (n_elements == 0)
    throw ConfigError("array_response_ula: need at least one element");
  ComplexMatrix a(n_elements, 1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_elements));
  const double phase_step = kPi * std::sin(angle);
  for (std::size_t m = 0; m < n_elements; ++m) {
    const double phase = phase_step * static_cast<double>(m);
    a.re(m, 0) = scale * std::cos(phase);
    a.im(m, 0) = scale * std::sin(phase);
  }
  return a;
}

ComplexMatrix channel_from_geometry(const SystemConfig& cfg,
                                    const ChannelGeometry& g) {
  if (g.path_count() == 0)
    throw ConfigError("channel_from_geometry: geometry has no paths");
  const double norm = std::sqrt(static_cast<double>(cfg.n_t * cfg.n_r) /
                                static_cast<double>(g.path_count()));
  ComplexMatrix h(cfg.n_r, cfg.n_t);
  for (std::size_t p = 0; p < g.path_count(); ++p) {
    const ComplexMatrix a_r = array_response_ula(cfg.n_r, g.ray_aoa[p]);
    const ComplexMatrix a_t = array_response_ula(cfg.n_t, g.ray_aod[p]);
    const std::complex<double> gain = g.ray_gain[p] * norm;
    for (std::size_t i = 0; i < cfg.n_r; ++i) {
      const std::complex<double> left = gain * a_r.at(i, 0);
      for (std::size_t j = 0; j < cfg.n_t; ++j) {
        const std::complex<double> v = left * std::conj(a_t.at(j, 0));
        h.re(i, j) += v.real();
        h.im(i, j) += v.imag();
      }
    }
  }
  return h;
}

ChannelRealization generate_channel(const SystemConfig& cfg,
                                    const ChannelGeometryParams& geom,
                                    Rng& rng) {
  cfg.validate();
  ChannelRealization real;
  real.seed = rng.seed();
  real.per_user.reserve(cfg.k_users);
  for (std::size_t k = 0; k < cfg.k_users; ++k) {
    ChannelRealization::UserChannel user;
    user.geometry = draw_geometry(geom, rng);
    user.h = channel_from_geometry(cfg, user.geometry);
    real.per_user.push_back(std::move(user));
  }
  return real;
}

std::vector<ChannelRealization> generate_channel_set(
    const SystemConfig& cfg, const ChannelGeometryParams& geom,
    std::size_t count, const Rng& rng) {
  if (count == 0)
    throw ConfigError("generate_channel_set: count must be at least 1");
  std::vector<ChannelRealization> set;
  set.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng child = rng.child(i);
    ChannelRealization real = generate_channel(cfg, geom, child);
    real.realization_id = i;
    set.push_back(std::move(real));
  }
  return set;
}

void save_channel_set(const std::string& path, const SystemConfig& cfg,
                      const ChannelGeometryParams& geom,
                      std::uint64_t master_seed,
                      const std::vector<ChannelRealization>& set) {
  nlohmann::json j;
  j["format_version"] = kChannelSetFormatVersion;
  j["config"] = system_config_to_json(cfg);
  j["geometry_params"] = {{"n_clusters", geom.n_clusters},
                          {"n_rays", geom.n_rays},
                          {"angular_spread_rad", geom.angular_spread_rad}};
  j["master_seed"] = master_seed;
  j["count"] = set.size();
  nlohmann::json reals = nlohmann::json::array();
  for (const auto& real : set) {
    nlohmann::json users = nlohmann::json::array();
    for (const auto& user : real.per_user) {
      nlohmann::json u = matrix_to_json(user.h);
      u["geometry"] = geometry_to_json(user.geometry);
      users.push_back(std::move(u));
    }
    reals.push_back(nlohmann::json{{"realization_id", real.realization_id},
                                   {"seed", real.seed},
                                   {"per_user", std::move(users)}});
  }
  j["realizations"] = std::move(reals);
  save_json_file(path, j);
}

LoadedChannelSet load_channel_set(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  const int version =
      require_key(j, "format_version", "channel set").get<int>();
  if (version != kChannelSetFormatVersion)
    throw ParseError(path + ": unsupported channel-set format version " +
                     std::to_string(version) + ", expected " +
                     std::to_string(kChannelSetFormatVersion));
  LoadedChannelSet out;
  out.cfg = system_config_from_json(require_key(j, "config", "channel set"));
  const auto& gp = require_key(j, "geometry_params", "channel set");
  out.geom.n_clusters =
      require_key(gp, "n_clusters", "geometry_params").get<std::size_t>();
  out.geom.n_rays =
      require_key(gp, "n_rays", "geometry_params").get<std::size_t>();
  out.geom.angular_spread_rad =
      require_key(gp, "angular_spread_rad", "geometry_params").get<double>();
  out.master_seed =
      require_key(j, "master_seed", "channel set").get<std::uint64_t>();
  const std::size_t count =
      require_key(j, "count", "channel set").get<std::size_t>();
  const auto& reals = require_key(j, "realizations", "channel set");
  if (!reals.is_array() || reals.size() != count)
    throw ParseError(path + ": realization count mismatch, header says " +
                     std::to_string(count) + ", found " +
                     std::to_string(reals.size()));
  for (std::size_t i = 0; i < reals.size(); ++i) {
    const std::string ctx = "realization " + std::to_string(i);
    const auto& rj = reals[i];
    ChannelRealization real;
    real.realization_id =
        require_key(rj, "realization_id", ctx).get<std::uint64_t>();
    real.seed = require_key(rj, "seed", ctx).get<std::uint64_t>();
    const auto& users = require_key(rj, "per_user", ctx);
    if (!users.is_array() || users.size() != out.cfg.k_users)
      throw ParseError(path + ": " + ctx + " has " +
                       std::to_string(users.size()) + " users, config says " +
                       std::to_string(out.cfg.k_users));
    for (std::size_t k = 0; k < users.size(); ++k) {
      ChannelRealization::UserChannel user;
      user.h = matrix_from_json(users[k], ctx + " user " + std::to_string(k));
      if (user.h.rows() != out.cfg.n_r || user.h.cols() != out.cfg.n_t)
        throw ParseError(path + ": " + ctx + " user " + std::to_string(k) +
                         " channel is " + shape_string(user.h) +
                         ", expected " + std::to_string(out.cfg.n_r) + "x" +
                         std::to_string(out.cfg.n_t));
      user.geometry = geometry_from_json(
          require_key(users[k], "geometry", ctx), ctx + " geometry");
      real.per_user.push_back(std::move(user));
    }
    out.realizations.push_back(std::move(real));
  }
  return out;
}

}  // namespace dnhb
