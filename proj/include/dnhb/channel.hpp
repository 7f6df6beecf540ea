#ifndef DNHB_CHANNEL_HPP
#define DNHB_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dnhb/complex_matrix.hpp"
#include "dnhb/rng.hpp"
#include "dnhb/system_config.hpp"

namespace dnhb {

// Cluster/ray parameters of the geometric mmWave channel model.
struct ChannelGeometryParams {
  std::size_t n_clusters = 2;
  std::size_t n_rays = 2;
  double angular_spread_rad = 0.17453292519943295;  // 10 degrees
};

// The geometry that generated one user's channel: per-path departure/arrival
// angles and complex gains, path index il = cluster i * n_rays + ray l.
struct ChannelGeometry {
  std::size_t n_clusters = 0;
  std::size_t n_rays = 0;
  double angular_spread_rad = 0.0;
  std::vector<double> cluster_aod;             // length n_clusters
  std::vector<double> cluster_aoa;             // length n_clusters
  std::vector<double> ray_aod;                 // length n_clusters*n_rays
  std::vector<double> ray_aoa;                 // length n_clusters*n_rays
  std::vector<std::complex<double>> ray_gain;  // CN(0,1), same length

  std::size_t path_count() const { return n_clusters * n_rays; }
};

// One draw of all users' channels plus the geometry behind them.
struct ChannelRealization {
  struct UserChannel {
    ComplexMatrix h;  // n_r x n_t
    ChannelGeometry geometry;
  };
  std::vector<UserChannel> per_user;  // exactly k_users entries
  std::uint64_t realization_id = 0;
  std::uint64_t seed = 0;
};

// Uniform linear array response at half-wavelength spacing:
// entry m = (1/sqrt(n)) * exp(j*pi*m*sin(angle)), m = 0..n-1. Unit norm.
ComplexMatrix array_response_ula(std::size_t n_elements, double angle);

// Assembles H from an explicit geometry (the deterministic part of the
// model); generate_channel draws the geometry and calls this.
ComplexMatrix channel_from_geometry(const SystemConfig& cfg,
                                    const ChannelGeometry& geometry);

// Draws one multi-user realization of the geometric channel,
//   H = sqrt(n_t*n_r/(N_cl*N_ray)) * sum_il alpha_il a_r(phi_r) a_t(phi_t)^H,
// with cluster mean angles uniform on [0,2pi), Laplacian ray offsets at the
// configured angular spread and ray gains CN(0,1). Users are independent.
// Normalization gives E||H||_F^2 = n_t*n_r. Deterministic given the rng seed.
ChannelRealization generate_channel(const SystemConfig& cfg,
                                    const ChannelGeometryParams& geom,
                                    Rng& rng);

// count independent realizations, one child seed per realization derived
// from rng's seed, so regeneration from the same master seed is bit-identical.
std::vector<ChannelRealization> generate_channel_set(
    const SystemConfig& cfg, const ChannelGeometryParams& geom,
    std::size_t count, const Rng& rng);

// Channel-set persistence: one JSON document with a format_version header,
// the generating config and per-realization re/im arrays plus geometry.
// The round trip is bit-exact on every matrix entry.
void save_channel_set(const std::string& path, const SystemConfig& cfg,
                      const ChannelGeometryParams& geom,
                      std::uint64_t master_seed,
                      const std::vector<ChannelRealization>& set);

struct LoadedChannelSet {
  SystemConfig cfg;
  ChannelGeometryParams geom;
  std::uint64_t master_seed = 0;
  std::vector<ChannelRealization> realizations;
};

LoadedChannelSet load_channel_set(const std::string& path);

}  // namespace dnhb

#endif  // DNHB_CHANNEL_HPP
