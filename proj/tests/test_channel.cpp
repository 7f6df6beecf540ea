#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dnhb/channel.hpp"
#include "dnhb/errors.hpp"
#include "oracles.hpp"

using namespace dnhb;

namespace {

SystemConfig small_config() {
  SystemConfig cfg;
  cfg.n_t = 8;
  cfg.n_r = 4;
  cfg.n_rf_t = 4;
  cfg.n_rf_r = 2;
  cfg.n_s = 2;
  cfg.k_users = 2;
  return cfg;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/dnhb_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("array_response_ula: boresight and endfire phase patterns") {
  const double s = 1.0 / std::sqrt(2.0);
  const ComplexMatrix a0 = array_response_ula(2, 0.0);
  CHECK(a0.re(0, 0) == doctest::Approx(s).epsilon(1e-15));
  CHECK(a0.re(1, 0) == doctest::Approx(s).epsilon(1e-15));
  CHECK(std::abs(a0.im(0, 0)) < 1e-15);
  CHECK(std::abs(a0.im(1, 0)) < 1e-15);

  const ComplexMatrix a90 = array_response_ula(2, M_PI / 2.0);
  CHECK(a90.re(0, 0) == doctest::Approx(s).epsilon(1e-12));
  CHECK(a90.re(1, 0) == doctest::Approx(-s).epsilon(1e-12));
}

TEST_CASE("array_response_ula: unit norm for arbitrary sizes and angles") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(64);
    const double angle = rng.uniform(-4.0, 4.0);
    CHECK(frobenius_norm_sq(array_response_ula(n, angle)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("channel_from_geometry: single unit-gain path is a rank-1 outer product") {
  SystemConfig cfg = small_config();
  ChannelGeometry g;
  g.n_clusters = 1;
  g.n_rays = 1;
  g.cluster_aod = {0.7};
  g.cluster_aoa = {-0.3};
  g.ray_aod = {0.7};
  g.ray_aoa = {-0.3};
  g.ray_gain = {{1.0, 0.0}};
  const ComplexMatrix h = channel_from_geometry(cfg, g);

  const double expected_power = static_cast<double>(cfg.n_t * cfg.n_r);
  CHECK(frobenius_norm_sq(h) ==
        doctest::Approx(expected_power).epsilon(1e-12));

  // H should equal sqrt(n_t*n_r) * a_r a_t^H entry for entry.
  const ComplexMatrix a_r = array_response_ula(cfg.n_r, -0.3);
  const ComplexMatrix a_t = array_response_ula(cfg.n_t, 0.7);
  const ComplexMatrix outer =
      scale(oracle::naive_matmul(a_r, hermitian(a_t)), std::sqrt(expected_power));
  CHECK(max_abs_diff(h, outer) < 1e-12);
}

TEST_CASE("generate_channel: shapes, determinism and geometry recording") {
  SystemConfig cfg = small_config();
  ChannelGeometryParams geom;
  Rng rng_a(99), rng_b(99);
  const ChannelRealization a = generate_channel(cfg, geom, rng_a);
  const ChannelRealization b = generate_channel(cfg, geom, rng_b);
  REQUIRE(a.per_user.size() == cfg.k_users);
  for (std::size_t k = 0; k < cfg.k_users; ++k) {
    CHECK(a.per_user[k].h.rows() == cfg.n_r);
    CHECK(a.per_user[k].h.cols() == cfg.n_t);
    CHECK(max_abs_diff(a.per_user[k].h, b.per_user[k].h) == 0.0);
    CHECK(a.per_user[k].geometry.path_count() ==
          geom.n_clusters * geom.n_rays);
  }
}

TEST_CASE("generate_channel: mean Frobenius power matches the normalization") {
  SystemConfig cfg = small_config();
  ChannelGeometryParams geom;
  Rng rng(2024);
  const std::size_t draws = 4000;
  double acc = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    Rng child = rng.child(i);
    const ChannelRealization real = generate_channel(cfg, geom, child);
    acc += frobenius_norm_sq(real.per_user[0].h);
  }
  const double mean = acc / static_cast<double>(draws);
  const double expected = static_cast<double>(cfg.n_t * cfg.n_r);
  CHECK(mean > 0.95 * expected);
  CHECK(mean < 1.05 * expected);
}

TEST_CASE("generate_channel_set: distinct realizations, reproducible set") {
  SystemConfig cfg = small_config();
  ChannelGeometryParams geom;
  const auto set_a = generate_channel_set(cfg, geom, 3, Rng(5));
  REQUIRE(set_a.size() == 3);
  CHECK(set_a[0].realization_id != set_a[1].realization_id);
  CHECK(max_abs_diff(set_a[0].per_user[0].h, set_a[1].per_user[0].h) > 1e-6);

  const auto set_b = generate_channel_set(cfg, geom, 3, Rng(5));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < cfg.k_users; ++k)
      CHECK(max_abs_diff(set_a[i].per_user[k].h, set_b[i].per_user[k].h) == 0.0);

  // A singleton set matches generate_channel with the same child seed.
  const auto single = generate_channel_set(cfg, geom, 1, Rng(5));
  Rng child = Rng(5).child(0);
  const ChannelRealization direct = generate_channel(cfg, geom, child);
  CHECK(max_abs_diff(single[0].per_user[0].h, direct.per_user[0].h) == 0.0);

  CHECK_THROWS_AS(generate_channel_set(cfg, geom, 0, Rng(5)), ConfigError);
}

TEST_CASE("channel set persistence: lossless round trip") {
  SystemConfig cfg = small_config();
  ChannelGeometryParams geom;
  const auto set = generate_channel_set(cfg, geom, 2, Rng(77));
  TempFile file("channels.json");
  save_channel_set(file.path, cfg, geom, 77, set);

  const LoadedChannelSet loaded = load_channel_set(file.path);
  CHECK(loaded.master_seed == 77);
  CHECK(loaded.cfg.n_t == cfg.n_t);
  CHECK(loaded.cfg.k_users == cfg.k_users);
  REQUIRE(loaded.realizations.size() == set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    CHECK(loaded.realizations[i].seed == set[i].seed);
    for (std::size_t k = 0; k < cfg.k_users; ++k) {
      CHECK(max_abs_diff(loaded.realizations[i].per_user[k].h,
                         set[i].per_user[k].h) == 0.0);
      const auto& ga = loaded.realizations[i].per_user[k].geometry;
      const auto& gb = set[i].per_user[k].geometry;
      REQUIRE(ga.ray_gain.size() == gb.ray_gain.size());
      for (std::size_t p = 0; p < ga.ray_gain.size(); ++p) {
        CHECK(ga.ray_gain[p] == gb.ray_gain[p]);
        CHECK(ga.ray_aod[p] == gb.ray_aod[p]);
        CHECK(ga.ray_aoa[p] == gb.ray_aoa[p]);
      }
    }
  }
}

TEST_CASE("channel set persistence: truncated and wrong-version files rejected") {
  SystemConfig cfg = small_config();
  ChannelGeometryParams geom;
  const auto set = generate_channel_set(cfg, geom, 1, Rng(3));
  TempFile file("channels_bad.json");
  save_channel_set(file.path, cfg, geom, 3, set);

  // Truncate the file: parsing must fail, no partial result.
  {
    std::ifstream in(file.path);
    std::string contents((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
    std::ofstream out(file.path, std::ios::trunc);
    out << contents.substr(0, contents.size() / 2);
  }
  CHECK_THROWS_AS(load_channel_set(file.path), ParseError);

  // Unsupported version is reported explicitly.
  save_channel_set(file.path, cfg, geom, 3, set);
  {
    std::ifstream in(file.path);
    std::string contents((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
    const auto pos = contents.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    contents.replace(pos, 19, "\"format_version\": 9");
    std::ofstream out(file.path, std::ios::trunc);
    out << contents;
  }
  try {
    load_channel_set(file.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("version") != std::string::npos);
  }

  CHECK_THROWS_AS(load_channel_set("/nonexistent/dir/channels.json"), IoError);
}
