#include "dnhb/system_config.hpp"

#include <string>

#include "dnhb/errors.hpp"

namespace dnhb {

void SystemConfig::validate() const {
  if (k_users == 0 || n_s == 0 || n_t == 0 || n_r == 0 || n_rf_t == 0 ||
      n_rf_r == 0)
    throw ConfigError("system config: all counts must be positive");
  if (k_users * n_s > n_rf_t || n_rf_t > n_t)
    throw ConfigError(
        "system config: stream/RF-chain constraint violated, need "
        "k_users*n_s <= n_rf_t <= n_t, got " +
        std::to_string(k_users * n_s) + " / " + std::to_string(n_rf_t) +
        " / " + std::to_string(n_t));
  if (n_s > n_rf_r || n_rf_r > n_r)
    throw ConfigError(
        "system config: per-user constraint violated, need n_s <= n_rf_r <= "
        "n_r, got " +
        std::to_string(n_s) + " / " + std::to_string(n_rf_r) + " / " +
        std::to_string(n_r));
  if (!(power_budget > 0.0))
    throw ConfigError("system config: power_budget must be positive");
  if (!(noise_variance > 0.0))
    throw ConfigError("system config: noise_variance must be positive");
}

}  // namespace dnhb
