#ifndef DNHB_SYSTEM_CONFIG_HPP
#define DNHB_SYSTEM_CONFIG_HPP

#include <cstddef>

namespace dnhb {

// Dimensions and budgets of the multi-user downlink: a base station with n_t
// antennas and n_rf_t RF chains serving k_users users, each with n_r antennas,
// n_rf_r RF chains and n_s data streams. Governs every dimension check in the
// library.
struct SystemConfig {
  std::size_t n_t = 16;       // transmit antennas at the base station
  std::size_t n_r = 4;        // receive antennas per user
  std::size_t n_rf_t = 4;     // base-station RF chains
  std::size_t n_rf_r = 2;     // RF chains per user
  std::size_t n_s = 2;        // data streams per user
  std::size_t k_users = 2;    // users
  double power_budget = 1.0;  // total transmit power P (linear)
  double noise_variance = 1.0;  // per-receive-antenna sigma^2 (linear)

  std::size_t total_streams() const { return k_users * n_s; }

  // Throws ConfigError unless k_users*n_s <= n_rf_t <= n_t,
  // n_s <= n_rf_r <= n_r, power_budget > 0 and noise_variance > 0.
  void validate() const;
};

}  // namespace dnhb

#endif  // DNHB_SYSTEM_CONFIG_HPP
