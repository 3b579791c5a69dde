#pragma once

// Test-only reference computations. Deliberately naive: 50-digit floats,
// direct exponentiation, replay from raw records. Nothing here calls into
// the log-domain or incremental code paths it is used to check.

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ewaf/forecaster.hpp"

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

inline double sqrt_log_rate(double c, std::size_t n_experts, std::size_t t) {
  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;
  return static_cast<double>(sqrt(Big(c) * log(Big(n_experts)) / Big(t)));
}

// exp(-eta L_i) / sum_j exp(-eta L_j) without any shift.
inline std::vector<double> naive_weights(const std::vector<double>& losses, double eta) {
  std::vector<double> w(losses.size());
  double total = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    w[i] = std::exp(-eta * losses[i]);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

inline std::vector<double> big_weights(const std::vector<double>& losses, double eta) {
  using boost::multiprecision::exp;
  std::vector<Big> w(losses.size());
  Big total = 0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    w[i] = exp(-Big(eta) * Big(losses[i]));
    total += w[i];
  }
  std::vector<double> out(losses.size());
  for (std::size_t i = 0; i < losses.size(); ++i) out[i] = static_cast<double>(w[i] / total);
  return out;
}

// ln N / eta_n + (1/8) sum eta_t from an explicit list of rates.
inline double bound_from_rates(const std::vector<double>& etas, std::size_t n_experts) {
  using boost::multiprecision::log;
  Big sum = 0;
  for (double e : etas) sum += Big(e);
  return static_cast<double>(log(Big(n_experts)) / Big(etas.back()) + sum / 8);
}

inline double comparison_from_rates(const std::vector<double>& etas, std::size_t n_experts) {
  using boost::multiprecision::log;
  Big sum = 0;
  for (double e : etas) sum += Big(e);
  return static_cast<double>((Big(2) / Big(etas.back()) - Big(1) / Big(etas.front())) *
                                 log(Big(n_experts)) +
                             sum / 8);
}

struct Replay {
  std::vector<double> expert_losses;
  double forecaster_loss = 0.0;
};

// Cumulative losses recomputed from raw records.
inline Replay replay(const std::vector<ewaf::RoundRecord>& log, std::size_t n_experts) {
  Replay r;
  r.expert_losses.assign(n_experts, 0.0);
  for (const auto& rec : log) {
    for (std::size_t i = 0; i < n_experts; ++i) r.expert_losses[i] += rec.expert_losses[i];
    r.forecaster_loss += rec.forecaster_loss;
  }
  return r;
}

// log s_{i,t} evaluated term by term in 50 digits.
inline std::vector<double> big_log_s(const std::vector<ewaf::RoundRecord>& log, std::size_t t,
                                     std::size_t n_experts) {
  std::vector<Big> losses(n_experts, Big(0));
  Big forecaster = 0;
  Big sum = 0;
  for (std::size_t k = 0; k < t; ++k) {
    for (std::size_t i = 0; i < n_experts; ++i) losses[i] += Big(log[k].expert_losses[i]);
    forecaster += Big(log[k].forecaster_loss);
    sum += Big(log[k].eta);
  }
  std::vector<double> out(n_experts, 0.0);
  if (t == 0) return out;
  const Big eta = Big(log[t - 1].eta);
  for (std::size_t i = 0; i < n_experts; ++i) {
    out[i] = static_cast<double>(-eta * losses[i] + eta * forecaster - eta * sum / 8);
  }
  return out;
}

}  // namespace oracle
