#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace ewaf::numeric {

// log(sum_i exp(args[i])) with the maximum subtracted before exponentiation.
// Returns -inf for an empty input.
inline double log_sum_exp(std::span<const double> args) {
  if (args.empty()) return -std::numeric_limits<double>::infinity();
  const double max_arg = *std::max_element(args.begin(), args.end());
  if (!std::isfinite(max_arg)) return max_arg;
  double sum = 0.0;
  for (double a : args) sum += std::exp(a - max_arg);
  return max_arg + std::log(sum);
}

// Normalized exp(args[i]) / sum_j exp(args[j]), computed in log domain.
inline std::vector<double> softmax(std::span<const double> args) {
  std::vector<double> out(args.size());
  if (args.empty()) return out;
  const double max_arg = *std::max_element(args.begin(), args.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    out[i] = std::exp(args[i] - max_arg);
    sum += out[i];
  }
  for (double& w : out) w /= sum;
  return out;
}

}  // namespace ewaf::numeric
