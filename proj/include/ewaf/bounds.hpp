#pragma once

#include <cstddef>
#include <optional>

#include "ewaf/schedule.hpp"

namespace ewaf {

// Absolute tolerance for comparing realized regret with a bound; cumulative
// losses carry rounding from up to 10^6 additions.
inline constexpr double kRunTolerance = 1e-6;
// Absolute tolerance for closed-form algebraic identities between bounds.
inline constexpr double kIdentityTolerance = 1e-12;

// ln(N) / eta_n + (1/8) sum_{t=1}^{n} eta_t. Throws InvalidArgument when the
// schedule is invalid over n or N = 0.
double bound_time_varying(const LearningRateSchedule& schedule, std::size_t num_experts,
                          std::size_t n);

// sqrt(n ln N), the guarantee for eta_t = sqrt(4 ln N / t). Requires N >= 2.
double bound_corollary(std::size_t num_experts, std::size_t n);

// (2 / eta_n - 1 / eta_1) ln N + (1/8) sum_{t=1}^{n} eta_t, the bound implied
// by the classical potential argument. Never below bound_time_varying.
double bound_comparison(const LearningRateSchedule& schedule, std::size_t num_experts,
                        std::size_t n);

// sqrt(2 n ln N) + sqrt(ln N / 8), the classical bound for eta_t = sqrt(8 ln N / t).
double bound_classical_sqrt(std::size_t num_experts, std::size_t n);

struct BoundReport {
  std::size_t n = 0;
  std::size_t num_experts = 0;
  double bound_eq1 = 0.0;                  // bound_time_varying
  std::optional<double> bound_corollary;   // PaperSqrt only
  double bound_comparison = 0.0;
  std::optional<double> realized_regret;
  bool violation = false;                  // realized_regret > bound_eq1 + kRunTolerance
};

BoundReport compare_bounds(const LearningRateSchedule& schedule, std::size_t num_experts,
                           std::size_t n, std::optional<double> realized_regret = std::nullopt);

// Incremental evaluation of bound_time_varying over every prefix horizon
// 1, 2, ..., n at O(1) per round.
class PrefixBound {
 public:
  PrefixBound(const LearningRateSchedule& schedule, std::size_t num_experts);

  // Advances to the next horizon and returns the bound there.
  double advance();

  std::size_t horizon() const noexcept { return t_; }
  double sum_eta() const noexcept { return sum_ + carry_; }

 private:
  const LearningRateSchedule* schedule_;
  double log_n_;
  std::size_t t_ = 0;
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace ewaf
