#include "ewaf/bounds.hpp"

#include <cmath>
#include <string>

#include "ewaf/errors.hpp"

namespace ewaf {

namespace {

void require_valid(const LearningRateSchedule& schedule, std::size_t num_experts, std::size_t n) {
  if (num_experts == 0) throw InvalidArgument("bounds need at least one expert");
  if (n == 0) throw InvalidArgument("bounds need a horizon n >= 1");
  const auto v = validate_schedule(schedule, n);
  if (!v) throw InvalidArgument("schedule invalid over horizon " + std::to_string(n) + ": " + v.message);
}

double log_experts(std::size_t num_experts) { return std::log(static_cast<double>(num_experts)); }

}  // namespace

double bound_time_varying(const LearningRateSchedule& schedule, std::size_t num_experts,
                          std::size_t n) {
  require_valid(schedule, num_experts, n);
  return log_experts(num_experts) / schedule.eta(n) + sum_eta(schedule, n) / 8.0;
}

double bound_corollary(std::size_t num_experts, std::size_t n) {
  if (num_experts < 2) throw InvalidArgument("corollary bound needs N >= 2");
  if (n == 0) throw InvalidArgument("bounds need a horizon n >= 1");
  return std::sqrt(static_cast<double>(n) * log_experts(num_experts));
}

double bound_comparison(const LearningRateSchedule& schedule, std::size_t num_experts,
                        std::size_t n) {
  require_valid(schedule, num_experts, n);
  return (2.0 / schedule.eta(n) - 1.0 / schedule.eta(1)) * log_experts(num_experts) +
         sum_eta(schedule, n) / 8.0;
}

double bound_classical_sqrt(std::size_t num_experts, std::size_t n) {
  if (num_experts < 2) throw InvalidArgument("classical sqrt bound needs N >= 2");
  if (n == 0) throw InvalidArgument("bounds need a horizon n >= 1");
  const double ln_n = log_experts(num_experts);
  return std::sqrt(2.0 * static_cast<double>(n) * ln_n) + std::sqrt(0.125 * ln_n);
}

BoundReport compare_bounds(const LearningRateSchedule& schedule, std::size_t num_experts,
                           std::size_t n, std::optional<double> realized_regret) {
  BoundReport report;
  report.n = n;
  report.num_experts = num_experts;
  report.bound_eq1 = bound_time_varying(schedule, num_experts, n);
  report.bound_comparison = bound_comparison(schedule, num_experts, n);
  if (schedule.kind() == ScheduleKind::PaperSqrt) {
    report.bound_corollary = bound_corollary(num_experts, n);
  }
  report.realized_regret = realized_regret;
  report.violation = realized_regret && *realized_regret > report.bound_eq1 + kRunTolerance;
  return report;
}

PrefixBound::PrefixBound(const LearningRateSchedule& schedule, std::size_t num_experts)
    : schedule_(&schedule), log_n_(log_experts(num_experts)) {
  if (num_experts == 0) throw InvalidArgument("bounds need at least one expert");
}

double PrefixBound::advance() {
  ++t_;
  const double eta = schedule_->eta(t_);
  // same compensated sum as sum_eta()
  const double next = sum_ + eta;
  carry_ += std::abs(sum_) >= std::abs(eta) ? (sum_ - next) + eta : (eta - next) + sum_;
  sum_ = next;
  return log_n_ / eta + (sum_ + carry_) / 8.0;
}

}  // namespace ewaf
