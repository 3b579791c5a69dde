#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ewaf {

enum class ScheduleKind { PaperSqrt, CblSqrt, Constant, Custom };

std::string to_string(ScheduleKind kind);

// Learning-rate sequence eta_1 >= eta_2 >= ... > 0.
//
//   PaperSqrt  eta_t = sqrt(4 ln N / t)
//   CblSqrt    eta_t = sqrt(8 ln N / t)
//   Constant   eta_t = c
//   Custom     eta_t = values[t - 1], finite horizon
//
// The sqrt variants are bound to an expert count N >= 2; with N = 1 they
// would produce eta_t = 0 and are rejected at construction. Schedules are
// immutable once built.
class LearningRateSchedule {
 public:
  static LearningRateSchedule paper_sqrt(std::size_t num_experts);
  static LearningRateSchedule cbl_sqrt(std::size_t num_experts);
  static LearningRateSchedule constant(double value);
  static LearningRateSchedule custom(std::vector<double> values);

  ScheduleKind kind() const noexcept { return kind_; }

  // Rate for round t (1-based). Throws OutOfRange for t = 0 or t past the
  // horizon of a Custom schedule.
  double eta(std::size_t t) const;

  // Number of rounds the schedule is defined for; nullopt when unbounded.
  std::optional<std::size_t> horizon() const;

  // Expert count the sqrt variants were built for; nullopt otherwise.
  std::optional<std::size_t> bound_num_experts() const;

  // Short label used in reports: "paper", "cbl", "constant:0.5", "custom".
  std::string label() const;

 private:
  LearningRateSchedule(ScheduleKind kind, double scale, std::size_t num_experts,
                       std::vector<double> values);

  ScheduleKind kind_;
  double scale_;  // sqrt(c ln N) for sqrt kinds, the constant otherwise
  std::size_t num_experts_;
  std::vector<double> values_;
};

enum class ScheduleDefect { None, NonPositive, Increasing, NonFinite, PastHorizon };

struct ScheduleValidation {
  bool valid = true;
  ScheduleDefect defect = ScheduleDefect::None;
  std::size_t first_bad_round = 0;  // 1-based; 0 when valid
  std::string message;
  // Set when eta_1 exceeds the numerical-comfort threshold. Not an error.
  std::optional<std::string> warning;

  explicit operator bool() const noexcept { return valid; }
};

inline constexpr double kLargeEtaWarningThreshold = 50.0;

// Accepts iff eta_t > 0 for all t <= horizon and eta_t <= eta_{t-1} for
// 2 <= t <= horizon. Reports the first offending round.
ScheduleValidation validate_schedule(const LearningRateSchedule& schedule, std::size_t horizon);

// Sum_{t=1}^{n} eta_t by direct summation.
double sum_eta(const LearningRateSchedule& schedule, std::size_t n);

}  // namespace ewaf
