#include "ewaf/schedule.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "ewaf/errors.hpp"

namespace ewaf {

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::PaperSqrt: return "paper";
    case ScheduleKind::CblSqrt: return "cbl";
    case ScheduleKind::Constant: return "constant";
    case ScheduleKind::Custom: return "custom";
  }
  return "unknown";
}

LearningRateSchedule::LearningRateSchedule(ScheduleKind kind, double scale,
                                           std::size_t num_experts, std::vector<double> values)
    : kind_(kind), scale_(scale), num_experts_(num_experts), values_(std::move(values)) {}

LearningRateSchedule LearningRateSchedule::paper_sqrt(std::size_t num_experts) {
  if (num_experts < 2) {
    throw InvalidArgument("sqrt schedule needs at least 2 experts (eta_t = 0 for N = 1)");
  }
  return {ScheduleKind::PaperSqrt, std::sqrt(4.0 * std::log(static_cast<double>(num_experts))),
          num_experts, {}};
}

LearningRateSchedule LearningRateSchedule::cbl_sqrt(std::size_t num_experts) {
  if (num_experts < 2) {
    throw InvalidArgument("sqrt schedule needs at least 2 experts (eta_t = 0 for N = 1)");
  }
  return {ScheduleKind::CblSqrt, std::sqrt(8.0 * std::log(static_cast<double>(num_experts))),
          num_experts, {}};
}

LearningRateSchedule LearningRateSchedule::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument("constant learning rate must be positive and finite");
  }
  return {ScheduleKind::Constant, value, 0, {}};
}

LearningRateSchedule LearningRateSchedule::custom(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("custom schedule needs at least one rate");
  return {ScheduleKind::Custom, 0.0, 0, std::move(values)};
}

double LearningRateSchedule::eta(std::size_t t) const {
  if (t == 0) throw OutOfRange("learning rate rounds are 1-based");
  switch (kind_) {
    case ScheduleKind::PaperSqrt:
    case ScheduleKind::CblSqrt:
      return scale_ / std::sqrt(static_cast<double>(t));
    case ScheduleKind::Constant:
      return scale_;
    case ScheduleKind::Custom:
      if (t > values_.size()) {
        throw OutOfRange("round " + std::to_string(t) + " is past the custom schedule horizon " +
                         std::to_string(values_.size()));
      }
      return values_[t - 1];
  }
  return scale_;
}

std::optional<std::size_t> LearningRateSchedule::horizon() const {
  if (kind_ == ScheduleKind::Custom) return values_.size();
  return std::nullopt;
}

std::optional<std::size_t> LearningRateSchedule::bound_num_experts() const {
  if (kind_ == ScheduleKind::PaperSqrt || kind_ == ScheduleKind::CblSqrt) return num_experts_;
  return std::nullopt;
}

std::string LearningRateSchedule::label() const {
  if (kind_ == ScheduleKind::Constant) {
    std::ostringstream os;
    os << "constant:" << scale_;
    return os.str();
  }
  return to_string(kind_);
}

ScheduleValidation validate_schedule(const LearningRateSchedule& schedule, std::size_t horizon) {
  ScheduleValidation result;
  if (horizon == 0) throw InvalidArgument("validation horizon must be at least 1");

  auto fail = [&](ScheduleDefect defect, std::size_t t, std::string msg) {
    result.valid = false;
    result.defect = defect;
    result.first_bad_round = t;
    result.message = std::move(msg);
    return result;
  };

  if (auto h = schedule.horizon(); h && *h < horizon) {
    return fail(ScheduleDefect::PastHorizon, *h + 1,
                "schedule defines " + std::to_string(*h) + " rates but horizon is " +
                    std::to_string(horizon));
  }

  // Sqrt and constant schedules are monotone by construction; only the
  // first rate needs inspection. Custom schedules are scanned in full.
  const std::size_t scan = schedule.kind() == ScheduleKind::Custom ? horizon : 1;
  double prev = 0.0;
  for (std::size_t t = 1; t <= scan; ++t) {
    const double eta = schedule.eta(t);
    if (!std::isfinite(eta)) {
      return fail(ScheduleDefect::NonFinite, t, "eta_" + std::to_string(t) + " is not finite");
    }
    if (!(eta > 0.0)) {
      return fail(ScheduleDefect::NonPositive, t, "eta_" + std::to_string(t) + " is not positive");
    }
    if (t >= 2 && eta > prev) {
      return fail(ScheduleDefect::Increasing, t,
                  "eta_" + std::to_string(t) + " exceeds eta_" + std::to_string(t - 1));
    }
    prev = eta;
  }

  if (const double eta1 = schedule.eta(1); eta1 > kLargeEtaWarningThreshold) {
    std::ostringstream os;
    os << "eta_1 = " << eta1 << " is above " << kLargeEtaWarningThreshold
       << "; weights will be numerically extreme";
    result.warning = os.str();
  }
  return result;
}

double sum_eta(const LearningRateSchedule& schedule, std::size_t n) {
  // Neumaier-compensated; horizons reach 10^6 terms.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t t = 1; t <= n; ++t) {
    const double term = schedule.eta(t);
    const double next = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
    sum = next;
  }
  return sum + carry;
}

}  // namespace ewaf
