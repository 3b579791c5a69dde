#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ewaf {

// Bad parameters or a schedule/config that violates the forecaster's
// hypotheses (positive nonincreasing rates, losses in [0,1], ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A finite resource (Custom schedule, Fixed outcome list, Fixed advice
// matrix, record history) was queried past its end.
class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A user-supplied loss returned a value outside [0,1].
class LossRangeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A runtime certificate failed: a proof inequality or the regret bound.
class VerificationFailure : public std::runtime_error {
 public:
  VerificationFailure(std::string check, std::size_t round, double lhs, double rhs);

  const std::string& check() const noexcept { return check_; }
  std::size_t round() const noexcept { return round_; }
  double lhs() const noexcept { return lhs_; }
  double rhs() const noexcept { return rhs_; }

 private:
  std::string check_;
  std::size_t round_;
  double lhs_;
  double rhs_;
};

}  // namespace ewaf
