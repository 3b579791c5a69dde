#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace ewaf {

enum class LossKind { Absolute, Squared, Custom };

// Loss l : [0,1] x [0,1] -> [0,1], convex in the prediction.
//
// Absolute and Squared satisfy the hypotheses by construction. Custom losses
// are accepted as-is and are expected to pass convexity_probe; a value
// outside [0,1] at evaluation time is reported as LossRangeError by the
// forecaster, never clamped.
class LossFunction {
 public:
  using Fn = std::function<double(double prediction, double outcome)>;

  static LossFunction absolute();
  static LossFunction squared();
  static LossFunction custom(std::string name, Fn fn);

  LossKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  // Unchecked evaluation.
  double raw(double prediction, double outcome) const { return fn_(prediction, outcome); }

 private:
  LossFunction(LossKind kind, std::string name, Fn fn);

  LossKind kind_;
  std::string name_;
  Fn fn_;
};

// Evaluates the loss after checking p, y in [0,1] (InvalidArgument) and the
// result in [0,1] (LossRangeError).
double eval_loss(const LossFunction& loss, double prediction, double outcome);

struct ConvexityCounterexample {
  enum class Kind { Range, Convexity };
  Kind kind;
  double p;
  double p_other;
  double y;
  double lambda;
  double lhs;  // l(lambda p + (1 - lambda) p', y), or the out-of-range value
  double rhs;  // lambda l(p,y) + (1 - lambda) l(p',y)
};

struct ProbeResult {
  bool passed = true;
  std::size_t samples_checked = 0;
  std::optional<ConvexityCounterexample> counterexample;

  explicit operator bool() const noexcept { return passed; }
};

// Samples (p, p', y, lambda) uniformly from [0,1]^4 and checks range and
// l(lambda p + (1-lambda) p', y) <= lambda l(p,y) + (1-lambda) l(p',y) + 1e-12.
// Stops at the first counterexample.
ProbeResult convexity_probe(const LossFunction& loss, std::size_t num_samples,
                            std::uint64_t seed);

}  // namespace ewaf
