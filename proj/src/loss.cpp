#include "ewaf/loss.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <utility>

#include "ewaf/errors.hpp"
#include "ewaf/random.hpp"

namespace ewaf {

LossFunction::LossFunction(LossKind kind, std::string name, Fn fn)
    : kind_(kind), name_(std::move(name)), fn_(std::move(fn)) {}

LossFunction LossFunction::absolute() {
  return {LossKind::Absolute, "abs", [](double p, double y) { return std::abs(p - y); }};
}

LossFunction LossFunction::squared() {
  return {LossKind::Squared, "sq", [](double p, double y) { return (p - y) * (p - y); }};
}

LossFunction LossFunction::custom(std::string name, Fn fn) {
  if (!fn) throw InvalidArgument("custom loss needs a callable");
  return {LossKind::Custom, std::move(name), std::move(fn)};
}

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

double eval_loss(const LossFunction& loss, double prediction, double outcome) {
  if (!in_unit_interval(prediction) || !in_unit_interval(outcome)) {
    std::ostringstream os;
    os << "loss arguments must lie in [0,1] (p=" << prediction << ", y=" << outcome << ")";
    throw InvalidArgument(os.str());
  }
  const double value = loss.raw(prediction, outcome);
  if (!in_unit_interval(value)) {
    std::ostringstream os;
    os.precision(17);
    os << "loss '" << loss.name() << "' returned " << value << " outside [0,1] at p="
       << prediction << ", y=" << outcome;
    throw LossRangeError(os.str());
  }
  return value;
}

ProbeResult convexity_probe(const LossFunction& loss, std::size_t num_samples,
                            std::uint64_t seed) {
  if (num_samples == 0) throw InvalidArgument("convexity probe needs at least one sample");
  constexpr double kTol = 1e-12;
  Rng rng(seed);
  ProbeResult result;
  for (std::size_t k = 0; k < num_samples; ++k) {
    const double p = rng.uniform();
    const double q = rng.uniform();
    const double y = rng.uniform();
    const double lambda = rng.uniform();

    const double lp = loss.raw(p, y);
    const double lq = loss.raw(q, y);
    const double lmix = loss.raw(lambda * p + (1.0 - lambda) * q, y);
    ++result.samples_checked;

    for (double v : {lp, lq, lmix}) {
      if (!in_unit_interval(v)) {
        result.passed = false;
        result.counterexample =
            ConvexityCounterexample{ConvexityCounterexample::Kind::Range, p, q, y, lambda, v, 0.0};
        return result;
      }
    }
    const double chord = lambda * lp + (1.0 - lambda) * lq;
    if (lmix > chord + kTol) {
      result.passed = false;
      result.counterexample = ConvexityCounterexample{ConvexityCounterexample::Kind::Convexity,
                                                      p, q, y, lambda, lmix, chord};
      return result;
    }
  }
  return result;
}

}  // namespace ewaf
