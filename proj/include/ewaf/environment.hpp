#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ewaf/random.hpp"

namespace ewaf {

// Outcome sources. Every emitted outcome lies in [0,1].
struct StochasticOutcomes {
  double bernoulli_p;
  std::uint64_t seed;
};
struct FixedOutcomes {
  std::vector<double> outcomes;
};
// Observes the prediction and returns the outcome in {0,1} farthest from it:
// 1 if prediction < 1/2, else 0.
struct AdaptiveWorstCase {};

using AdversaryKind = std::variant<StochasticOutcomes, FixedOutcomes, AdaptiveWorstCase>;

class Adversary {
 public:
  explicit Adversary(AdversaryKind kind);

  // Outcome for the next round. Throws InvalidArgument for a prediction
  // outside [0,1] and OutOfRange once a Fixed list is exhausted.
  double next_outcome(double prediction);

  const AdversaryKind& kind() const noexcept { return kind_; }
  std::string label() const;

 private:
  AdversaryKind kind_;
  Rng rng_;
  std::size_t cursor_ = 0;
};

// Expert advice sources. Every emitted value lies in [0,1].
struct ConstantExperts {
  std::vector<double> values;
};
// Each expert starts at a seeded uniform point and moves by a uniform step in
// [-step, step] per round, reflected at 0 and 1.
struct RandomWalkExperts {
  std::size_t num_experts;
  double step;
  std::uint64_t seed;
};
// Row t-1 holds the advice for round t.
struct FixedAdvice {
  std::vector<std::vector<double>> rows;
};

using AdviceKind = std::variant<ConstantExperts, RandomWalkExperts, FixedAdvice>;

class AdviceGenerator {
 public:
  explicit AdviceGenerator(AdviceKind kind);

  std::size_t num_experts() const noexcept { return num_experts_; }

  // Advice for round t >= 1. Deterministic in (kind, t); random walks are
  // replayed from the seed when t goes backwards.
  std::vector<double> next_advice(std::size_t t);

  const AdviceKind& kind() const noexcept { return kind_; }
  std::string label() const;

 private:
  void reset_walk();

  AdviceKind kind_;
  std::size_t num_experts_ = 0;
  // random walk state: positions after round walk_round_
  Rng rng_{0};
  std::vector<double> walk_;
  std::size_t walk_round_ = 0;
};

// Reflects x into [0,1].
double reflect_unit(double x);

}  // namespace ewaf
