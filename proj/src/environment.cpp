#include "ewaf/environment.hpp"

#include <cmath>
#include <sstream>

#include "ewaf/errors.hpp"

namespace ewaf {

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t seed_of(const AdversaryKind& kind) {
  if (const auto* s = std::get_if<StochasticOutcomes>(&kind)) return s->seed;
  return 0;
}

}  // namespace

double reflect_unit(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("cannot reflect a non-finite value");
  // Period-2 folding: [0,1] maps to itself, [1,2] folds back.
  double r = std::fmod(std::abs(x), 2.0);
  return r > 1.0 ? 2.0 - r : r;
}

Adversary::Adversary(AdversaryKind kind) : kind_(std::move(kind)), rng_(seed_of(kind_)) {
  std::visit(overloaded{
                 [](const StochasticOutcomes& s) {
                   if (!in_unit_interval(s.bernoulli_p)) {
                     throw InvalidArgument("Bernoulli parameter must lie in [0,1]");
                   }
                 },
                 [](const FixedOutcomes& f) {
                   for (double y : f.outcomes) {
                     if (!in_unit_interval(y)) {
                       throw InvalidArgument("fixed outcomes must lie in [0,1]");
                     }
                   }
                 },
                 [](const AdaptiveWorstCase&) {},
             },
             kind_);
}

double Adversary::next_outcome(double prediction) {
  if (!in_unit_interval(prediction)) throw InvalidArgument("prediction must lie in [0,1]");
  return std::visit(overloaded{
                        [&](const StochasticOutcomes& s) {
                          return rng_.bernoulli(s.bernoulli_p) ? 1.0 : 0.0;
                        },
                        [&](const FixedOutcomes& f) {
                          if (cursor_ >= f.outcomes.size()) {
                            throw OutOfRange("fixed outcome list exhausted after " +
                                             std::to_string(f.outcomes.size()) + " rounds");
                          }
                          return f.outcomes[cursor_++];
                        },
                        // tie at 1/2 goes to 0
                        [&](const AdaptiveWorstCase&) { return prediction < 0.5 ? 1.0 : 0.0; },
                    },
                    kind_);
}

std::string Adversary::label() const {
  return std::visit(overloaded{
                        [](const StochasticOutcomes& s) {
                          std::ostringstream os;
                          os << "bernoulli:" << s.bernoulli_p;
                          return os.str();
                        },
                        [](const FixedOutcomes&) { return std::string("fixed"); },
                        [](const AdaptiveWorstCase&) { return std::string("adaptive"); },
                    },
                    kind_);
}

AdviceGenerator::AdviceGenerator(AdviceKind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [&](const ConstantExperts& c) {
                   if (c.values.empty()) throw InvalidArgument("constant advice needs experts");
                   for (double v : c.values) {
                     if (!in_unit_interval(v)) {
                       throw InvalidArgument("constant advice must lie in [0,1]");
                     }
                   }
                   num_experts_ = c.values.size();
                 },
                 [&](const RandomWalkExperts& w) {
                   if (w.num_experts == 0) throw InvalidArgument("random walk needs experts");
                   if (!(w.step >= 0.0) || !std::isfinite(w.step)) {
                     throw InvalidArgument("random walk step must be finite and nonnegative");
                   }
                   num_experts_ = w.num_experts;
                   reset_walk();
                 },
                 [&](const FixedAdvice& f) {
                   if (f.rows.empty() || f.rows.front().empty()) {
                     throw InvalidArgument("fixed advice matrix is empty");
                   }
                   num_experts_ = f.rows.front().size();
                   for (const auto& row : f.rows) {
                     if (row.size() != num_experts_) {
                       throw InvalidArgument("fixed advice rows differ in length");
                     }
                     for (double v : row) {
                       if (!in_unit_interval(v)) {
                         throw InvalidArgument("fixed advice must lie in [0,1]");
                       }
                     }
                   }
                 },
             },
             kind_);
}

void AdviceGenerator::reset_walk() {
  const auto& w = std::get<RandomWalkExperts>(kind_);
  rng_ = Rng(w.seed);
  walk_.assign(w.num_experts, 0.0);
  for (double& x : walk_) x = rng_.uniform();
  walk_round_ = 0;
}

std::vector<double> AdviceGenerator::next_advice(std::size_t t) {
  if (t == 0) throw OutOfRange("advice rounds are 1-based");
  return std::visit(overloaded{
                        [&](const ConstantExperts& c) { return c.values; },
                        [&](const RandomWalkExperts& w) {
                          if (t <= walk_round_) reset_walk();
                          // round 1 is the seeded starting point
                          if (walk_round_ == 0) walk_round_ = 1;
                          while (walk_round_ < t) {
                            for (double& x : walk_) x = reflect_unit(x + rng_.uniform(-w.step, w.step));
                            ++walk_round_;
                          }
                          return walk_;
                        },
                        [&](const FixedAdvice& f) {
                          if (t > f.rows.size()) {
                            throw OutOfRange("fixed advice matrix exhausted at round " +
                                             std::to_string(t));
                          }
                          return f.rows[t - 1];
                        },
                    },
                    kind_);
}

std::string AdviceGenerator::label() const {
  return std::visit(overloaded{
                        [](const ConstantExperts&) { return std::string("constant"); },
                        [](const RandomWalkExperts& w) {
                          std::ostringstream os;
                          os << "walk:" << w.step;
                          return os.str();
                        },
                        [](const FixedAdvice&) { return std::string("fixed"); },
                    },
                    kind_);
}

}  // namespace ewaf
