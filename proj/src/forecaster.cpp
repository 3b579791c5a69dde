#include "ewaf/forecaster.hpp"

#include <algorithm>
#include <string>

#include "ewaf/errors.hpp"
#include "ewaf/log_sum_exp.hpp"

namespace ewaf {

std::vector<double> compute_weights(std::span<const double> cumulative_losses, double eta) {
  if (cumulative_losses.empty()) throw InvalidArgument("no experts to weight");
  std::vector<double> exponents(cumulative_losses.size());
  for (std::size_t i = 0; i < exponents.size(); ++i) exponents[i] = -eta * cumulative_losses[i];
  return numeric::softmax(exponents);
}

double weighted_prediction(std::span<const double> weights, std::span<const double> advice) {
  double p = 0.0;
  for (std::size_t i = 0; i < advice.size(); ++i) p += weights[i] * advice[i];
  const auto [lo, hi] = std::minmax_element(advice.begin(), advice.end());
  return std::clamp(p, *lo, *hi);
}

Forecaster::Forecaster(std::size_t num_experts, LearningRateSchedule schedule, LossFunction loss)
    : cumulative_expert_losses_(num_experts, 0.0),
      schedule_(std::move(schedule)),
      loss_(std::move(loss)) {
  if (num_experts == 0) throw InvalidArgument("forecaster needs at least one expert");
  if (auto bound = schedule_.bound_num_experts(); bound && *bound != num_experts) {
    throw InvalidArgument("schedule was built for " + std::to_string(*bound) +
                          " experts, forecaster has " + std::to_string(num_experts));
  }
  const auto validation = validate_schedule(schedule_, schedule_.horizon().value_or(1));
  if (!validation) throw InvalidArgument("invalid learning-rate schedule: " + validation.message);
}

std::vector<double> Forecaster::weights() const {
  return compute_weights(cumulative_expert_losses_, next_eta());
}

void Forecaster::check_advice(std::span<const double> advice) const {
  if (advice.size() != num_experts()) {
    throw InvalidArgument("advice has " + std::to_string(advice.size()) + " entries, expected " +
                          std::to_string(num_experts()));
  }
  for (double v : advice) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("advice must lie in [0,1]");
  }
}

double Forecaster::predict(std::span<const double> advice) const {
  check_advice(advice);
  return weighted_prediction(weights(), advice);
}

RoundRecord Forecaster::step(std::span<const double> advice, double outcome) {
  check_advice(advice);
  RoundRecord rec;
  rec.round = round_ + 1;
  rec.eta = schedule_.eta(rec.round);
  rec.advice.assign(advice.begin(), advice.end());
  rec.weights = compute_weights(cumulative_expert_losses_, rec.eta);
  rec.prediction = weighted_prediction(rec.weights, advice);
  rec.outcome = outcome;
  rec.forecaster_loss = eval_loss(loss_, rec.prediction, outcome);
  rec.expert_losses.resize(advice.size());
  for (std::size_t i = 0; i < advice.size(); ++i) {
    rec.expert_losses[i] = eval_loss(loss_, advice[i], outcome);
  }

  for (std::size_t i = 0; i < advice.size(); ++i) {
    cumulative_expert_losses_[i] += rec.expert_losses[i];
  }
  cumulative_forecaster_loss_ += rec.forecaster_loss;
  round_ = rec.round;
  return rec;
}

double Forecaster::regret() const {
  return cumulative_forecaster_loss_ -
         *std::min_element(cumulative_expert_losses_.begin(), cumulative_expert_losses_.end());
}

std::size_t Forecaster::best_expert() const {
  // min_element returns the first minimum
  return static_cast<std::size_t>(
      std::min_element(cumulative_expert_losses_.begin(), cumulative_expert_losses_.end()) -
      cumulative_expert_losses_.begin());
}

}  // namespace ewaf
