#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ewaf/loss.hpp"
#include "ewaf/schedule.hpp"

namespace ewaf {

// Everything observed and produced in one round t.
struct RoundRecord {
  std::size_t round = 0;               // t >= 1
  double eta = 0.0;                    // eta_t
  std::vector<double> advice;          // f_{i,t}
  std::vector<double> weights;         // normalized, sum to 1
  double prediction = 0.0;             // weighted average of advice
  double outcome = 0.0;                // y_t
  std::vector<double> expert_losses;   // l(f_{i,t}, y_t)
  double forecaster_loss = 0.0;        // l(prediction, y_t)
};

// Normalized weights exp(-eta * L_i) / sum_j exp(-eta * L_j), evaluated in
// log domain with the largest exponent subtracted first.
std::vector<double> compute_weights(std::span<const double> cumulative_losses, double eta);

// Exponentially weighted average forecaster with time-varying learning rate.
//
// At round t the weights are rebuilt from the cumulative losses L_{i,t-1}
// using the current rate eta_t. They are never updated multiplicatively:
// eta changes between rounds, so the previous weights cannot be reused.
class Forecaster {
 public:
  // Throws InvalidArgument for num_experts = 0, a sqrt schedule bound to a
  // different expert count, or a schedule failing validation.
  Forecaster(std::size_t num_experts, LearningRateSchedule schedule, LossFunction loss);

  std::size_t num_experts() const noexcept { return cumulative_expert_losses_.size(); }
  std::size_t round() const noexcept { return round_; }
  const std::vector<double>& cumulative_expert_losses() const noexcept {
    return cumulative_expert_losses_;
  }
  double cumulative_forecaster_loss() const noexcept { return cumulative_forecaster_loss_; }
  const LearningRateSchedule& schedule() const noexcept { return schedule_; }
  const LossFunction& loss() const noexcept { return loss_; }

  // Rate for the upcoming round.
  double next_eta() const { return schedule_.eta(round_ + 1); }

  // Weights for the upcoming round.
  std::vector<double> weights() const;

  // Prediction for the upcoming round. Does not change state.
  double predict(std::span<const double> advice) const;

  // Plays one round: predicts, scores against the outcome, accumulates.
  // Throws InvalidArgument on an advice length mismatch or values outside
  // [0,1], LossRangeError if the loss leaves [0,1]. State is unchanged when
  // it throws.
  RoundRecord step(std::span<const double> advice, double outcome);

  // L-hat_t - min_i L_{i,t}. May be negative.
  double regret() const;

  // argmin_i L_{i,t}, lowest index on ties.
  std::size_t best_expert() const;

 private:
  void check_advice(std::span<const double> advice) const;

  std::size_t round_ = 0;
  std::vector<double> cumulative_expert_losses_;
  double cumulative_forecaster_loss_ = 0.0;
  LearningRateSchedule schedule_;
  LossFunction loss_;
};

// Weighted average of advice, clamped to the advice's convex hull to absorb
// the last-ulp rounding of the dot product.
double weighted_prediction(std::span<const double> weights, std::span<const double> advice);

}  // namespace ewaf
