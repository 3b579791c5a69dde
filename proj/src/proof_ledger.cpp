#include "ewaf/proof_ledger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ewaf/errors.hpp"
#include "ewaf/log_sum_exp.hpp"

namespace ewaf {

namespace {

using ledger_tolerance::kAccumulated;
using ledger_tolerance::kSingleStep;

// log of (1/N) sum_j exp(log_x[j])
double log_uniform_mean(std::span<const double> log_x) {
  return numeric::log_sum_exp(log_x) - std::log(static_cast<double>(log_x.size()));
}

std::vector<double> closed_form(std::span<const double> cumulative_expert_losses,
                                double cumulative_forecaster_loss, double eta, double sum_eta) {
  std::vector<double> out(cumulative_expert_losses.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = -eta * cumulative_expert_losses[i] + eta * cumulative_forecaster_loss -
             eta * sum_eta / 8.0;
  }
  return out;
}

}  // namespace

ProofLedgerRow initial_ledger_row(std::size_t num_experts) {
  if (num_experts == 0) throw InvalidArgument("ledger needs at least one expert");
  ProofLedgerRow row;
  row.log_s.assign(num_experts, 0.0);
  row.cumulative_expert_losses.assign(num_experts, 0.0);
  row.mass = 1.0;
  return row;
}

std::vector<double> s_closed_form(std::span<const RoundRecord> history, std::size_t t,
                                  std::size_t num_experts) {
  if (t > history.size()) {
    throw OutOfRange("round " + std::to_string(t) + " is past the history of " +
                     std::to_string(history.size()) + " rounds");
  }
  if (t == 0) return std::vector<double>(num_experts, 0.0);

  std::vector<double> losses(num_experts, 0.0);
  double forecaster_loss = 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    const RoundRecord& rec = history[k];
    if (rec.expert_losses.size() != num_experts) {
      throw InvalidArgument("record expert count does not match");
    }
    for (std::size_t i = 0; i < num_experts; ++i) losses[i] += rec.expert_losses[i];
    forecaster_loss += rec.forecaster_loss;
    sum += rec.eta;
  }
  return closed_form(losses, forecaster_loss, history[t - 1].eta, sum);
}

std::vector<double> s_recursive_step(std::span<const double> prev_log_s,
                                     const RoundRecord& record, double eta_prev) {
  if (!(record.eta > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (eta_prev < record.eta) {
    throw InvalidArgument("learning rate increased at round " + std::to_string(record.round));
  }
  if (prev_log_s.size() != record.expert_losses.size()) {
    throw InvalidArgument("record expert count does not match");
  }
  const double eta = record.eta;
  const double alpha = eta / eta_prev;
  std::vector<double> out(prev_log_s.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = alpha * prev_log_s[i] - eta * record.expert_losses[i] +
             eta * record.forecaster_loss - eta * eta / 8.0;
  }
  return out;
}

ProofLedgerRow check_round(const ProofLedgerRow& prev_row, const RoundRecord& record,
                           double eta_prev) {
  const std::size_t n_experts = prev_row.log_s.size();
  const std::size_t t = record.round;
  if (t != prev_row.round + 1) {
    throw InvalidArgument("ledger expected round " + std::to_string(prev_row.round + 1) +
                          ", got " + std::to_string(t));
  }
  if (record.weights.size() != n_experts || record.expert_losses.size() != n_experts) {
    throw InvalidArgument("record expert count does not match");
  }
  if (prev_row.mass > 1.0 + kAccumulated) {
    throw VerificationFailure("mass (previous row)", prev_row.round, prev_row.mass, 1.0);
  }

  std::vector<double> next_log_s = s_recursive_step(prev_row.log_s, record, eta_prev);

  const double eta = record.eta;
  const double alpha = eta / eta_prev;
  const std::span<const double> q = record.weights;

  ProofLedgerRow row;
  row.round = t;
  row.eta = eta;

  // convexity of the loss
  row.convexity_lhs = record.forecaster_loss;
  row.convexity_rhs = 0.0;
  for (std::size_t i = 0; i < n_experts; ++i) row.convexity_rhs += q[i] * record.expert_losses[i];
  if (row.convexity_lhs > row.convexity_rhs + kSingleStep) {
    throw VerificationFailure("convexity", t, row.convexity_lhs, row.convexity_rhs);
  }

  // convexity + Hoeffding
  row.hoeffding_lhs = std::exp(-eta * record.forecaster_loss);
  row.hoeffding_rhs = 0.0;
  for (std::size_t i = 0; i < n_experts; ++i) {
    row.hoeffding_rhs += q[i] * std::exp(-eta * record.expert_losses[i] - eta * eta / 8.0);
  }
  if (row.hoeffding_lhs < row.hoeffding_rhs - kSingleStep) {
    throw VerificationFailure("hoeffding", t, row.hoeffding_lhs, row.hoeffding_rhs);
  }

  // weights as a ratio of powered potentials
  std::vector<double> powered(n_experts);
  for (std::size_t i = 0; i < n_experts; ++i) powered[i] = alpha * prev_row.log_s[i];
  const std::vector<double> q_from_s = numeric::softmax(powered);
  for (std::size_t i = 0; i < n_experts; ++i) {
    row.ratio_residual = std::max(row.ratio_residual, std::abs(q_from_s[i] - q[i]));
  }
  if (row.ratio_residual > kAccumulated) {
    throw VerificationFailure("ratio identity", t, row.ratio_residual, kAccumulated);
  }

  // power mean with exponent alpha in (0, 1]
  row.powermean_lhs = std::exp(log_uniform_mean(powered));
  row.powermean_rhs = std::exp(alpha * log_uniform_mean(prev_row.log_s));
  if (row.powermean_lhs > row.powermean_rhs + kSingleStep) {
    throw VerificationFailure("power mean", t, row.powermean_lhs, row.powermean_rhs);
  }

  // closed form from running totals, independent of the recursion
  row.cumulative_expert_losses = prev_row.cumulative_expert_losses;
  for (std::size_t i = 0; i < n_experts; ++i) {
    row.cumulative_expert_losses[i] += record.expert_losses[i];
  }
  row.cumulative_forecaster_loss = prev_row.cumulative_forecaster_loss + record.forecaster_loss;
  row.sum_eta = prev_row.sum_eta + eta;
  const std::vector<double> closed = closed_form(
      row.cumulative_expert_losses, row.cumulative_forecaster_loss, eta, row.sum_eta);
  for (std::size_t i = 0; i < n_experts; ++i) {
    row.recursion_residual = std::max(row.recursion_residual, std::abs(next_log_s[i] - closed[i]));
  }
  if (row.recursion_residual > kAccumulated) {
    throw VerificationFailure("recursion vs closed form", t, row.recursion_residual, kAccumulated);
  }

  row.log_s = std::move(next_log_s);
  row.mass = std::exp(log_uniform_mean(row.log_s));
  if (row.mass > 1.0 + kAccumulated) {
    throw VerificationFailure("mass", t, row.mass, 1.0);
  }

  const double log_n = std::log(static_cast<double>(n_experts));
  row.endgame_lhs = *std::max_element(row.log_s.begin(), row.log_s.end());
  if (row.endgame_lhs > log_n + kAccumulated) {
    throw VerificationFailure("endgame", t, row.endgame_lhs, log_n);
  }
  return row;
}

ProofLedger::ProofLedger(std::size_t num_experts)
    : num_experts_(num_experts), row_(initial_ledger_row(num_experts)) {
  summary_.min_hoeffding_slack = std::numeric_limits<double>::infinity();
  summary_.min_powermean_slack = std::numeric_limits<double>::infinity();
  summary_.max_endgame_excess = -std::numeric_limits<double>::infinity();
}

const ProofLedgerRow& ProofLedger::observe(const RoundRecord& record) {
  const double eta_prev = row_.round == 0 ? record.eta : row_.eta;
  row_ = check_round(row_, record, eta_prev);

  const double log_n = std::log(static_cast<double>(num_experts_));
  ++summary_.rounds_checked;
  summary_.max_mass = summary_.rounds_checked == 1 ? row_.mass : std::max(summary_.max_mass, row_.mass);
  summary_.min_hoeffding_slack =
      std::min(summary_.min_hoeffding_slack, row_.hoeffding_lhs - row_.hoeffding_rhs);
  summary_.min_powermean_slack =
      std::min(summary_.min_powermean_slack, row_.powermean_rhs - row_.powermean_lhs);
  summary_.max_ratio_residual = std::max(summary_.max_ratio_residual, row_.ratio_residual);
  summary_.max_recursion_residual =
      std::max(summary_.max_recursion_residual, row_.recursion_residual);
  summary_.max_endgame_excess = std::max(summary_.max_endgame_excess, row_.endgame_lhs - log_n);
  return row_;
}

}  // namespace ewaf
