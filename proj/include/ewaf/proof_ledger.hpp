#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ewaf/forecaster.hpp"

namespace ewaf {

// Round-by-round certificate for the regret bound ln N / eta_n + (1/8) sum eta_t.
//
// The certificate tracks, per expert i, the proof potential
//
//   s_{i,t} = exp(-eta_t L_{i,t} + eta_t Lhat_t - (eta_t / 8) sum_{k<=t} eta_k),
//
// with s_{i,0} = 1, and checks after every round that
//
//   convexity   l(p_t, y_t) <= sum_i q_i l(f_{i,t}, y_t)
//   hoeffding   exp(-eta_t l(p_t,y_t)) >= sum_i q_i exp(-eta_t l(f_{i,t},y_t) - eta_t^2/8)
//   ratio       q_i = s_{i,t-1}^a / sum_j s_{j,t-1}^a,  a = eta_t / eta_{t-1}
//   power mean  (1/N) sum_j s_{j,t-1}^a <= ((1/N) sum_j s_{j,t-1})^a
//   mass        (1/N) sum_j s_{j,t} <= 1
//   recursion   s_{i,t} = s_{i,t-1}^a exp(-eta_t l_i + eta_t l_hat - eta_t^2/8)
//               agrees with the closed form above
//   endgame     log s_{i,t} <= ln N, i.e. the regret bound at horizon t
//
// Everything is held as log s. eta_0 is taken to be eta_1, which makes the
// first exponent 1; s_{i,0} = 1 makes the choice immaterial otherwise.
struct ProofLedgerRow {
  std::size_t round = 0;
  double eta = 0.0;  // eta_t; 0 at round 0
  std::vector<double> log_s;
  double mass = 1.0;
  double hoeffding_lhs = 0.0;
  double hoeffding_rhs = 0.0;
  double powermean_lhs = 0.0;
  double powermean_rhs = 0.0;
  double convexity_lhs = 0.0;
  double convexity_rhs = 0.0;
  double ratio_residual = 0.0;      // max_i |q_i from log s - record weight|
  double recursion_residual = 0.0;  // max_i |recursive log s - closed-form log s|
  double endgame_lhs = 0.0;         // max_i log s_{i,t}, compared with ln N

  // Running totals from which the closed form is evaluated independently of
  // the recursion.
  std::vector<double> cumulative_expert_losses;
  double cumulative_forecaster_loss = 0.0;
  double sum_eta = 0.0;
};

namespace ledger_tolerance {
inline constexpr double kSingleStep = 1e-12;  // one-round algebraic identities
inline constexpr double kAccumulated = 1e-9;  // quantities carried across rounds
}  // namespace ledger_tolerance

// Row for t = 0: log s = 0, mass = 1.
ProofLedgerRow initial_ledger_row(std::size_t num_experts);

// log s_{i,t} from the closed form, replaying rounds 1..t of the history.
// Returns zeros at t = 0. Throws OutOfRange when t exceeds the history.
std::vector<double> s_closed_form(std::span<const RoundRecord> history, std::size_t t,
                                  std::size_t num_experts);

// One step of the recursion:
//   log s_{i,t} = (eta_t / eta_prev) log s_{i,t-1} - eta_t l_i + eta_t l_hat - eta_t^2 / 8.
// Throws InvalidArgument when eta_prev < record.eta.
std::vector<double> s_recursive_step(std::span<const double> prev_log_s,
                                     const RoundRecord& record, double eta_prev);

// Evaluates every proof check for the round described by `record`. Throws
// VerificationFailure naming the first inequality violated beyond tolerance.
ProofLedgerRow check_round(const ProofLedgerRow& prev_row, const RoundRecord& record,
                           double eta_prev);

struct LedgerSummary {
  std::size_t rounds_checked = 0;
  double max_mass = 1.0;
  double min_hoeffding_slack = 0.0;   // min over rounds of lhs - rhs
  double min_powermean_slack = 0.0;   // min over rounds of rhs - lhs
  double max_ratio_residual = 0.0;
  double max_recursion_residual = 0.0;
  double max_endgame_excess = 0.0;    // max over rounds of max_i log s - ln N
};

// Wraps check_round over a run, one instance per forecaster.
class ProofLedger {
 public:
  explicit ProofLedger(std::size_t num_experts);

  // Certifies the round. Throws VerificationFailure on any violated check.
  const ProofLedgerRow& observe(const RoundRecord& record);

  const ProofLedgerRow& current() const noexcept { return row_; }
  const LedgerSummary& summary() const noexcept { return summary_; }

 private:
  std::size_t num_experts_;
  ProofLedgerRow row_;
  LedgerSummary summary_;
};

}  // namespace ewaf
