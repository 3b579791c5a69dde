#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ewaf/bounds.hpp"
#include "ewaf/environment.hpp"
#include "ewaf/errors.hpp"
#include "ewaf/loss.hpp"
#include "ewaf/proof_ledger.hpp"
#include "ewaf/schedule.hpp"

namespace ewaf {

// Raised for anything wrong with an experiment description, before any
// round is played.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class OutputFormat { Csv, Json };

// Process exit codes of the command-line runner.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kVerificationFailure = 3;
}  // namespace exit_code

// Textual experiment description. Spec strings:
//   schedule   paper | cbl | constant:<v> | custom:<path>
//   loss       abs | sq
//   adversary  adaptive | bernoulli:<p> | fixed:<path>
//   advice     constant:<v1,v2,...> | walk:<step> | fixed:<path>
struct ExperimentConfig {
  std::size_t num_experts = 2;
  std::size_t horizon = 100;
  std::string schedule = "paper";
  std::string loss = "abs";
  std::string adversary = "adaptive";
  std::string advice = "walk:0.05";
  std::uint64_t seed = 0;
  bool verify_ledger = false;
  OutputFormat format = OutputFormat::Csv;
};

LearningRateSchedule parse_schedule(const std::string& spec, std::size_t num_experts);
LossFunction parse_loss(const std::string& spec);
AdversaryKind parse_adversary(const std::string& spec, std::uint64_t seed);
AdviceKind parse_advice(const std::string& spec, std::size_t num_experts, std::uint64_t seed);

// Fully built and cross-checked experiment components.
struct ResolvedExperiment {
  ExperimentConfig config;
  LearningRateSchedule schedule;
  LossFunction loss;
  AdversaryKind adversary;
  AdviceKind advice;
  std::optional<std::string> schedule_warning;
};

// Builds every component and checks that they agree with each other and
// cover the horizon. Throws ConfigError.
ResolvedExperiment resolve(const ExperimentConfig& config);

struct TrajectoryRow {
  std::size_t t = 0;
  double eta = 0.0;
  double prediction = 0.0;
  double outcome = 0.0;
  double forecaster_loss = 0.0;
  double cumulative_forecaster_loss = 0.0;
  double min_cumulative_expert_loss = 0.0;
  double regret = 0.0;
  double bound_eq1_prefix = 0.0;
  std::optional<double> ledger_mass;
};

struct ExperimentResult {
  std::vector<TrajectoryRow> rows;
  std::optional<BoundReport> bound_report;  // absent if the run stopped early
  std::optional<LedgerSummary> ledger_summary;
  // Set when a prefix bound or ledger check failed; the run stops there.
  std::optional<std::string> failure;

  int exit_status() const noexcept {
    return failure ? exit_code::kVerificationFailure : exit_code::kOk;
  }
};

// Plays the configured protocol for `horizon` rounds. Every prefix regret
// is compared with the bound at that prefix; with verify_ledger every round
// is also certified by a ProofLedger.
ExperimentResult run_experiment(const ResolvedExperiment& experiment);

std::string trajectory_csv(const ExperimentResult& result);
std::string experiment_json(const ResolvedExperiment& experiment, const ExperimentResult& result);

struct BoundTableRow {
  std::string schedule;
  std::size_t num_experts = 0;
  std::size_t horizon = 0;
  double bound_eq1 = 0.0;
  double bound_comparison = 0.0;
  double ratio = 0.0;  // bound_comparison / bound_eq1
  std::optional<double> bound_corollary;       // sqrt(n ln N), N >= 2
  std::optional<double> bound_classical_sqrt;  // sqrt(2 n ln N) + sqrt(ln N / 8), N >= 2
};

// Evaluates every (N, n, schedule) cell, concurrently, and returns them
// sorted by (N, n, position of the schedule in `schedules`). Throws
// ConfigError if a schedule is invalid for some cell.
std::vector<BoundTableRow> emit_bound_table(const std::vector<std::size_t>& num_experts,
                                            const std::vector<std::size_t>& horizons,
                                            const std::vector<std::string>& schedules);

std::string bound_table_csv(const std::vector<BoundTableRow>& rows);
std::string bound_table_json(const std::vector<BoundTableRow>& rows);

// "%.17g"
std::string format_double(double value);

}  // namespace ewaf
