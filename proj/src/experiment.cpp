#include "ewaf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "ewaf/errors.hpp"
#include "ewaf/forecaster.hpp"

namespace ewaf {

namespace {

using json = nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::pair<std::string, std::string> split_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, ""};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value)) {
    throw ConfigError("cannot parse " + what + " from '" + text + "'");
  }
  return value;
}

// Numbers separated by commas and/or whitespace.
std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::vector<double> values;
  std::string token;
  while (in >> token) values.push_back(parse_real(token, what));
  return values;
}

std::vector<std::string> read_data_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    lines.push_back(line);
  }
  return lines;
}

std::vector<double> read_reals(const std::string& path, const std::string& what) {
  std::vector<double> values;
  for (const auto& line : read_data_lines(path)) {
    auto row = parse_reals(line, what);
    values.insert(values.end(), row.begin(), row.end());
  }
  return values;
}

template <class Fn>
auto as_config_error(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  } catch (const OutOfRange& e) {
    throw ConfigError(e.what());
  }
}

json optional_number(const std::optional<double>& value) {
  if (value && std::isfinite(*value)) return *value;
  return nullptr;
}

json finite_or_null(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

LearningRateSchedule parse_schedule(const std::string& spec, std::size_t num_experts) {
  const auto [name, arg] = split_spec(spec);
  return as_config_error([&]() -> LearningRateSchedule {
    if (name == "paper" && arg.empty()) return LearningRateSchedule::paper_sqrt(num_experts);
    if (name == "cbl" && arg.empty()) return LearningRateSchedule::cbl_sqrt(num_experts);
    if (name == "constant") {
      return LearningRateSchedule::constant(parse_real(arg, "constant learning rate"));
    }
    if (name == "custom") {
      if (arg.empty()) throw ConfigError("custom schedule needs a file path");
      return LearningRateSchedule::custom(read_reals(arg, "learning rate"));
    }
    throw ConfigError("unknown schedule '" + spec + "'");
  });
}

LossFunction parse_loss(const std::string& spec) {
  if (spec == "abs") return LossFunction::absolute();
  if (spec == "sq") return LossFunction::squared();
  throw ConfigError("unknown loss '" + spec + "'");
}

AdversaryKind parse_adversary(const std::string& spec, std::uint64_t seed) {
  const auto [name, arg] = split_spec(spec);
  if (name == "adaptive" && arg.empty()) return AdaptiveWorstCase{};
  if (name == "bernoulli") return StochasticOutcomes{parse_real(arg, "Bernoulli parameter"), seed};
  if (name == "fixed") {
    if (arg.empty()) throw ConfigError("fixed adversary needs a file path");
    return FixedOutcomes{read_reals(arg, "outcome")};
  }
  throw ConfigError("unknown adversary '" + spec + "'");
}

AdviceKind parse_advice(const std::string& spec, std::size_t num_experts, std::uint64_t seed) {
  const auto [name, arg] = split_spec(spec);
  if (name == "constant") return ConstantExperts{parse_reals(arg, "advice")};
  if (name == "walk") {
    return RandomWalkExperts{num_experts, parse_real(arg, "walk step"), splitmix64(seed)};
  }
  if (name == "fixed") {
    if (arg.empty()) throw ConfigError("fixed advice needs a file path");
    FixedAdvice fixed;
    for (const auto& line : read_data_lines(arg)) fixed.rows.push_back(parse_reals(line, "advice"));
    return fixed;
  }
  throw ConfigError("unknown advice '" + spec + "'");
}

ResolvedExperiment resolve(const ExperimentConfig& config) {
  if (config.num_experts == 0) throw ConfigError("experts must be at least 1");
  if (config.horizon == 0) throw ConfigError("horizon must be at least 1");

  auto schedule = parse_schedule(config.schedule, config.num_experts);
  const auto validation = validate_schedule(schedule, config.horizon);
  if (!validation) throw ConfigError("schedule rejected: " + validation.message);

  auto loss = parse_loss(config.loss);
  auto adversary = parse_adversary(config.adversary, config.seed);
  auto advice = parse_advice(config.advice, config.num_experts, config.seed);

  // Construct once to surface range and shape errors up front.
  const std::size_t advice_experts =
      as_config_error([&] { return AdviceGenerator(advice).num_experts(); });
  as_config_error([&] { return Adversary(adversary).label(); });
  if (advice_experts != config.num_experts) {
    throw ConfigError("advice provides " + std::to_string(advice_experts) + " experts, expected " +
                      std::to_string(config.num_experts));
  }
  if (const auto* fixed = std::get_if<FixedAdvice>(&advice);
      fixed && fixed->rows.size() < config.horizon) {
    throw ConfigError("fixed advice has " + std::to_string(fixed->rows.size()) +
                      " rows, horizon is " + std::to_string(config.horizon));
  }
  if (const auto* fixed = std::get_if<FixedOutcomes>(&adversary);
      fixed && fixed->outcomes.size() < config.horizon) {
    throw ConfigError("fixed adversary has " + std::to_string(fixed->outcomes.size()) +
                      " outcomes, horizon is " + std::to_string(config.horizon));
  }

  return ResolvedExperiment{config, std::move(schedule), std::move(loss), std::move(adversary),
                            std::move(advice), validation.warning};
}

ExperimentResult run_experiment(const ResolvedExperiment& experiment) {
  const auto& config = experiment.config;
  Forecaster forecaster(config.num_experts, experiment.schedule, experiment.loss);
  Adversary adversary(experiment.adversary);
  AdviceGenerator advice_source(experiment.advice);
  PrefixBound prefix_bound(experiment.schedule, config.num_experts);
  std::optional<ProofLedger> ledger;
  if (config.verify_ledger) ledger.emplace(config.num_experts);

  ExperimentResult result;
  result.rows.reserve(config.horizon);
  for (std::size_t t = 1; t <= config.horizon; ++t) {
    const auto advice = advice_source.next_advice(t);
    const double outcome = adversary.next_outcome(forecaster.predict(advice));
    const RoundRecord record = forecaster.step(advice, outcome);

    TrajectoryRow row;
    row.t = t;
    row.eta = record.eta;
    row.prediction = record.prediction;
    row.outcome = record.outcome;
    row.forecaster_loss = record.forecaster_loss;
    row.cumulative_forecaster_loss = forecaster.cumulative_forecaster_loss();
    row.min_cumulative_expert_loss =
        forecaster.cumulative_expert_losses()[forecaster.best_expert()];
    row.regret = forecaster.regret();
    row.bound_eq1_prefix = prefix_bound.advance();

    if (ledger) {
      try {
        row.ledger_mass = ledger->observe(record).mass;
      } catch (const VerificationFailure& e) {
        result.failure = e.what();
      }
    }
    if (!result.failure && row.regret > row.bound_eq1_prefix + kRunTolerance) {
      result.failure = VerificationFailure("regret bound", t, row.regret, row.bound_eq1_prefix).what();
    }
    result.rows.push_back(row);
    if (result.failure) break;
  }

  if (ledger) result.ledger_summary = ledger->summary();
  if (!result.failure) {
    result.bound_report =
        compare_bounds(experiment.schedule, config.num_experts, config.horizon, forecaster.regret());
    if (result.bound_report->violation) {
      result.failure = "final regret exceeds the time-varying bound";
    }
  }
  return result;
}

std::string trajectory_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "t,eta_t,prediction,outcome,forecaster_loss,cumulative_forecaster_loss,"
        "min_cumulative_expert_loss,regret,bound_eq1_prefix,ledger_mass\n";
  for (const auto& r : result.rows) {
    os << r.t << ',' << format_double(r.eta) << ',' << format_double(r.prediction) << ','
       << format_double(r.outcome) << ',' << format_double(r.forecaster_loss) << ','
       << format_double(r.cumulative_forecaster_loss) << ','
       << format_double(r.min_cumulative_expert_loss) << ',' << format_double(r.regret) << ','
       << format_double(r.bound_eq1_prefix) << ',';
    if (r.ledger_mass) os << format_double(*r.ledger_mass);
    os << '\n';
  }
  return os.str();
}

std::string experiment_json(const ResolvedExperiment& experiment, const ExperimentResult& result) {
  const auto& c = experiment.config;
  json doc;
  doc["config"] = {
      {"experts", c.num_experts},
      {"horizon", c.horizon},
      {"schedule", c.schedule},
      {"loss", c.loss},
      {"adversary", c.adversary},
      {"advice", c.advice},
      {"seed", c.seed},
      {"verify", c.verify_ledger},
  };

  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({
        {"t", r.t},
        {"eta_t", r.eta},
        {"prediction", r.prediction},
        {"outcome", r.outcome},
        {"forecaster_loss", r.forecaster_loss},
        {"cumulative_forecaster_loss", r.cumulative_forecaster_loss},
        {"min_cumulative_expert_loss", r.min_cumulative_expert_loss},
        {"regret", r.regret},
        {"bound_eq1_prefix", r.bound_eq1_prefix},
        {"ledger_mass", optional_number(r.ledger_mass)},
    });
  }
  doc["rows"] = std::move(rows);

  if (const auto& b = result.bound_report) {
    doc["bound_report"] = {
        {"n", b->n},
        {"num_experts", b->num_experts},
        {"bound_eq1", b->bound_eq1},
        {"bound_corollary", optional_number(b->bound_corollary)},
        {"bound_comparison", b->bound_comparison},
        {"realized_regret", optional_number(b->realized_regret)},
        {"violation", b->violation},
    };
  } else {
    doc["bound_report"] = nullptr;
  }

  if (const auto& s = result.ledger_summary) {
    doc["ledger_summary"] = {
        {"enabled", true},
        {"rounds_checked", s->rounds_checked},
        {"max_mass", finite_or_null(s->max_mass)},
        {"min_hoeffding_slack", finite_or_null(s->min_hoeffding_slack)},
        {"min_powermean_slack", finite_or_null(s->min_powermean_slack)},
        {"max_ratio_residual", finite_or_null(s->max_ratio_residual)},
        {"max_recursion_residual", finite_or_null(s->max_recursion_residual)},
        {"max_endgame_excess", finite_or_null(s->max_endgame_excess)},
    };
  } else {
    doc["ledger_summary"] = {{"enabled", false}};
  }
  doc["status"] = result.failure ? "verification_failure" : "ok";
  if (result.failure) doc["failure"] = *result.failure;
  return doc.dump(2) + "\n";
}

std::vector<BoundTableRow> emit_bound_table(const std::vector<std::size_t>& num_experts,
                                            const std::vector<std::size_t>& horizons,
                                            const std::vector<std::string>& schedules) {
  struct Cell {
    std::size_t experts;
    std::size_t horizon;
    std::size_t schedule_index;
  };
  std::vector<Cell> cells;
  for (std::size_t n_experts : num_experts) {
    for (std::size_t horizon : horizons) {
      for (std::size_t s = 0; s < schedules.size(); ++s) cells.push_back({n_experts, horizon, s});
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::tie(a.experts, a.horizon, a.schedule_index) <
           std::tie(b.experts, b.horizon, b.schedule_index);
  });

  auto evaluate = [&schedules](Cell cell) {
    if (cell.experts == 0 || cell.horizon == 0) {
      throw ConfigError("bound table needs N >= 1 and n >= 1");
    }
    const auto schedule = parse_schedule(schedules[cell.schedule_index], cell.experts);
    const auto validation = validate_schedule(schedule, cell.horizon);
    if (!validation) throw ConfigError("schedule rejected: " + validation.message);
    BoundTableRow row;
    row.schedule = schedules[cell.schedule_index];
    row.num_experts = cell.experts;
    row.horizon = cell.horizon;
    row.bound_eq1 = bound_time_varying(schedule, cell.experts, cell.horizon);
    row.bound_comparison = bound_comparison(schedule, cell.experts, cell.horizon);
    row.ratio = row.bound_comparison / row.bound_eq1;
    if (cell.experts >= 2) {
      row.bound_corollary = bound_corollary(cell.experts, cell.horizon);
      row.bound_classical_sqrt = bound_classical_sqrt(cell.experts, cell.horizon);
    }
    return row;
  };

  // Workers claim cells by index; results land in their sorted slot.
  std::vector<std::optional<BoundTableRow>> slots(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) slots[k] = evaluate(cells[k]);
  };
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(cells.size(), 1));
  std::vector<std::future<void>> futures;
  for (std::size_t w = 0; w < workers; ++w) futures.push_back(std::async(std::launch::async, work));
  for (auto& f : futures) f.get();  // rethrows the first failure

  std::vector<BoundTableRow> rows;
  rows.reserve(cells.size());
  for (auto& slot : slots) rows.push_back(std::move(*slot));
  return rows;
}

std::string bound_table_csv(const std::vector<BoundTableRow>& rows) {
  std::ostringstream os;
  os << "schedule,num_experts,horizon,bound_eq1,bound_comparison,ratio,bound_corollary,"
        "bound_classical_sqrt\n";
  for (const auto& r : rows) {
    os << r.schedule << ',' << r.num_experts << ',' << r.horizon << ','
       << format_double(r.bound_eq1) << ',' << format_double(r.bound_comparison) << ','
       << format_double(r.ratio) << ',';
    if (r.bound_corollary) os << format_double(*r.bound_corollary);
    os << ',';
    if (r.bound_classical_sqrt) os << format_double(*r.bound_classical_sqrt);
    os << '\n';
  }
  return os.str();
}

std::string bound_table_json(const std::vector<BoundTableRow>& rows) {
  json doc = json::array();
  for (const auto& r : rows) {
    doc.push_back({
        {"schedule", r.schedule},
        {"num_experts", r.num_experts},
        {"horizon", r.horizon},
        {"bound_eq1", r.bound_eq1},
        {"bound_comparison", r.bound_comparison},
        {"ratio", r.ratio},
        {"bound_corollary", optional_number(r.bound_corollary)},
        {"bound_classical_sqrt", optional_number(r.bound_classical_sqrt)},
    });
  }
  return doc.dump(2) + "\n";
}

}  // namespace ewaf
