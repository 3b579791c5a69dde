// Command-line runner for the exponentially weighted average forecaster.
//
//   ewaf --experts 4 --horizon 1000 --schedule paper --adversary adaptive --verify
//   ewaf --bound-table --table-experts 2,8 --table-horizons 10,1000 --table-schedules paper,cbl
//
// Exit status: 0 ok, 2 configuration error, 3 verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ewaf/errors.hpp"
#include "ewaf/experiment.hpp"

namespace {

constexpr const char* kOutputDirEnv = "EWAF_OUTPUT_DIR";

std::filesystem::path resolve_output(const std::string& out, const std::string& default_name) {
  if (!out.empty()) return out;
  const char* dir = std::getenv(kOutputDirEnv);
  return std::filesystem::path(dir && *dir ? dir : ".") / default_name;
}

// Writes the whole document at once; "-" means stdout.
bool write_output(const std::filesystem::path& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponentially weighted average forecaster with time-varying learning rate"};
  app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");

  ewaf::ExperimentConfig config;
  std::string format = "csv";
  std::string out;
  bool bound_table = false;
  std::vector<std::size_t> table_experts{2, 8};
  std::vector<std::size_t> table_horizons{10, 1000};
  std::vector<std::string> table_schedules{"paper", "cbl"};

  app.add_option("--experts", config.num_experts, "Number of experts N")->capture_default_str();
  app.add_option("--horizon", config.horizon, "Number of rounds n")->capture_default_str();
  app.add_option("--schedule", config.schedule, "paper | cbl | constant:<v> | custom:<path>")
      ->capture_default_str();
  app.add_option("--loss", config.loss, "abs | sq")->capture_default_str();
  app.add_option("--adversary", config.adversary, "adaptive | bernoulli:<p> | fixed:<path>")
      ->capture_default_str();
  app.add_option("--advice", config.advice, "constant:<csv> | walk:<step> | fixed:<path>")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Seed for stochastic outcomes and random-walk advice")
      ->capture_default_str();
  app.add_flag("--verify", config.verify_ledger, "Certify every round with the proof ledger");
  app.add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", out,
                 std::string("Output file, '-' for stdout; defaults to $") + kOutputDirEnv +
                     "/trajectory.<format> (or bound_table.<format>)");
  app.add_flag("--bound-table", bound_table, "Emit the bound comparison grid instead of a run");
  app.add_option("--table-experts", table_experts, "Expert counts for --bound-table")
      ->delimiter(',');
  app.add_option("--table-horizons", table_horizons, "Horizons for --bound-table")->delimiter(',');
  app.add_option("--table-schedules", table_schedules, "Schedules for --bound-table")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ewaf::exit_code::kConfigError;
  }
  config.format = format == "json" ? ewaf::OutputFormat::Json : ewaf::OutputFormat::Csv;

  if (bound_table) {
    std::vector<ewaf::BoundTableRow> rows;
    try {
      rows = ewaf::emit_bound_table(table_experts, table_horizons, table_schedules);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return ewaf::exit_code::kConfigError;
    }
    const auto path = resolve_output(out, "bound_table." + format);
    const std::string doc = config.format == ewaf::OutputFormat::Json
                                ? ewaf::bound_table_json(rows)
                                : ewaf::bound_table_csv(rows);
    if (!write_output(path, doc)) {
      std::cerr << "config error: cannot write '" << path.string() << "'\n";
      return ewaf::exit_code::kConfigError;
    }
    return ewaf::exit_code::kOk;
  }

  std::optional<ewaf::ResolvedExperiment> experiment;
  try {
    experiment.emplace(ewaf::resolve(config));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ewaf::exit_code::kConfigError;
  }
  if (experiment->schedule_warning) std::cerr << "warning: " << *experiment->schedule_warning << "\n";

  const ewaf::ExperimentResult result = ewaf::run_experiment(*experiment);
  const std::string doc = config.format == ewaf::OutputFormat::Json
                              ? ewaf::experiment_json(*experiment, result)
                              : ewaf::trajectory_csv(result);
  const auto path = resolve_output(out, "trajectory." + format);
  if (!write_output(path, doc)) {
    std::cerr << "config error: cannot write '" << path.string() << "'\n";
    return ewaf::exit_code::kConfigError;
  }
  if (result.failure) {
    std::cerr << *result.failure << "\n";
  } else if (result.bound_report) {
    const auto& b = *result.bound_report;
    std::cerr << "regret " << ewaf::format_double(*b.realized_regret) << " <= bound "
              << ewaf::format_double(b.bound_eq1) << " (comparison "
              << ewaf::format_double(b.bound_comparison) << ")\n";
  }
  return result.exit_status();
}
