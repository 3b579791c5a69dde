// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ewaf/bounds.hpp"
#include "ewaf/environment.hpp"
#include "ewaf/errors.hpp"
#include "ewaf/experiment.hpp"
#include "ewaf/forecaster.hpp"
#include "ewaf/proof_ledger.hpp"
#include "ewaf/random.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;
using namespace ewaf;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// One randomized instance of the protocol. Generators are stored as specs so
// that the same environment can be replayed under a different schedule.
struct Instance {
  std::size_t num_experts;
  std::size_t horizon;
  bool squared_loss;
  AdversaryKind adversary;
  AdviceKind advice;
  LearningRateSchedule schedule;
  std::string description;
};

LearningRateSchedule random_custom(Rng& rng, std::size_t horizon) {
  std::vector<double> etas(horizon);
  double eta = rng.uniform(0.05, 3.0);
  for (double& e : etas) {
    e = eta;
    if (rng.bernoulli(0.6)) eta *= rng.uniform(0.9, 1.0);
  }
  return LearningRateSchedule::custom(std::move(etas));
}

Instance make_instance(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n_experts = 1 + rng.integer(0, 31);
  const std::size_t horizon = 1 + rng.integer(0, 499);
  const bool squared = rng.bernoulli(0.5);

  AdversaryKind adversary = AdaptiveWorstCase{};
  std::string adv_name = "adaptive";
  switch (rng.integer(0, 4)) {
    case 0: break;
    case 1: adversary = StochasticOutcomes{0.1, seed}; adv_name = "bernoulli:0.1"; break;
    case 2: adversary = StochasticOutcomes{0.5, seed}; adv_name = "bernoulli:0.5"; break;
    case 3: adversary = StochasticOutcomes{0.9, seed}; adv_name = "bernoulli:0.9"; break;
    default: {
      FixedOutcomes fixed;
      for (std::size_t t = 0; t < horizon; ++t) {
        fixed.outcomes.push_back(rng.bernoulli(0.5) ? double(rng.integer(0, 1)) : rng.uniform());
      }
      adversary = std::move(fixed);
      adv_name = "fixed";
    }
  }

  AdviceKind advice = ConstantExperts{};
  std::string advice_name;
  switch (rng.integer(0, 2)) {
    case 0: {
      ConstantExperts c;
      for (std::size_t i = 0; i < n_experts; ++i) c.values.push_back(rng.uniform());
      if (n_experts >= 2) c.values[0] = 0.0, c.values[1] = 1.0;
      advice = std::move(c);
      advice_name = "constant";
      break;
    }
    case 1:
      advice = RandomWalkExperts{n_experts, rng.uniform(0.0, 0.3), seed ^ 0xA5A5A5A5ULL};
      advice_name = "walk";
      break;
    default: {
      FixedAdvice f;
      for (std::size_t t = 0; t < horizon; ++t) {
        std::vector<double> row(n_experts);
        for (double& v : row) v = rng.uniform();
        f.rows.push_back(std::move(row));
      }
      advice = std::move(f);
      advice_name = "fixed";
    }
  }

  auto pick = rng.integer(0, 4);
  if (n_experts == 1 && pick <= 1) pick = 2 + rng.integer(0, 2);
  LearningRateSchedule schedule = LearningRateSchedule::constant(1.0);
  switch (pick) {
    case 0: schedule = LearningRateSchedule::paper_sqrt(n_experts); break;
    case 1: schedule = LearningRateSchedule::cbl_sqrt(n_experts); break;
    case 2: schedule = LearningRateSchedule::constant(0.1); break;
    case 3: schedule = LearningRateSchedule::constant(1.0); break;
    default: schedule = random_custom(rng, horizon);
  }

  std::ostringstream os;
  os << "seed=" << seed << " N=" << n_experts << " n=" << horizon
     << " loss=" << (squared ? "sq" : "abs") << " adversary=" << adv_name
     << " advice=" << advice_name << " schedule=" << schedule.label();
  return {n_experts, horizon, squared, std::move(adversary), std::move(advice),
          std::move(schedule), os.str()};
}

struct RunOutcome {
  double max_bound_excess = -INFINITY;      // max over prefixes of regret - bound
  double max_corollary_excess = -INFINITY;  // same against sqrt(t ln N)
  bool ledger_ok = true;
  std::string ledger_error;
  LedgerSummary ledger;
};

RunOutcome play(const Instance& inst, const LearningRateSchedule& schedule) {
  Forecaster f(inst.num_experts, schedule,
               inst.squared_loss ? LossFunction::squared() : LossFunction::absolute());
  Adversary adversary(inst.adversary);
  AdviceGenerator advice(inst.advice);
  PrefixBound prefix(schedule, inst.num_experts);
  ProofLedger ledger(inst.num_experts);
  const double log_n = std::log(double(inst.num_experts));

  RunOutcome out;
  for (std::size_t t = 1; t <= inst.horizon; ++t) {
    const auto a = advice.next_advice(t);
    const auto rec = f.step(a, adversary.next_outcome(f.predict(a)));
    out.max_bound_excess = std::max(out.max_bound_excess, f.regret() - prefix.advance());
    if (inst.num_experts >= 2) {
      out.max_corollary_excess =
          std::max(out.max_corollary_excess, f.regret() - std::sqrt(double(t) * log_n));
    }
    if (out.ledger_ok) {
      try {
        ledger.observe(rec);
      } catch (const VerificationFailure& e) {
        out.ledger_ok = false;
        out.ledger_error = e.what();
      }
    }
  }
  out.ledger = ledger.summary();
  return out;
}

struct Report {
  int failures = 0;
  void line(int id, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "C" << id << " " << name << ": " << detail
              << std::endl;
    if (!pass) ++failures;
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Criteria 1-3 share the randomized corpus.
void run_corpus(Report& report) {
  constexpr std::size_t kInstances = 1200;
  constexpr double kRunTol = 1e-6;

  const auto start = Clock::now();
  std::size_t runs = 0, bound_fail = 0, corollary_runs = 0, corollary_fail = 0, ledger_fail = 0;
  double worst_bound = -INFINITY, worst_corollary = -INFINITY;
  double worst_mass = 0.0, worst_hoeffding = INFINITY, worst_powermean = INFINITY,
         worst_recursion = 0.0;
  std::string first_problem;

  auto absorb_ledger = [&](const RunOutcome& r, const Instance& inst) {
    if (!r.ledger_ok) {
      ++ledger_fail;
      if (first_problem.empty()) first_problem = inst.description + ": " + r.ledger_error;
      return;
    }
    worst_mass = std::max(worst_mass, r.ledger.max_mass);
    worst_hoeffding = std::min(worst_hoeffding, r.ledger.min_hoeffding_slack);
    worst_powermean = std::min(worst_powermean, r.ledger.min_powermean_slack);
    worst_recursion = std::max(worst_recursion, r.ledger.max_recursion_residual);
  };

  for (std::size_t k = 0; k < kInstances; ++k) {
    const Instance inst = make_instance(1000 + k);
    const RunOutcome r = play(inst, inst.schedule);
    ++runs;
    worst_bound = std::max(worst_bound, r.max_bound_excess);
    if (r.max_bound_excess > kRunTol) {
      ++bound_fail;
      if (first_problem.empty()) first_problem = inst.description + ": bound exceeded";
    }
    absorb_ledger(r, inst);

    if (inst.num_experts >= 2) {
      // the same environment under eta_t = sqrt(4 ln N / t)
      const auto paper = LearningRateSchedule::paper_sqrt(inst.num_experts);
      const RunOutcome p = inst.schedule.kind() == ScheduleKind::PaperSqrt ? r : play(inst, paper);
      ++corollary_runs;
      worst_corollary = std::max(worst_corollary, p.max_corollary_excess);
      if (p.max_corollary_excess > kRunTol) ++corollary_fail;
      if (&p != &r) {
        ++runs;
        worst_bound = std::max(worst_bound, p.max_bound_excess);
        if (p.max_bound_excess > kRunTol) ++bound_fail;
        absorb_ledger(p, inst);
      }
    }
  }
  const double elapsed = seconds_since(start);

  report.line(1, "regret <= ln N/eta_n + sum(eta)/8 on every prefix",
              bound_fail == 0 && elapsed < 60.0,
              std::to_string(runs) + " runs, max(regret - bound) = " + fmt(worst_bound) +
                  ", failures = " + std::to_string(bound_fail) + ", " + fmt(elapsed) + " s" +
                  (first_problem.empty() ? "" : "; first problem: " + first_problem));
  report.line(2, "regret <= sqrt(n ln N) under eta_t = sqrt(4 ln N / t)", corollary_fail == 0,
              std::to_string(corollary_runs) + " runs, max(regret - sqrt(n ln N)) = " +
                  fmt(worst_corollary) + ", failures = " + std::to_string(corollary_fail));
  const bool ledger_pass = ledger_fail == 0 && worst_mass <= 1.0 + 1e-9 &&
                           worst_hoeffding >= -1e-12 && worst_powermean >= -1e-12 &&
                           worst_recursion <= 1e-9;
  report.line(3, "proof ledger certifies every round", ledger_pass,
              std::to_string(runs) + " runs, max mass = " + fmt(worst_mass) +
                  ", min hoeffding slack = " + fmt(worst_hoeffding) +
                  ", min power-mean slack = " + fmt(worst_powermean) +
                  ", max recursion residual = " + fmt(worst_recursion) +
                  ", failures = " + std::to_string(ledger_fail));
}

void criterion_coincidence(Report& report) {
  double worst = 0.0;
  std::size_t cells = 0;
  for (double eta : {0.01, 0.5, 2.0}) {
    for (std::size_t n_experts : {2, 10}) {
      for (std::size_t n : {1, 100, 10000}) {
        const auto s = LearningRateSchedule::constant(eta);
        const double tv = bound_time_varying(s, n_experts, n);
        const double cmp = bound_comparison(s, n_experts, n);
        const double closed = std::log(double(n_experts)) / eta + double(n) * eta / 8.0;
        worst = std::max({worst, std::abs(tv - cmp), std::abs(tv - closed), std::abs(cmp - closed)});
        ++cells;
      }
    }
  }
  report.line(4, "constant-rate bounds coincide with ln N/eta + n eta/8", worst <= 1e-12,
              std::to_string(cells) + " cells, max deviation = " + fmt(worst));
}

void criterion_dominance(Report& report) {
  std::size_t checked = 0, failures = 0;
  double min_gap = INFINITY;
  auto check = [&](const LearningRateSchedule& s, std::size_t n_experts, std::size_t n) {
    if (!(s.eta(n) < s.eta(1))) return;
    const double gap = bound_comparison(s, n_experts, n) - bound_time_varying(s, n_experts, n);
    min_gap = std::min(min_gap, gap);
    ++checked;
    if (!(gap > 0.0)) ++failures;
  };
  for (std::size_t n_experts : {2, 3, 8, 32, 1024}) {
    for (std::size_t n : {2, 10, 100, 1000, 100000}) {
      check(LearningRateSchedule::paper_sqrt(n_experts), n_experts, n);
      check(LearningRateSchedule::cbl_sqrt(n_experts), n_experts, n);
    }
  }
  Rng rng(99);
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 2 + rng.integer(0, 498);
    std::vector<double> etas(n);
    double eta = rng.uniform(0.01, 5.0);
    for (double& e : etas) e = (eta *= rng.uniform(0.5, 0.999999));
    check(LearningRateSchedule::custom(std::move(etas)), 2 + rng.integer(0, 100), n);
  }
  for (std::size_t k = 0; k < 1200; ++k) {
    const Instance inst = make_instance(1000 + k);
    if (inst.num_experts >= 2) check(inst.schedule, inst.num_experts, inst.horizon);
  }
  report.line(5, "time-varying bound strictly below comparison bound when eta_n < eta_1",
              failures == 0 && checked > 0,
              std::to_string(checked) + " schedules, min gap = " + fmt(min_gap) +
                  ", failures = " + std::to_string(failures));
}

void criterion_corollary_grid(Report& report) {
  const auto start = Clock::now();
  std::vector<std::size_t> experts;
  for (std::size_t n = 2; n <= 1024; n *= 2) experts.push_back(n);
  for (std::size_t n : {3, 10, 100, 1000}) experts.push_back(n);
  std::vector<std::size_t> horizons;
  for (std::size_t decade = 1; decade <= 100000; decade *= 10) {
    for (std::size_t m : {1, 2, 5}) horizons.push_back(m * decade);
  }
  horizons.push_back(1000000);

  double worst = -INFINITY;
  std::size_t failures = 0;
  for (std::size_t n_experts : experts) {
    const auto s = LearningRateSchedule::paper_sqrt(n_experts);
    for (std::size_t n : horizons) {
      const double excess = bound_time_varying(s, n_experts, n) - bound_corollary(n_experts, n);
      worst = std::max(worst, excess);
      if (excess > 1e-9) ++failures;
    }
  }
  const double elapsed = seconds_since(start);
  report.line(6, "bound with eta_t = sqrt(4 ln N / t) <= sqrt(n ln N) on the log grid",
              failures == 0 && elapsed < 10.0,
              std::to_string(experts.size() * horizons.size()) + " cells, max excess = " +
                  fmt(worst) + ", " + fmt(elapsed) + " s");
}

void criterion_oracle_weights(Report& report) {
  Rng rng(7);
  double worst = 0.0;
  std::size_t comparisons = 0;
  for (int k = 0; k < 2000; ++k) {
    const std::size_t n_experts = 1 + rng.integer(0, 3);
    const std::size_t horizon = 1 + rng.integer(0, 19);
    LearningRateSchedule s = LearningRateSchedule::constant(rng.uniform(0.01, 4.0));
    if (n_experts >= 2 && rng.bernoulli(0.5)) s = LearningRateSchedule::paper_sqrt(n_experts);
    Forecaster f(n_experts, s, rng.bernoulli(0.5) ? LossFunction::absolute() : LossFunction::squared());
    for (std::size_t t = 1; t <= horizon; ++t) {
      const auto naive = oracle::naive_weights(f.cumulative_expert_losses(), f.next_eta());
      const auto w = f.weights();
      for (std::size_t i = 0; i < n_experts; ++i) {
        worst = std::max(worst, std::abs(w[i] - naive[i]));
        ++comparisons;
      }
      std::vector<double> advice(n_experts);
      for (double& a : advice) a = rng.uniform();
      f.step(advice, rng.bernoulli(0.5) ? double(rng.integer(0, 1)) : rng.uniform());
    }
  }
  report.line(7, "log-domain weights match direct exponentiation (N <= 4, n <= 20)",
              worst <= 1e-10,
              std::to_string(comparisons) + " weights, max deviation = " + fmt(worst));
}

int run_cli(const std::string& args) {
  const std::string command = std::string("\"") + EWAF_CLI_PATH + "\" " + args + " 2>/dev/null";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void criterion_cli(Report& report) {
  const fs::path dir = EWAF_ACCEPTANCE_DIR;
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::string common =
      "--experts 6 --horizon 400 --schedule paper --loss sq --adversary bernoulli:0.3 "
      "--advice walk:0.1 --seed 12345 --verify";
  bool ok = true;
  std::vector<std::string> notes;
  for (const std::string format : {"csv", "json"}) {
    const auto a = dir / ("run_a." + format);
    const auto b = dir / ("run_b." + format);
    const int ca = run_cli(common + " --format " + format + " --out \"" + a.string() + "\"");
    const int cb = run_cli(common + " --format " + format + " --out \"" + b.string() + "\"");
    const std::string da = slurp(a), db = slurp(b);
    const bool same = ca == 0 && cb == 0 && !da.empty() && da == db;
    ok &= same;
    notes.push_back(format + (same ? " identical (" + std::to_string(da.size()) + " bytes)"
                                   : " differs or failed"));
  }

  const auto rates = dir / "increasing.txt";
  std::ofstream(rates) << "0.4\n0.5\n0.6\n";
  const auto bad_out = dir / "bad.csv";
  const int bad = run_cli("--experts 2 --horizon 3 --schedule custom:\"" + rates.string() +
                          "\" --out \"" + bad_out.string() + "\"");
  const bool rejected = bad == exit_code::kConfigError && !fs::exists(bad_out);
  ok &= rejected;
  notes.push_back("increasing schedule exit " + std::to_string(bad) +
                  (fs::exists(bad_out) ? " with output" : " without output"));

  std::string detail;
  for (const auto& n : notes) detail += (detail.empty() ? "" : ", ") + n;
  report.line(8, "CLI determinism and config-error contract", ok, detail);
}

}  // namespace

int main() {
  Report report;
  run_corpus(report);
  criterion_coincidence(report);
  criterion_dominance(report);
  criterion_corollary_grid(report);
  criterion_oracle_weights(report);
  criterion_cli(report);
  std::cout << (report.failures == 0 ? "all acceptance criteria passed"
                                     : std::to_string(report.failures) + " criteria failed")
            << std::endl;
  return report.failures == 0 ? 0 : 1;
}
