// Command-line front end: run one seeded simulation, sweep seed ranges,
// exhaustively explore small schedules, or re-check a saved trace.
//
// Exit codes: 0 all checks passed, 1 a checker reported a violation (or a
// liveness budget ran out), 2 usage, scenario, or trace errors.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bwcons/explore.hpp"
#include "bwcons/harness.hpp"
#include "bwcons/trace_io.hpp"

namespace {

struct SeedRange {
  std::uint64_t lo = 1, hi = 1;
};

SeedRange parse_seeds(const std::string& s) {
  SeedRange r;
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      r.lo = r.hi = std::stoull(s);
    } else {
      r.lo = std::stoull(s.substr(0, dots));
      r.hi = std::stoull(s.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw bwcons::ScenarioError("bad seed range: " + s);
  }
  if (r.hi < r.lo) throw bwcons::ScenarioError("bad seed range: " + s);
  return r;
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed,
            const std::string& trace_out, bool summary, const bwcons::MutationSet& muts) {
  bwcons::Scenario sc = bwcons::load_scenario(path);
  bwcons::RunReport rep = bwcons::run_once(sc, seed.value_or(sc.seed), trace_out, muts);
  if (summary)
    bwcons::print_summary(std::cout, rep);
  else
    bwcons::print_report(std::cout, rep);
  return rep.all_pass() ? 0 : 1;
}

int cmd_sweep(const std::string& path, const std::string& seeds, const std::string& mix,
              unsigned threads, bool summary) {
  bwcons::Scenario sc = bwcons::load_scenario(path);
  SeedRange r = parse_seeds(seeds);
  bwcons::SweepOptions opt;
  opt.seed_lo = r.lo;
  opt.seed_hi = r.hi;
  opt.mix = mix;
  opt.threads = threads;
  bwcons::SweepReport rep = bwcons::sweep(sc, opt);
  bwcons::print_sweep(std::cout, rep, summary);
  return rep.all_pass() ? 0 : 1;
}

int cmd_explore(const std::string& path, std::uint32_t max_rounds, std::uint64_t budget,
                bool stop_on_violation, const std::string& trace_out,
                const bwcons::MutationSet& muts) {
  bwcons::Scenario sc = bwcons::load_scenario(path);
  bwcons::ExploreOptions opt;
  opt.max_rounds = max_rounds;
  opt.max_schedules = budget;
  opt.stop_on_violation = stop_on_violation;
  opt.muts = muts;
  bwcons::ExploreReport rep = bwcons::explore_exhaustive(sc, opt);
  std::cout << "explore\tschedules=" << rep.schedules << "\tviolations=" << rep.violations
            << "\tbudget=" << (rep.budget_exceeded ? "exceeded" : "ok") << "\n";
  for (const auto& v : rep.violation_verdicts)
    if (!v.pass) std::cout << to_line(v) << "\n";
  if (!trace_out.empty() && !rep.violation_trace.empty())
    bwcons::save_trace(trace_out, rep.violation_trace);
  if (rep.budget_exceeded) {
    std::cerr << "error: schedule budget exceeded before the space was covered\n";
    return 2;
  }
  return rep.violations == 0 ? 0 : 1;
}

int cmd_verify(const std::string& trace_path, const std::string& scenario_path) {
  auto records = bwcons::load_trace(trace_path);
  std::optional<bwcons::Scenario> sc;
  if (!scenario_path.empty()) sc = bwcons::load_scenario(scenario_path);
  auto verdicts = bwcons::verify_trace_records(records, sc);
  bool ok = true;
  for (const auto& v : verdicts) {
    std::cout << to_line(v) << "\n";
    ok = ok && v.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"byzantine consensus simulator and trace checker"};
  app.require_subcommand(1);

  std::string scenario_path, trace_out, trace_path, verify_scenario;
  std::optional<std::uint64_t> seed;
  std::string seeds = "1..100", mix = "none";
  unsigned threads = 0;
  std::uint32_t max_rounds = 2;
  std::uint64_t budget = 2'000'000;
  bool summary = false, stop_on_violation = false;
  bwcons::MutationSet muts;

  auto* run = app.add_subcommand("run", "run one seeded simulation and check the trace");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--trace-out", trace_out, "write the trace to this file");
  run->add_flag("--summary", summary, "human-readable report");

  auto* sweep = app.add_subcommand("sweep", "run a seed range, optionally varying the setup");
  sweep->add_option("scenario", scenario_path, "scenario file")->required();
  sweep->add_option("--seeds", seeds, "seed range A..B")->required();
  sweep->add_option("--mix", mix, "per-seed variation: none, faults, bw")
      ->check(CLI::IsMember({"none", "faults", "bw"}));
  sweep->add_option("--threads", threads, "worker threads (0 = hardware)");
  sweep->add_flag("--summary", summary, "aggregate line only");

  auto* explore = app.add_subcommand("explore", "enumerate every schedule of a small scenario");
  explore->add_option("scenario", scenario_path, "scenario file")->required();
  explore->add_option("--max-rounds", max_rounds, "round budget (at most 2)");
  explore->add_option("--budget", budget, "schedule budget");
  explore->add_flag("--stop-on-violation", stop_on_violation, "stop at the first violation");
  explore->add_option("--trace-out", trace_out, "write the first violating trace here");

  auto* verify = app.add_subcommand("verify", "re-check a saved trace");
  verify->add_option("trace", trace_path, "trace file")->required();
  verify->add_option("--scenario", verify_scenario,
                     "scenario the trace came from (enables the fault-aware checks)");

#if BWCONS_MUTATIONS
  // Present only in mutation-enabled builds; used to demonstrate that the
  // checkers catch a broken filter rule.
  run->add_flag("--mutate", muts.phase3_any_value, "break the third filter (test hook)");
  explore->add_flag("--mutate", muts.phase3_any_value, "break the third filter (test hook)");
#endif

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(scenario_path, seed, trace_out, summary, muts);
    if (sweep->parsed()) return cmd_sweep(scenario_path, seeds, mix, threads, summary);
    if (explore->parsed())
      return cmd_explore(scenario_path, max_rounds, budget, stop_on_violation, trace_out, muts);
    if (verify->parsed()) return cmd_verify(trace_path, verify_scenario);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
