#pragma once

// Operational layer: single runs with persisted traces and checker
// verdicts, seeded sweeps with strategy/link variation, and re-checking of
// saved traces. Reports serialize as line records; exit-code policy lives
// with the CLI.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bwcons/checkers.hpp"
#include "bwcons/netsim.hpp"
#include "bwcons/scenario.hpp"

namespace bwcons {

struct RunReport {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::map<std::uint32_t, std::string> decisions;  // correct processes only
  std::map<std::uint32_t, std::uint32_t> rounds;
  ComplexityReport complexity;
  std::vector<Verdict> verdicts;
  bool budget_exhausted = false;
  double wall_ms = 0;

  bool all_pass() const;
};

// Runs the (validated) scenario under `seed`, persists the trace when a
// path is given, and checks it. Mutations reach both the engines and the
// daemons, mirroring a uniformly broken build.
RunReport run_once(const Scenario& sc, std::uint64_t seed, const std::string& trace_path = {},
                   const MutationSet& muts = {});

// One line per run plus one line per verdict.
void print_report(std::ostream& out, const RunReport& rep, bool with_checks = true);
void print_summary(std::ostream& out, const RunReport& rep);

struct SweepOptions {
  std::uint64_t seed_lo = 1;
  std::uint64_t seed_hi = 100;
  std::string mix = "none";  // none | faults | bw
  unsigned threads = 0;      // 0 picks the hardware count
};

struct SweepReport {
  std::vector<RunReport> runs;  // sorted by seed
  std::uint64_t failures = 0;
  std::map<std::string, std::uint64_t> fail_by_property;
  std::uint32_t min_round = 0, max_round = 0;
  double mean_round = 0;
  std::uint64_t undecided_runs = 0;

  bool all_pass() const { return failures == 0; }
};

// The per-seed variant the sweep runs: "none" leaves the template alone,
// "faults" rotates the strategy catalog across the byzantine set, "bw"
// cycles the privileged-link presets (and rebuilds the link map).
Scenario sweep_variant(const Scenario& tmpl, std::uint64_t seed, const std::string& mix);

SweepReport sweep(const Scenario& tmpl, const SweepOptions& opt);

void print_sweep(std::ostream& out, const SweepReport& rep, bool summary);

// Re-checks a persisted trace. Without a scenario every actor counts as
// correct and only the scenario-free checks are conclusive.
std::vector<Verdict> verify_trace_records(const std::vector<TraceRecord>& records,
                                          const std::optional<Scenario>& sc);

}  // namespace bwcons
