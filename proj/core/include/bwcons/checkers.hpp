#pragma once

// Post-hoc trace verification. Checkers are pure functions over parsed
// traces; which processes count as correct comes from the scenario, never
// from observed behavior. Every failed verdict carries the 1-based index
// of the first offending trace record.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bwcons/netsim.hpp"
#include "bwcons/scenario.hpp"

namespace bwcons {

struct Verdict {
  std::string property;
  bool pass = true;
  bool applicable = true;  // false: nothing to conclude (still counts as pass)
  std::optional<std::size_t> witness;
  std::string explanation;
};

std::string to_line(const Verdict& v);

struct CheckContext {
  std::set<std::uint32_t> byzantine;
  std::map<std::uint32_t, Value> proposals;  // needed only by the validity check
  std::set<std::uint32_t> processes;         // all ids; inferred from trace when empty
  bool has_bw = false;

  static CheckContext from_scenario(const Scenario& sc);
  bool correct(std::uint32_t id) const { return id != 0 && byzantine.count(id) == 0; }
};

// No two correct processes decide different values; no process flips.
Verdict check_agreement(const std::vector<TraceRecord>& trace, const CheckContext& ctx);

// When all correct proposals are one value v, only v is decided.
// Not applicable when proposals are absent or disagree.
Verdict check_validity(const std::vector<TraceRecord>& trace, const CheckContext& ctx);

// Every correct process decides. Only applicable when the scenario claims
// a privileged-link assignment; without one nothing is guaranteed.
Verdict check_termination(const std::vector<TraceRecord>& trace, const CheckContext& ctx);

// Per round, at most one non-bottom value appears on second-filter
// messages sent by correct processes or accepted by correct daemons.
Verdict check_unique_certified(const std::vector<TraceRecord>& trace, const CheckContext& ctx);

// If some correct process decides v in round r, every correct round-(r+1)
// query carries v.
Verdict check_round_handoff(const std::vector<TraceRecord>& trace, const CheckContext& ctx);

// Every delivery matches an earlier unconsumed send with the same message
// digest and endpoints: no forgery, duplication, or alteration in flight.
Verdict check_wire_integrity(const std::vector<TraceRecord>& trace, const CheckContext& ctx);

std::vector<Verdict> run_all_checkers(const std::vector<TraceRecord>& trace,
                                      const CheckContext& ctx);

struct ComplexityReport {
  bool any_decided = false;
  std::uint32_t last_decide_round = 0;  // slowest correct decision
  std::uint64_t steps = 0;              // 1 + 5 * last_decide_round
  std::uint64_t total_sends = 0;
  std::map<std::string, std::uint64_t> sends_by_kind;
  // (round, kind) -> sends; proposals count under round 0
  std::map<std::pair<std::uint32_t, std::string>, std::uint64_t> sends_by_round_kind;

  std::uint64_t sends_in(std::uint32_t round, const std::string& kind) const;
};

ComplexityReport measure_complexity(const std::vector<TraceRecord>& trace,
                                    const CheckContext& ctx);

}  // namespace bwcons
