#pragma once

// Bounded exhaustive schedule exploration. Instead of sampling seeds, the
// explorer drives real engines through every schedule the protocol can
// distinguish at a fixed round budget: which quorum each process collects
// in each phase, whose query the coordinator adopts, whether each process
// leaves phase 1 through the coordinator or the timeout arm, when decision
// notices land, and what a byzantine process sends to whom. Message order
// inside a collected quorum cannot influence an engine, so schedules are
// enumerated at quorum-subset granularity.
//
// The state space is only tractable for small systems; preconditions are
// enforced at entry. Faulty processes are limited to the strategies whose
// behavior is finitely enumerable here: crash(0), mute, and
// certified-both-values (the latter drawing every send from the certified
// pool its coordinator role exposes).

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bwcons/checkers.hpp"
#include "bwcons/netsim.hpp"
#include "bwcons/scenario.hpp"

namespace bwcons {

struct ExploreOptions {
  std::uint32_t max_rounds = 2;             // round budget, <= 2
  std::uint64_t max_schedules = 2'000'000;  // leaf budget before giving up
  bool stop_on_violation = false;
  bool collect_signatures = false;  // record decision signatures per leaf
  MutationSet muts;
};

struct ExploreReport {
  std::uint64_t schedules = 0;   // completed leaves (plus aborted violating prefixes)
  std::uint64_t violations = 0;  // leaves failing a safety check
  bool budget_exceeded = false;
  std::set<std::string> signatures;            // when collect_signatures
  std::vector<TraceRecord> violation_trace;    // first violation, if any
  std::vector<Verdict> violation_verdicts;
};

ExploreReport explore_exhaustive(const Scenario& sc, const ExploreOptions& opt);

// Canonical "who decided what, when" string, used to compare sampled runs
// against explored leaves: "p2=a@1;p3=a@1;p4=?" (sorted by id).
std::string behavior_signature(const std::map<std::uint32_t, Value>& decisions,
                               const std::map<std::uint32_t, std::uint32_t>& decide_round,
                               const std::set<std::uint32_t>& correct);

}  // namespace bwcons
