#pragma once

// Deterministic discrete-event network. Time is an integer tick counter;
// computation is instantaneous and only message latency and timers advance
// the clock. Ties are broken by a global scheduling sequence number, so a
// (scenario, seed) pair fully determines the trace.
//
// Link classes:
//   async    delay sampled from the scenario's base range; with drift the
//            range's upper bound keeps growing with simulated time
//   timely   delay in [1, delta] once the link has stabilized
//   winning  delay sampled like async (steady), plus an ordering guarantee:
//            for queries issued after stabilization, the sender's response
//            is delivered among the first n-t distinct responses. Enforced
//            by holding back the delivery that would fill the quorum until
//            the privileged response is through.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bwcons/authenticator.hpp"
#include "bwcons/scenario.hpp"
#include "bwcons/types.hpp"

namespace bwcons {

enum class TraceKind : std::uint8_t { Send, Deliver, TimerSet, TimerFire, Decide, Discard };

const char* to_string(TraceKind k);
std::optional<TraceKind> trace_kind_from(const std::string& s);

// One line of the trace. Fields without a value serialize as "-".
struct TraceRecord {
  std::uint64_t time = 0;
  TraceKind kind = TraceKind::Send;
  std::uint32_t actor = 0;
  std::uint32_t peer = 0;                    // 0 when absent
  std::optional<std::uint32_t> round;        // proposals use round 0
  std::string phase;                         // message kind name, "-" otherwise
  std::optional<std::uint64_t> msg_digest;
  std::optional<std::uint64_t> value_digest;  // absent for the non-value
};

struct SimResult {
  std::vector<TraceRecord> trace;
  std::map<std::uint32_t, Value> decisions;        // every actor that decided
  std::map<std::uint32_t, std::uint32_t> decide_round;
  bool budget_exhausted = false;  // a correct process ran past max_rounds
  std::uint64_t end_time = 0;
  std::uint64_t events = 0;
};

// Runs the scenario to quiescence or round-budget exhaustion. The scenario
// must already be validated. A non-empty mutation set reaches every engine
// and daemon, modelling a uniformly miscompiled deployment.
SimResult run_simulation(const Scenario& sc, const MutationSet& muts = {});

}  // namespace bwcons
