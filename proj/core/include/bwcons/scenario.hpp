#pragma once

// Run configuration: system sizing, proposals, strategy assignments, link
// behavior and the privileged-link assignment around a pivot process.
//
// Scenario files are flat key/value sections, diffable and easy to emit
// from sweeps:
//
//   [system]
//   n = 4
//   t = 1
//
//   [values]
//   default = a
//   p3 = b
//
//   [byzantine]
//   p4 = crash(0)
//
//   [links]
//   default = async
//   base = 1..4
//   drift = 0
//   p1->p2 = timely(delta=1, tau=0)
//
//   [bw]
//   pivot = p1
//   preset = mixed          # or explicit y = p2 / z = p3
//   delta = 1
//   tau = 0
//
//   [run]
//   seed = 7
//   max_rounds = 16

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bwcons/types.hpp"

namespace bwcons {

enum class LinkClass : std::uint8_t { Asynchronous, Timely, Winning };
const char* to_string(LinkClass c);

// Sampling range for asynchronous delays. With drift_every > 0 the upper
// bound grows by one tick per drift_every elapsed ticks, so delays keep
// increasing without bound while staying finite.
struct AsyncDelay {
  std::uint64_t lo = 1;
  std::uint64_t hi = 4;
  std::uint64_t drift_every = 0;
};

struct LinkModel {
  LinkClass cls = LinkClass::Asynchronous;
  std::uint64_t delta = 1;  // timely delivery bound, valid once stabilized
  std::uint64_t tau = 0;    // stabilization time; asynchronous before it
  // Async links normally sample from the scenario-wide base range; an
  // override like async(base=40..50) pins its own window instead, which is
  // how a scenario makes one link reliably slower than the rest.
  std::optional<AsyncDelay> range;
};

// Privileged neighborhood of a correct pivot: timely both ways to the
// `timely` set, winning responses towards the `winning` set. The two sets
// are disjoint and together hold exactly 2t processes.
struct BWAssignment {
  ProcessId pivot;
  std::vector<ProcessId> timely;   // Y
  std::vector<ProcessId> winning;  // Z
  std::uint64_t delta = 1;         // bound for the timely pairs
  std::uint64_t tau = 0;           // stabilization for all privileged links
};

struct StrategySpec {
  std::string name;  // catalog name, e.g. "crash", "delayer"
  std::vector<std::uint64_t> args;
};

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string id = "scenario";
  std::uint32_t n = 0;
  std::uint32_t t = 0;
  std::vector<Value> values;  // 1-based, values[i] is p_i's proposal
  std::map<std::uint32_t, StrategySpec> byzantine;
  LinkModel default_link;
  AsyncDelay async;
  std::map<std::pair<std::uint32_t, std::uint32_t>, LinkModel> link_overrides;
  std::optional<BWAssignment> bw;
  std::uint64_t seed = 1;
  std::uint32_t max_rounds = 0;  // 0 is replaced by 4n at validation

  SystemParams params() const { return SystemParams(n, t); }
  bool is_byzantine(std::uint32_t id) const { return byzantine.count(id) != 0; }
  const LinkModel& link(std::uint32_t from, std::uint32_t to) const;
  std::vector<std::uint32_t> correct_ids() const;
};

// Fills defaults, applies the bw assignment onto the link map, and checks
// every sizing and consistency rule. Throws ScenarioError (or
// ResilienceError when n <= 3t).
void validate_scenario(Scenario& sc);

// Overwrites sc.bw with a named preset around `pivot`: "bisource" (all 2t
// privileged neighbors timely), "winning" (all winning), "mixed" (t and t).
// Neighbors are the lowest-numbered non-pivot ids.
void apply_bw_preset(Scenario& sc, const std::string& preset, ProcessId pivot,
                     std::uint64_t delta, std::uint64_t tau);

Scenario parse_scenario(const std::string& text, const std::string& id);
Scenario load_scenario(const std::string& path);

}  // namespace bwcons
