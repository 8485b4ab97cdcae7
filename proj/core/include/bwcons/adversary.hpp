#pragma once

// Byzantine behavior catalog. A strategy is driven exactly like an engine
// (start value, deliveries, timer expiries) and may answer with arbitrary
// actions; the only hard limit is that it signs with its own key, so
// anything uncertifiable it emits dies at the receivers' daemons.
//
//   crash(k)               emits its first k messages, then nothing ever
//   mute                   receives everything, sends nothing
//   silent-coordinator     correct, except it never answers queries in
//                          rounds it coordinates
//   equivocator            proposes one value to half the processes and a
//                          different one to the rest, correct afterwards
//   delayer(d)             correct, but every send is stretched by d ticks
//   invalid-spammer(k)     correct, plus up to k junk messages aimed at the
//                          daemon rejection paths
//   certified-both-values  as coordinator, answers different queriers with
//                          different certified values when it has seen
//                          certified queries for at least two values

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bwcons/engine.hpp"
#include "bwcons/scenario.hpp"

namespace bwcons {

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::vector<Action> on_start(const Value& initial) = 0;
  virtual std::vector<Action> on_deliver(const SignedMessage& m, std::uint64_t now) = 0;
  virtual std::vector<Action> on_timer(std::uint64_t handle, std::uint64_t now) = 0;
};

// Empty when `spec` names a catalog strategy with acceptable arguments,
// otherwise a description of the problem.
std::string check_strategy(const StrategySpec& spec);

// Names in catalog order, for sweep rotation.
const std::vector<std::string>& strategy_catalog();

std::unique_ptr<Strategy> make_strategy(const StrategySpec& spec, ProcessId me,
                                        const SystemParams& params, const AuthBackend* auth,
                                        std::uint64_t seed, const MutationSet& muts = {});

}  // namespace bwcons
