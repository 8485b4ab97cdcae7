#pragma once

// The per-process protocol automaton. It is a pure event-stepper: feed it
// a start value, deliveries, and timer expiries; it returns the actions
// (sends, timer ops, decision) to perform. All nondeterminism lives in the
// caller's delivery schedule, so two engines fed the same event sequence
// behave identically.
//
// Round structure, per the four-phase exchange:
//   proposal exchange  -> initial estimate (super-minority adoption)
//   phase 1  QUERY/RESPONSE with a timer on the round coordinator
//   phase 2  RELAY, keep a value only if it is the single non-bottom one
//   phase 3  FILT1, keep a value only on unanimity
//   phase 4  FILT2, decide on unanimity, adopt on value+bottom, else keep

#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "bwcons/authenticator.hpp"
#include "bwcons/message.hpp"
#include "bwcons/types.hpp"

namespace bwcons {

struct StartEvent {
  Value initial;
};
struct DeliverEvent {
  SignedMessage message;
};
struct TimerExpiryEvent {
  std::uint64_t handle = 0;
};
using Event = std::variant<StartEvent, DeliverEvent, TimerExpiryEvent>;

struct SendAction {
  ProcessId to;
  SignedMessage message;
  std::uint64_t extra_delay = 0;  // only strategies stretch their own sends
};
struct SetTimerAction {
  std::uint64_t duration = 0;
  std::uint64_t handle = 0;
  ProcessId about;  // the coordinator the timer guards
};
struct DisableTimerAction {
  std::uint64_t handle = 0;
};
struct DecideAction {
  Value value;
  std::uint32_t round = 0;
};
struct DiscardAction {
  SignedMessage message;
  DiscardReason reason = DiscardReason::Malformed;
  std::string detail;
};
using Action =
    std::variant<SendAction, SetTimerAction, DisableTimerAction, DecideAction, DiscardAction>;

enum class Phase : std::uint8_t { InitWait, Phase1, Phase2, Phase3, Phase4, Decided };

const char* to_string(Phase p);

struct CertifiedValue {
  Value value;
  CertPtr cert;
};

// Accepted messages in arrival order, one per (sender, kind, round).
class MessageStore {
 public:
  void add(const SignedMessage& m);
  const std::vector<SignedMessage>& get(MsgKind kind, std::uint32_t round) const;
  std::size_t count(MsgKind kind, std::uint32_t round) const;

 private:
  std::map<std::pair<std::uint8_t, std::uint32_t>, std::vector<SignedMessage>> slots_;
};

// First `quorum` distinct-sender messages, in delivery order.
// Returns nullopt while the quorum is incomplete.
std::optional<std::vector<SignedMessage>> collect_values(const std::vector<SignedMessage>& arrived,
                                                         std::uint32_t quorum);

// Initial estimate: a value proposed by at least n-2t of the collected
// quorum wins (there can be at most one), otherwise the caller's own value.
Value resolve_init(const std::vector<SignedMessage>& collected, const Value& own,
                   const SystemParams& params);

Value resolve_phase2(const std::vector<SignedMessage>& collected);
Value resolve_phase3(const std::vector<SignedMessage>& collected, const MutationSet& muts = {});

enum class Phase4Outcome : std::uint8_t { Decide, Adopt, Keep };
Phase4Outcome resolve_phase4(const std::vector<SignedMessage>& collected, Value* out);

struct EngineState {
  ProcessId me;
  SystemParams params;
  std::uint32_t round = 0;  // 0 until the proposal exchange resolves
  Phase phase = Phase::InitWait;
  CertifiedValue est;
  CertifiedValue aux;
  std::vector<std::uint32_t> delta;  // per-coordinator timeout, starts at 1
  std::optional<Value> decided;
  std::uint32_t decided_round = 0;
  bool timer_fired = false;
  std::uint64_t timer_handle = 0;
};

class Engine {
 public:
  Engine(ProcessId me, SystemParams params, const AuthBackend* auth, MutationSet muts = {});

  std::vector<Action> step(const Event& event);
  const EngineState& state() const { return state_; }
  const MessageStore& store() const { return store_; }

 private:
  void on_start(const Value& initial, std::vector<Action>& out);
  void on_deliver(const SignedMessage& m, std::vector<Action>& out);
  void on_timer(std::uint64_t handle, std::vector<Action>& out);

  void evaluate(std::vector<Action>& out);
  void begin_round(std::uint32_t r, std::vector<Action>& out);
  void exit_phase1(CertifiedValue aux, std::vector<Action>& out);
  void serve_query(const SignedMessage& q, std::vector<Action>& out);
  void handle_dec(const SignedMessage& d, std::vector<Action>& out);
  void broadcast(const SignedMessage& m, std::vector<Action>& out);

  EngineState state_;
  Signer signer_;
  Daemon daemon_;
  MutationSet muts_;
  MessageStore store_;
  Value initial_;
  std::map<std::uint32_t, CertifiedValue> coord_adopted_;  // rounds I coordinate
  std::uint64_t next_timer_ = 1;
};

}  // namespace bwcons
