#include "bwcons/netsim.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <random>
#include <set>

#include "bwcons/adversary.hpp"
#include "bwcons/authenticator.hpp"
#include "bwcons/engine.hpp"

namespace bwcons {

const char* to_string(TraceKind k) {
  switch (k) {
    case TraceKind::Send: return "send";
    case TraceKind::Deliver: return "deliver";
    case TraceKind::TimerSet: return "timer_set";
    case TraceKind::TimerFire: return "timer_fire";
    case TraceKind::Decide: return "decide";
    case TraceKind::Discard: return "discard";
  }
  return "?";
}

std::optional<TraceKind> trace_kind_from(const std::string& s) {
  for (auto k : {TraceKind::Send, TraceKind::Deliver, TraceKind::TimerSet, TraceKind::TimerFire,
                 TraceKind::Decide, TraceKind::Discard})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

namespace {

struct Ev {
  std::uint64_t time = 0;
  std::uint64_t seq = 0;
  bool is_timer = false;
  // delivery
  std::uint32_t from = 0, to = 0;
  SignedMessage msg;
  // timer
  std::uint32_t actor = 0;
  std::uint64_t handle = 0;
  std::uint32_t about = 0;
};

struct EvLater {
  bool operator()(const Ev& a, const Ev& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

// Winning-order bookkeeping for one (querier, round) pair.
struct QueryGate {
  std::set<std::uint32_t> winners;    // privileged responders still owed a slot
  std::set<std::uint32_t> delivered;  // distinct responders seen so far
  std::deque<Ev> held;                // deliveries parked to keep slots open
};

class Simulation {
 public:
  Simulation(const Scenario& sc, const MutationSet& muts)
      : sc_(sc), params_(sc.params()), rng_(sc.seed) {
    const std::uint32_t n = params_.n;
    engines_.resize(n + 1);
    strategies_.resize(n + 1);
    for (std::uint32_t i = 1; i <= n; ++i) {
      auto it = sc_.byzantine.find(i);
      if (it == sc_.byzantine.end())
        engines_[i] = std::make_unique<Engine>(pid(i), params_, &auth_, muts);
      else
        strategies_[i] =
            make_strategy(it->second, pid(i), params_, &auth_, sc_.seed ^ (0x9e37 + i), muts);
    }
  }

  SimResult run() {
    for (std::uint32_t i = 1; i <= params_.n; ++i)
      apply(i, step_start(i, sc_.values[i]));
    while (!queue_.empty() && !result_.budget_exhausted) {
      if (++result_.events > event_cap_) {
        result_.budget_exhausted = true;
        break;
      }
      Ev ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      if (ev.is_timer) {
        fire_timer(ev);
      } else {
        route_delivery(std::move(ev));
      }
    }
    result_.end_time = now_;
    return std::move(result_);
  }

 private:
  std::vector<Action> step_start(std::uint32_t i, const Value& v) {
    if (engines_[i]) return engines_[i]->step(StartEvent{v});
    return strategies_[i]->on_start(v);
  }

  std::vector<Action> step_deliver(std::uint32_t i, const SignedMessage& m) {
    if (engines_[i]) return engines_[i]->step(DeliverEvent{m});
    return strategies_[i]->on_deliver(m, now_);
  }

  std::vector<Action> step_timer(std::uint32_t i, std::uint64_t handle) {
    if (engines_[i]) return engines_[i]->step(TimerExpiryEvent{handle});
    return strategies_[i]->on_timer(handle, now_);
  }

  std::uint64_t sample_async(const AsyncDelay& ad, bool drifting) {
    std::uint64_t hi = ad.hi;
    if (drifting && ad.drift_every > 0) hi += now_ / ad.drift_every;
    return ad.lo + rng_() % (hi - ad.lo + 1);
  }

  std::uint64_t sample_delay(const LinkModel& lm) {
    switch (lm.cls) {
      case LinkClass::Timely:
        if (now_ >= lm.tau) return 1 + rng_() % lm.delta;
        return sample_async(sc_.async, true);
      case LinkClass::Winning:
        return sample_async(sc_.async, false);
      case LinkClass::Asynchronous:
        return sample_async(lm.range ? *lm.range : sc_.async, true);
    }
    return 1;
  }

  void record(TraceRecord r) {
    r.time = now_;
    result_.trace.push_back(std::move(r));
  }

  static std::optional<std::uint64_t> value_digest(const Value& v) {
    if (v.is_bottom()) return std::nullopt;
    return digest_of(v);
  }

  void apply(std::uint32_t actor, const std::vector<Action>& actions) {
    for (const auto& a : actions) {
      if (const auto* s = std::get_if<SendAction>(&a)) {
        handle_send(actor, *s);
      } else if (const auto* st = std::get_if<SetTimerAction>(&a)) {
        Ev ev;
        ev.time = now_ + st->duration;
        ev.seq = next_seq_++;
        ev.is_timer = true;
        ev.actor = actor;
        ev.handle = st->handle;
        ev.about = st->about.index;
        queue_.push(ev);
        record({0, TraceKind::TimerSet, actor, st->about.index, current_round(actor), "-",
                std::nullopt, std::nullopt});
      } else if (const auto* dt = std::get_if<DisableTimerAction>(&a)) {
        cancelled_.insert({actor, dt->handle});
      } else if (const auto* d = std::get_if<DecideAction>(&a)) {
        result_.decisions[actor] = d->value;
        result_.decide_round[actor] = d->round;
        record({0, TraceKind::Decide, actor, 0, d->round, "-", std::nullopt,
                value_digest(d->value)});
        release_gates_waiting_on(actor);
      } else if (const auto* x = std::get_if<DiscardAction>(&a)) {
        record({0, TraceKind::Discard, actor, x->message.sender.index, x->message.round,
                to_string(x->message.kind), x->message.digest(), value_digest(x->message.value)});
      }
    }
  }

  std::optional<std::uint32_t> current_round(std::uint32_t actor) const {
    if (engines_[actor]) return engines_[actor]->state().round;
    return std::nullopt;
  }

  void handle_send(std::uint32_t from, const SendAction& s) {
    const SignedMessage& m = s.message;
    record({0, TraceKind::Send, from, s.to.index, m.round, to_string(m.kind), m.digest(),
            value_digest(m.value)});
    if (m.kind == MsgKind::Query && engines_[from] && m.round >= 1) register_query(from, m.round);

    Ev ev;
    ev.seq = next_seq_++;
    ev.from = from;
    ev.to = s.to.index;
    ev.msg = m;
    if (s.to.index == from)
      ev.time = now_;  // own messages come back instantly
    else
      ev.time = now_ + sample_delay(sc_.link(from, s.to.index)) + s.extra_delay;
    queue_.push(ev);
  }

  // A query opens a winning-order window when some correct responder has a
  // stabilized winning link towards the querier.
  void register_query(std::uint32_t querier, std::uint32_t round) {
    auto key = std::make_pair(querier, round);
    if (gates_.count(key)) return;
    QueryGate gate;
    for (std::uint32_t w = 1; w <= params_.n; ++w) {
      if (w == querier || sc_.is_byzantine(w)) continue;
      const LinkModel& lm = sc_.link(w, querier);
      if (lm.cls != LinkClass::Winning || now_ < lm.tau) continue;
      if (result_.decisions.count(w)) continue;  // already decided, answers nothing
      gate.winners.insert(w);
    }
    if (!gate.winners.empty()) gates_.emplace(key, std::move(gate));
  }

  void release_gates_waiting_on(std::uint32_t decided) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ready;
    for (auto& [key, g] : gates_) {
      g.winners.erase(decided);
      if (g.winners.empty()) ready.push_back(key);
    }
    for (const auto& key : ready) {
      auto node = gates_.extract(key);
      if (node.empty()) continue;  // a nested delivery already flushed it
      for (auto& held : node.mapped().held) deliver(std::move(held));
    }
  }

  void route_delivery(Ev ev) {
    if (ev.msg.kind == MsgKind::Response && engines_[ev.to]) {
      auto key = std::make_pair(ev.to, ev.msg.round);
      auto it = gates_.find(key);
      if (it != gates_.end()) {
        QueryGate& g = it->second;
        if (g.winners.count(ev.from)) {
          g.winners.erase(ev.from);
          deliver(std::move(ev));
          // The delivery can mutate the gate map; look the gate up again.
          if (auto again = gates_.find(key);
              again != gates_.end() && again->second.winners.empty()) {
            auto node = gates_.extract(again);
            for (auto& held : node.mapped().held) deliver(std::move(held));
          }
          return;
        }
        bool new_sender = g.delivered.count(ev.from) == 0;
        bool would_fill = new_sender && g.delivered.size() + 1 >= params_.quorum();
        if (would_fill && !g.winners.empty()) {
          g.held.push_back(std::move(ev));
          return;
        }
      }
    }
    deliver(std::move(ev));
  }

  void deliver(Ev ev) {
    auto gate = gates_.find(std::make_pair(ev.to, ev.msg.round));
    if (ev.msg.kind == MsgKind::Response && gate != gates_.end())
      gate->second.delivered.insert(ev.from);

    record({0, TraceKind::Deliver, ev.to, ev.from, ev.msg.round, to_string(ev.msg.kind),
            ev.msg.digest(), value_digest(ev.msg.value)});
    apply(ev.to, step_deliver(ev.to, ev.msg));
    after_step(ev.to);
  }

  void fire_timer(const Ev& ev) {
    if (cancelled_.count({ev.actor, ev.handle})) return;
    record({0, TraceKind::TimerFire, ev.actor, ev.about, current_round(ev.actor), "-",
            std::nullopt, std::nullopt});
    apply(ev.actor, step_timer(ev.actor, ev.handle));
    after_step(ev.actor);
  }

  void after_step(std::uint32_t actor) {
    if (engines_[actor] && engines_[actor]->state().round > sc_.max_rounds)
      result_.budget_exhausted = true;
  }

  const Scenario& sc_;
  SystemParams params_;
  SimAuthenticator auth_;
  std::mt19937_64 rng_;
  std::vector<std::unique_ptr<Engine>> engines_;        // correct processes
  std::vector<std::unique_ptr<Strategy>> strategies_;   // byzantine processes
  std::priority_queue<Ev, std::vector<Ev>, EvLater> queue_;
  std::set<std::pair<std::uint32_t, std::uint64_t>> cancelled_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, QueryGate> gates_;
  std::uint64_t now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t event_cap_ = 2'000'000;
  SimResult result_;
};

}  // namespace

SimResult run_simulation(const Scenario& sc, const MutationSet& muts) {
  return Simulation(sc, muts).run();
}

}  // namespace bwcons
