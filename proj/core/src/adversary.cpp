#include "bwcons/adversary.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace bwcons {

namespace {

// Correct engine behind a hook that rewrites the action stream.
class EngineBacked : public Strategy {
 public:
  EngineBacked(ProcessId me, const SystemParams& params, const AuthBackend* auth,
               const MutationSet& muts)
      : eng_(me, params, auth, muts), me_(me), params_(params), auth_(auth) {}

  std::vector<Action> on_start(const Value& initial) override {
    return rewrite(eng_.step(StartEvent{initial}), 0);
  }
  std::vector<Action> on_deliver(const SignedMessage& m, std::uint64_t now) override {
    return rewrite(eng_.step(DeliverEvent{m}), now);
  }
  std::vector<Action> on_timer(std::uint64_t handle, std::uint64_t now) override {
    return rewrite(eng_.step(TimerExpiryEvent{handle}), now);
  }

 protected:
  virtual std::vector<Action> rewrite(std::vector<Action> actions, std::uint64_t now) {
    (void)now;
    return actions;
  }

  Engine eng_;
  ProcessId me_;
  SystemParams params_;
  const AuthBackend* auth_;
};

class CrashStrategy : public EngineBacked {
 public:
  CrashStrategy(std::uint64_t allowance, ProcessId me, const SystemParams& params,
                const AuthBackend* auth, const MutationSet& muts)
      : EngineBacked(me, params, auth, muts), left_(allowance) {}

 protected:
  std::vector<Action> rewrite(std::vector<Action> actions, std::uint64_t) override {
    std::vector<Action> out;
    for (auto& a : actions) {
      if (std::holds_alternative<SendAction>(a)) {
        if (left_ == 0) continue;  // crashed mid-broadcast, rest is lost
        --left_;
        out.push_back(std::move(a));
      } else if (left_ > 0) {
        out.push_back(std::move(a));
      }
    }
    return out;
  }

 private:
  std::uint64_t left_;
};

class MuteStrategy : public EngineBacked {
 public:
  using EngineBacked::EngineBacked;

 protected:
  std::vector<Action> rewrite(std::vector<Action> actions, std::uint64_t) override {
    std::erase_if(actions, [](const Action& a) { return std::holds_alternative<SendAction>(a); });
    return actions;
  }
};

class SilentCoordinatorStrategy : public EngineBacked {
 public:
  using EngineBacked::EngineBacked;

 protected:
  std::vector<Action> rewrite(std::vector<Action> actions, std::uint64_t) override {
    std::erase_if(actions, [&](const Action& a) {
      const auto* s = std::get_if<SendAction>(&a);
      return s && s->message.kind == MsgKind::Response &&
             coordinator_of(s->message.round, params_) == me_;
    });
    return actions;
  }
};

class DelayerStrategy : public EngineBacked {
 public:
  DelayerStrategy(std::uint64_t stretch, ProcessId me, const SystemParams& params,
                  const AuthBackend* auth, const MutationSet& muts)
      : EngineBacked(me, params, auth, muts), stretch_(stretch) {}

 protected:
  std::vector<Action> rewrite(std::vector<Action> actions, std::uint64_t) override {
    for (auto& a : actions)
      if (auto* s = std::get_if<SendAction>(&a)) s->extra_delay = stretch_;
    return actions;
  }

 private:
  std::uint64_t stretch_;
};

class EquivocatorStrategy : public EngineBacked {
 public:
  using EngineBacked::EngineBacked;

  std::vector<Action> on_start(const Value& initial) override {
    auto actions = eng_.step(StartEvent{initial});
    Signer signer(me_, auth_);
    Value alt = Value::of(initial.bytes() + "'");
    std::vector<Action> out;
    for (auto& a : actions) {
      const auto* s = std::get_if<SendAction>(&a);
      if (s && s->message.kind == MsgKind::Init) {
        Value v = s->to.index % 2 == 0 ? alt : initial;
        out.push_back(SendAction{s->to, signer.make(MsgKind::Init, 0, v, nullptr)});
      } else {
        out.push_back(std::move(a));
      }
    }
    return out;
  }
};

class InvalidSpammerStrategy : public EngineBacked {
 public:
  InvalidSpammerStrategy(std::uint64_t budget, ProcessId me, const SystemParams& params,
                         const AuthBackend* auth, const MutationSet& muts, std::uint64_t seed)
      : EngineBacked(me, params, auth, muts), signer_(me, auth), budget_(budget), rng_(seed) {}

 protected:
  std::vector<Action> rewrite(std::vector<Action> actions, std::uint64_t) override {
    while (budget_ > 0) {
      --budget_;
      ProcessId target = pid(1 + static_cast<std::uint32_t>(rng_() % params_.n));
      actions.push_back(SendAction{target, craft(budget_)});
    }
    return actions;
  }

 private:
  SignedMessage craft(std::uint64_t variant) {
    switch (variant % 4) {
      case 0: {  // signature does not match the content
        SignedMessage m = signer_.make(MsgKind::Relay, 1, Value::of("junk"), nullptr);
        m.value = Value::of("tampered");
        return m;
      }
      case 1:  // certificate required but absent
        return signer_.make(MsgKind::Filt2, 1, Value::of("junk"), nullptr);
      case 2:  // proposal carrying a round
        return signer_.make(MsgKind::Init, 3, Value::of("junk"), nullptr);
      default: {  // certificate with nonsense arity
        auto cert = build_certificate(CertKind::RelayQuorum,
                                      {signer_.make(MsgKind::Relay, 1, Value::bottom(), nullptr)});
        return signer_.make(MsgKind::Filt1, 1, Value::of("junk"), cert);
      }
    }
  }

  Signer signer_;
  std::uint64_t budget_;
  std::mt19937_64 rng_;
};

// Collects certified (value, proof) pairs from delivered queries and, as
// coordinator, spreads them across queriers instead of adopting one.
class CertifiedBothValuesStrategy : public EngineBacked {
 public:
  CertifiedBothValuesStrategy(ProcessId me, const SystemParams& params, const AuthBackend* auth,
                              const MutationSet& muts)
      : EngineBacked(me, params, auth, muts), signer_(me, auth) {}

  std::vector<Action> on_deliver(const SignedMessage& m, std::uint64_t now) override {
    if (m.kind == MsgKind::Query && coordinator_of(m.round, params_) == me_) {
      auto& pool = adopted_[m.round];
      bool fresh = std::none_of(pool.begin(), pool.end(),
                                [&](const CertifiedValue& cv) { return cv.value == m.value; });
      if (fresh && m.certificate) pool.push_back({m.value, m.certificate});
    }
    auto actions = EngineBacked::on_deliver(m, now);
    if (m.kind == MsgKind::Query && coordinator_of(m.round, params_) == me_) {
      const auto& pool = adopted_[m.round];
      if (!pool.empty()) {
        const CertifiedValue& pick = pool[m.sender.index % pool.size()];
        actions.push_back(
            SendAction{m.sender, signer_.make(MsgKind::Response, m.round, pick.value, pick.cert)});
      }
    }
    return actions;
  }

 protected:
  std::vector<Action> rewrite(std::vector<Action> actions, std::uint64_t) override {
    // The inner engine's own coordinator responses are superseded above.
    std::erase_if(actions, [&](const Action& a) {
      const auto* s = std::get_if<SendAction>(&a);
      return s && s->message.kind == MsgKind::Response &&
             coordinator_of(s->message.round, params_) == me_;
    });
    return actions;
  }

 private:
  Signer signer_;
  std::map<std::uint32_t, std::vector<CertifiedValue>> adopted_;
};

}  // namespace

const std::vector<std::string>& strategy_catalog() {
  static const std::vector<std::string> names = {
      "crash",   "mute",           "silent-coordinator",    "equivocator",
      "delayer", "invalid-spammer", "certified-both-values",
  };
  return names;
}

std::string check_strategy(const StrategySpec& spec) {
  const auto& cat = strategy_catalog();
  if (std::find(cat.begin(), cat.end(), spec.name) == cat.end())
    return "unknown strategy '" + spec.name + "'";
  if (spec.args.size() > 1) return "strategy '" + spec.name + "' takes at most one argument";
  return {};
}

std::unique_ptr<Strategy> make_strategy(const StrategySpec& spec, ProcessId me,
                                        const SystemParams& params, const AuthBackend* auth,
                                        std::uint64_t seed, const MutationSet& muts) {
  auto arg = [&](std::uint64_t fallback) { return spec.args.empty() ? fallback : spec.args[0]; };
  if (spec.name == "crash")
    return std::make_unique<CrashStrategy>(arg(0), me, params, auth, muts);
  if (spec.name == "mute") return std::make_unique<MuteStrategy>(me, params, auth, muts);
  if (spec.name == "silent-coordinator")
    return std::make_unique<SilentCoordinatorStrategy>(me, params, auth, muts);
  if (spec.name == "equivocator")
    return std::make_unique<EquivocatorStrategy>(me, params, auth, muts);
  if (spec.name == "delayer")
    return std::make_unique<DelayerStrategy>(arg(3), me, params, auth, muts);
  if (spec.name == "invalid-spammer")
    return std::make_unique<InvalidSpammerStrategy>(arg(6), me, params, auth, muts, seed);
  if (spec.name == "certified-both-values")
    return std::make_unique<CertifiedBothValuesStrategy>(me, params, auth, muts);
  throw ScenarioError("unknown strategy '" + spec.name + "'");
}

}  // namespace bwcons
