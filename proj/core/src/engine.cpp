#include "bwcons/engine.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bwcons {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::InitWait: return "init-wait";
    case Phase::Phase1: return "phase1";
    case Phase::Phase2: return "phase2";
    case Phase::Phase3: return "phase3";
    case Phase::Phase4: return "phase4";
    case Phase::Decided: return "decided";
  }
  return "?";
}

void MessageStore::add(const SignedMessage& m) {
  slots_[{static_cast<std::uint8_t>(m.kind), m.round}].push_back(m);
}

const std::vector<SignedMessage>& MessageStore::get(MsgKind kind, std::uint32_t round) const {
  static const std::vector<SignedMessage> empty;
  auto it = slots_.find({static_cast<std::uint8_t>(kind), round});
  return it == slots_.end() ? empty : it->second;
}

std::size_t MessageStore::count(MsgKind kind, std::uint32_t round) const {
  return get(kind, round).size();
}

std::optional<std::vector<SignedMessage>> collect_values(const std::vector<SignedMessage>& arrived,
                                                         std::uint32_t quorum) {
  if (arrived.size() < quorum) return std::nullopt;
  return std::vector<SignedMessage>(arrived.begin(), arrived.begin() + quorum);
}

Value resolve_init(const std::vector<SignedMessage>& collected, const Value& own,
                   const SystemParams& params) {
  std::map<Value, std::uint32_t> counts;
  for (const auto& m : collected) counts[m.value]++;
  for (const auto& [v, c] : counts)
    if (c >= params.super_minority()) return v;
  return own;
}

Value resolve_phase2(const std::vector<SignedMessage>& collected) {
  ValueSet vs;
  for (const auto& m : collected) vs.add(m.value);
  if (auto v = vs.single_non_bottom()) return *v;
  return Value::bottom();
}

Value resolve_phase3(const std::vector<SignedMessage>& collected, const MutationSet& muts) {
#if BWCONS_MUTATIONS
  if (muts.phase3_any_value) {
    for (const auto& m : collected)
      if (!m.value.is_bottom()) return m.value;
    return Value::bottom();
  }
#else
  (void)muts;
#endif
  ValueSet vs;
  for (const auto& m : collected) vs.add(m.value);
  if (auto v = vs.unanimous(); v && !v->is_bottom()) return *v;
  return Value::bottom();
}

Phase4Outcome resolve_phase4(const std::vector<SignedMessage>& collected, Value* out) {
  ValueSet vs;
  for (const auto& m : collected) vs.add(m.value);
  if (auto v = vs.unanimous(); v && !v->is_bottom()) {
    *out = *v;
    return Phase4Outcome::Decide;
  }
  if (auto v = vs.single_non_bottom()) {
    *out = *v;
    return Phase4Outcome::Adopt;
  }
  *out = Value::bottom();
  return Phase4Outcome::Keep;
}

Engine::Engine(ProcessId me, SystemParams params, const AuthBackend* auth, MutationSet muts)
    : signer_(me, auth), daemon_(params, auth, muts), muts_(muts) {
  state_.me = me;
  state_.params = params;
  state_.delta.assign(params.n + 1, 1);
}

std::vector<Action> Engine::step(const Event& event) {
  std::vector<Action> out;
  if (const auto* s = std::get_if<StartEvent>(&event)) {
    on_start(s->initial, out);
  } else if (const auto* d = std::get_if<DeliverEvent>(&event)) {
    on_deliver(d->message, out);
  } else if (const auto* t = std::get_if<TimerExpiryEvent>(&event)) {
    on_timer(t->handle, out);
  }
  return out;
}

void Engine::broadcast(const SignedMessage& m, std::vector<Action>& out) {
  for (std::uint32_t i = 1; i <= state_.params.n; ++i) out.push_back(SendAction{pid(i), m});
}

void Engine::on_start(const Value& initial, std::vector<Action>& out) {
  initial_ = initial;
  state_.est = {initial, nullptr};
  broadcast(signer_.make(MsgKind::Init, 0, initial, nullptr), out);
}

void Engine::on_deliver(const SignedMessage& m, std::vector<Action>& out) {
  FilterResult fr = daemon_.filter(m, state_.round);
  if (!fr.accepted) {
    out.push_back(DiscardAction{m, fr.reason, fr.detail});
    return;
  }
  store_.add(m);
  if (m.kind == MsgKind::Dec) {
    handle_dec(m, out);
    return;
  }
  if (state_.decided) return;
  if (m.kind == MsgKind::Query) serve_query(m, out);
  evaluate(out);
}

void Engine::on_timer(std::uint64_t handle, std::vector<Action>& out) {
  if (state_.decided) return;
  if (handle != state_.timer_handle || state_.phase != Phase::Phase1) return;
  state_.timer_fired = true;
  evaluate(out);
}

void Engine::serve_query(const SignedMessage& q, std::vector<Action>& out) {
  const bool coordinating = state_.me == coordinator_of(q.round, state_.params);
  if (coordinating) {
    auto it = coord_adopted_.find(q.round);
    if (it == coord_adopted_.end())
      it = coord_adopted_.emplace(q.round, CertifiedValue{q.value, q.certificate}).first;
    out.push_back(SendAction{
        q.sender, signer_.make(MsgKind::Response, q.round, it->second.value, it->second.cert)});
  } else {
    // Value is ignored by correct receivers; no certificate needed.
    out.push_back(SendAction{q.sender, signer_.make(MsgKind::Response, q.round, state_.est.value, nullptr)});
  }
}

void Engine::handle_dec(const SignedMessage& d, std::vector<Action>& out) {
  if (state_.decided) return;
  broadcast(signer_.make(MsgKind::Dec, d.round, d.value, d.certificate), out);
  state_.decided = d.value;
  state_.decided_round = state_.round;
  state_.phase = Phase::Decided;
  out.push_back(DecideAction{d.value, state_.round});
}

void Engine::begin_round(std::uint32_t r, std::vector<Action>& out) {
  state_.round = r;
  state_.phase = Phase::Phase1;
  state_.timer_fired = false;
  state_.aux = {};
  ProcessId c = coordinator_of(r, state_.params);
  broadcast(signer_.make(MsgKind::Query, r, state_.est.value, state_.est.cert), out);
  state_.timer_handle = next_timer_++;
  out.push_back(SetTimerAction{state_.delta[c.index], state_.timer_handle, c});
}

void Engine::exit_phase1(CertifiedValue aux, std::vector<Action>& out) {
  ProcessId c = coordinator_of(state_.round, state_.params);
  if (state_.timer_fired) {
    state_.delta[c.index]++;
  } else {
    out.push_back(DisableTimerAction{state_.timer_handle});
  }
  state_.aux = std::move(aux);
  state_.phase = Phase::Phase2;
  broadcast(signer_.make(MsgKind::Relay, state_.round, state_.aux.value, state_.aux.cert), out);
}

void Engine::evaluate(std::vector<Action>& out) {
  bool progressed = true;
  while (progressed && !state_.decided) {
    progressed = false;
    const auto quorum = state_.params.quorum();
    switch (state_.phase) {
      case Phase::InitWait: {
        auto q = collect_values(store_.get(MsgKind::Init, 0), quorum);
        if (!q) break;
        Value est = resolve_init(*q, initial_, state_.params);
        state_.est = {est, build_certificate(CertKind::InitQuorum, *q)};
        begin_round(1, out);
        progressed = true;
        break;
      }
      case Phase::Phase1: {
        const auto& responses = store_.get(MsgKind::Response, state_.round);
        ProcessId c = coordinator_of(state_.round, state_.params);
        const SignedMessage* coord = nullptr;
        for (const auto& r : responses)
          if (r.sender == c) {
            coord = &r;
            break;
          }
        if (coord) {
          auto cert = build_certificate(CertKind::CoordResponse, {*coord}, coord->certificate);
          exit_phase1({coord->value, std::move(cert)}, out);
          progressed = true;
          break;
        }
        if (state_.timer_fired && responses.size() >= quorum) {
          auto q = collect_values(responses, quorum);
          exit_phase1({Value::bottom(), build_certificate(CertKind::ResponseQuorum, *q)}, out);
          progressed = true;
        }
        break;
      }
      case Phase::Phase2: {
        auto q = collect_values(store_.get(MsgKind::Relay, state_.round), quorum);
        if (!q) break;
        Value v = resolve_phase2(*q);
        state_.aux = {v, build_certificate(CertKind::RelayQuorum, *q)};
        state_.phase = Phase::Phase3;
        broadcast(signer_.make(MsgKind::Filt1, state_.round, v, state_.aux.cert), out);
        progressed = true;
        break;
      }
      case Phase::Phase3: {
        auto q = collect_values(store_.get(MsgKind::Filt1, state_.round), quorum);
        if (!q) break;
        Value v = resolve_phase3(*q, muts_);
        state_.aux = {v, build_certificate(CertKind::Filt1Quorum, *q)};
        state_.phase = Phase::Phase4;
        broadcast(signer_.make(MsgKind::Filt2, state_.round, v, state_.aux.cert), out);
        progressed = true;
        break;
      }
      case Phase::Phase4: {
        auto q = collect_values(store_.get(MsgKind::Filt2, state_.round), quorum);
        if (!q) break;
        Value v;
        switch (resolve_phase4(*q, &v)) {
          case Phase4Outcome::Decide: {
            auto cert = build_certificate(CertKind::DecQuorum, *q);
            broadcast(signer_.make(MsgKind::Dec, state_.round, v, cert), out);
            state_.decided = v;
            state_.decided_round = state_.round;
            state_.phase = Phase::Decided;
            out.push_back(DecideAction{v, state_.round});
            return;
          }
          case Phase4Outcome::Adopt:
            state_.est = {v, build_certificate(CertKind::Filt2Quorum, *q)};
            break;
          case Phase4Outcome::Keep:
            // No value survived; keep the estimate and extend its proof
            // with the bottom quorum so the next QUERY still validates.
            state_.est.cert =
                build_certificate(CertKind::ChainedEstimate, *q, state_.est.cert);
            break;
        }
        begin_round(state_.round + 1, out);
        progressed = true;
        break;
      }
      case Phase::Decided:
        break;
    }
  }
}

}  // namespace bwcons
