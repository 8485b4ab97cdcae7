#include "bwcons/explore.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include "bwcons/engine.hpp"

namespace bwcons {

std::string behavior_signature(const std::map<std::uint32_t, Value>& decisions,
                               const std::map<std::uint32_t, std::uint32_t>& decide_round,
                               const std::set<std::uint32_t>& correct) {
  std::ostringstream out;
  bool first = true;
  for (std::uint32_t id : correct) {
    if (!first) out << ";";
    first = false;
    out << "p" << id << "=";
    auto it = decisions.find(id);
    if (it == decisions.end()) {
      out << "?";
      continue;
    }
    out << (it->second.is_bottom() ? std::string("-") : it->second.bytes());
    auto rit = decide_round.find(id);
    if (rit != decide_round.end()) out << "@" << rit->second;
  }
  return out.str();
}

namespace {

using BKey = std::tuple<std::uint8_t, std::uint32_t, std::uint32_t>;  // kind, round, sender
using UKey = std::tuple<std::uint8_t, std::uint32_t, std::uint32_t, std::uint32_t>;

BKey bkey(MsgKind k, std::uint32_t r, std::uint32_t from) {
  return {static_cast<std::uint8_t>(k), r, from};
}
UKey ukey(MsgKind k, std::uint32_t r, std::uint32_t from, std::uint32_t to) {
  return {static_cast<std::uint8_t>(k), r, from, to};
}

std::optional<std::uint64_t> vdigest(const Value& v) {
  if (v.is_bottom()) return std::nullopt;
  return digest_of(v);
}

// Everything a schedule prefix has determined. Copied at every choice
// point; the sizes the preconditions allow keep that cheap.
struct World {
  std::vector<std::optional<Engine>> eng;  // 1..n, empty slots are faulty
  std::map<BKey, SignedMessage> bcast;
  std::map<UKey, SignedMessage> ucast;  // responses
  std::vector<SignedMessage> decs;
  std::set<Digest> dec_seen;
  std::set<std::pair<std::uint32_t, Digest>> delivered;  // exactly-once per receiver
  std::vector<std::uint64_t> timer;
  std::vector<TraceRecord> trace;
  std::uint64_t clock = 0;
  std::map<std::uint32_t, Value> decisions;
  std::map<std::uint32_t, std::uint32_t> decide_round;
};

// Phase-1 exit for one process.
struct ArmChoice {
  bool stall = false;
  bool timeout = false;
  int pool_pick = -1;  // >=0: faulty coordinator answers with this pool value
};

// Which quorum a process collects in a filter phase: correct senders plus
// at most one faulty message (its own proposal is always counted already).
struct CollectOption {
  std::vector<std::uint32_t> senders;
  int byz_pick = -1;
  bool stall = false;
};

void subsets_of(const std::vector<std::uint32_t>& pool, std::uint32_t k,
                const std::function<void(const std::vector<std::uint32_t>&)>& cb) {
  if (k > pool.size()) return;
  std::vector<std::uint32_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t at) {
    if (cur.size() == k) {
      cb(cur);
      return;
    }
    if (pool.size() - at < k - cur.size()) return;
    for (std::size_t i = at; i < pool.size(); ++i) {
      cur.push_back(pool[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

class Explorer {
 public:
  Explorer(const Scenario& sc, const ExploreOptions& opt)
      : sc_(sc), opt_(opt), params_(sc.params()) {
    if (params_.n > 4) throw ScenarioError("explore handles at most 4 processes");
    if (opt_.max_rounds > 2) throw ScenarioError("explore round budget is at most 2");
    for (const auto& [id, spec] : sc_.byzantine) {
      if (spec.name == "crash") {
        if (!spec.args.empty() && spec.args[0] != 0)
          throw ScenarioError("explore supports crash only with allowance 0");
      } else if (spec.name == "mute") {
        // same observable behavior as crash(0)
      } else if (spec.name == "certified-both-values") {
        cbv_ = true;
      } else {
        throw ScenarioError("explore supports crash(0), mute and certified-both-values only");
      }
      byz_ = id;
    }
    for (std::uint32_t id = 1; id <= params_.n; ++id)
      if (id != byz_) {
        correct_.push_back(id);
        correct_set_.insert(id);
      }
    ctx_ = CheckContext::from_scenario(sc_);
  }

  ExploreReport run() {
    World base;
    base.eng.resize(params_.n + 1);
    base.timer.resize(params_.n + 1, 0);
    for (std::uint32_t id : correct_) base.eng[id].emplace(pid(id), params_, &auth_, opt_.muts);
    for (std::uint32_t id : correct_)
      capture(base, id, base.eng[id]->step(StartEvent{sc_.values[id]}));
    if (cbv_) {
      // The certified-both-values process proposes honestly; its leverage
      // is in what it later certifies, not in the proposal exchange.
      SignedMessage m = Signer(pid(byz_), &auth_).make(MsgKind::Init, 0, sc_.values[byz_], nullptr);
      base.bcast.emplace(bkey(MsgKind::Init, 0, byz_), m);
      for (std::uint32_t to : correct_) rec_send(base, byz_, to, m);
    }

    // Proposal-exchange choices: who reaches its quorum first (that query
    // pins the round-1 adoption) and which quorum each process collects.
    std::vector<std::vector<CollectOption>> opts;
    for (std::uint32_t p : correct_) opts.push_back(init_options(base, p));
    for (std::uint32_t adopter : correct_) {
      odometer(opts, [&](const std::vector<std::size_t>& idx) {
        World w = base;
        ++w.clock;
        stage_init(w, adopter, opts, idx);
        dfs_round(std::move(w), 1);
      });
      if (done_) break;
    }
    return std::move(res_);
  }

 private:
  // ---- bookkeeping ----------------------------------------------------

  bool done_ = false;

  void rec_send(World& w, std::uint32_t from, std::uint32_t to, const SignedMessage& m) {
    w.trace.push_back({w.clock, TraceKind::Send, from, to, m.round, to_string(m.kind), m.digest(),
                       vdigest(m.value)});
  }

  void route(World& w, std::uint32_t to, const SignedMessage& m) {
    if (!w.eng[to]) return;
    if (!w.delivered.insert({to, m.digest()}).second) return;
    w.trace.push_back({w.clock, TraceKind::Deliver, to, m.sender.index, m.round,
                       to_string(m.kind), m.digest(), vdigest(m.value)});
    capture(w, to, w.eng[to]->step(DeliverEvent{m}));
  }

  // Record and file every action; own broadcasts loop back instantly, which
  // is what keeps "own message first" true for every collect.
  void capture(World& w, std::uint32_t p, std::vector<Action> actions) {
    std::deque<Action> q(actions.begin(), actions.end());
    while (!q.empty()) {
      Action a = std::move(q.front());
      q.pop_front();
      if (auto* s = std::get_if<SendAction>(&a)) {
        const SignedMessage& m = s->message;
        rec_send(w, p, s->to.index, m);
        if (m.kind == MsgKind::Response)
          w.ucast.emplace(ukey(m.kind, m.round, p, s->to.index), m);
        else if (m.kind == MsgKind::Dec) {
          if (w.dec_seen.insert(m.digest()).second) w.decs.push_back(m);
        } else {
          w.bcast.emplace(bkey(m.kind, m.round, p), m);
        }
        if (s->to.index == p && w.delivered.insert({p, m.digest()}).second) {
          w.trace.push_back({w.clock, TraceKind::Deliver, p, p, m.round, to_string(m.kind),
                             m.digest(), vdigest(m.value)});
          auto more = w.eng[p]->step(DeliverEvent{m});
          q.insert(q.end(), more.begin(), more.end());
        }
      } else if (auto* st = std::get_if<SetTimerAction>(&a)) {
        w.timer[p] = st->handle;
        w.trace.push_back({w.clock, TraceKind::TimerSet, p, st->about.index,
                           w.eng[p]->state().round, "-", std::nullopt, std::nullopt});
      } else if (auto* d = std::get_if<DecideAction>(&a)) {
        w.decisions[p] = d->value;
        w.decide_round[p] = d->round;
        w.trace.push_back(
            {w.clock, TraceKind::Decide, p, 0, d->round, "-", std::nullopt, vdigest(d->value)});
      } else if (auto* x = std::get_if<DiscardAction>(&a)) {
        w.trace.push_back({w.clock, TraceKind::Discard, p, x->message.sender.index,
                           x->message.round, to_string(x->message.kind), x->message.digest(),
                           vdigest(x->message.value)});
      }
      // DisableTimerAction: nothing pending to cancel here
    }
  }

  template <typename Opt>
  void odometer(const std::vector<std::vector<Opt>>& options,
                const std::function<void(const std::vector<std::size_t>&)>& f) {
    for (const auto& o : options)
      if (o.empty()) return;
    std::vector<std::size_t> idx(options.size(), 0);
    while (!done_) {
      f(idx);
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == options[i].size()) {
        idx[i] = 0;
        ++i;
      }
      if (i == idx.size()) return;
    }
  }

  // ---- proposal exchange ----------------------------------------------

  std::vector<CollectOption> init_options(World& w, std::uint32_t p) {
    std::vector<std::uint32_t> avail;
    for (std::uint32_t x = 1; x <= params_.n; ++x)
      if (x != p && w.bcast.count(bkey(MsgKind::Init, 0, x))) avail.push_back(x);
    std::vector<CollectOption> opts;
    subsets_of(avail, params_.quorum() - 1,
               [&](const std::vector<std::uint32_t>& s) { opts.push_back({s, -1, false}); });
    if (opts.empty()) opts.push_back({{}, -1, true});
    return opts;
  }

  void stage_init(World& w, std::uint32_t adopter,
                  const std::vector<std::vector<CollectOption>>& opts,
                  const std::vector<std::size_t>& idx) {
    auto feed = [&](std::uint32_t p, const CollectOption& opt) {
      if (opt.stall) return;
      for (std::uint32_t x : opt.senders) route(w, p, w.bcast.at(bkey(MsgKind::Init, 0, x)));
    };
    for (std::size_t k = 0; k < correct_.size(); ++k)
      if (correct_[k] == adopter) feed(adopter, opts[k][idx[k]]);
    forward_query(w, adopter, 1);
    for (std::size_t k = 0; k < correct_.size(); ++k)
      if (correct_[k] != adopter) feed(correct_[k], opts[k][idx[k]]);
  }

  // Hands a fresh query straight to its coordinator, modelling the sender
  // reaching the round first; the coordinator adopts that estimate.
  void forward_query(World& w, std::uint32_t from, std::uint32_t r) {
    const std::uint32_t c = coordinator_of(r, params_).index;
    if (c == from || c == byz_) return;
    auto it = w.bcast.find(bkey(MsgKind::Query, r, from));
    if (it != w.bcast.end()) route(w, c, it->second);
  }

  // ---- rounds -----------------------------------------------------------

  std::vector<std::uint32_t> active_of(const World& w) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t p : correct_)
      if (!w.eng[p]->state().decided) out.push_back(p);
    return out;
  }

  bool in_phase(const World& w, std::uint32_t p, std::uint32_t r, Phase ph) const {
    const auto& st = w.eng[p]->state();
    return !st.decided && st.round == r && st.phase == ph;
  }

  std::vector<CertifiedValue> query_pool(const World& w, std::uint32_t r) const {
    std::vector<CertifiedValue> pool;
    for (std::uint32_t x : correct_) {
      auto it = w.bcast.find(bkey(MsgKind::Query, r, x));
      if (it == w.bcast.end()) continue;
      bool dup = false;
      for (const auto& cv : pool) dup = dup || cv.value == it->second.value;
      if (!dup) pool.push_back({it->second.value, it->second.certificate});
    }
    return pool;
  }

  void dfs_round(World w, std::uint32_t r) {
    if (done_) return;
    std::vector<std::uint32_t> active = active_of(w);
    if (active.empty()) {
      leaf(std::move(w));
      return;
    }
    if (r > opt_.max_rounds) {
      flush_decs(w);
      leaf(std::move(w));
      return;
    }

    const std::uint32_t c = coordinator_of(r, params_).index;

    // Query dissemination is choice-free: adoption was pinned when the
    // adopter's query was forwarded, and every other delivery only makes
    // responses available.
    ++w.clock;
    for (std::uint32_t p : active)
      for (std::uint32_t x : correct_) {
        auto it = w.bcast.find(bkey(MsgKind::Query, r, x));
        if (it != w.bcast.end()) route(w, p, it->second);
      }
    std::vector<CertifiedValue> pool = query_pool(w, r);

    std::vector<std::uint32_t> armed;
    std::vector<std::vector<ArmChoice>> arm_opts;
    for (std::uint32_t p : active) {
      if (!in_phase(w, p, r, Phase::Phase1)) continue;
      armed.push_back(p);
      arm_opts.push_back(arm_options(w, r, p, c, pool));
    }
    odometer(arm_opts, [&](const std::vector<std::size_t>& idx) {
      World w2 = w;
      ++w2.clock;
      for (std::size_t k = 0; k < armed.size(); ++k)
        apply_arm(w2, r, armed[k], c, arm_opts[k][idx[k]], pool);
      dfs_filter(std::move(w2), r, MsgKind::Relay, pool);
    });
  }

  std::vector<ArmChoice> arm_options(const World& w, std::uint32_t r, std::uint32_t p,
                                     std::uint32_t c, const std::vector<CertifiedValue>& pool) {
    std::vector<ArmChoice> opts;
    if (c == byz_ && cbv_) {
      for (std::size_t i = 0; i < pool.size(); ++i) {
        int pick = static_cast<int>((p + i) % pool.size());
        const auto& cv = pool[pick];
        if (!cv.cert) continue;
        if (validate_estimate_proof(*cv.cert, cv.value, r, pid(byz_), params_, auth_, opt_.muts)
                .ok)
          opts.push_back({false, false, pick});
      }
    } else if (c != byz_ && w.ucast.count(ukey(MsgKind::Response, r, c, p))) {
      opts.push_back({false, false, -1});
    }
    std::uint32_t responders = 0;
    for (std::uint32_t x : correct_)
      if (x != c && w.ucast.count(ukey(MsgKind::Response, r, x, p))) ++responders;
    if (cbv_ && byz_ != c) ++responders;  // it can always sign a plain response
    if (responders >= params_.quorum()) opts.push_back({false, true, -1});
    if (opts.empty()) opts.push_back({true, false, -1});
    return opts;
  }

  void apply_arm(World& w, std::uint32_t r, std::uint32_t p, std::uint32_t c, const ArmChoice& arm,
                 const std::vector<CertifiedValue>& pool) {
    if (arm.stall) return;
    if (!arm.timeout) {
      if (arm.pool_pick >= 0) {
        const auto& cv = pool[arm.pool_pick];
        SignedMessage resp = Signer(pid(byz_), &auth_).make(MsgKind::Response, r, cv.value, cv.cert);
        rec_send(w, byz_, p, resp);
        route(w, p, resp);
      } else {
        route(w, p, w.ucast.at(ukey(MsgKind::Response, r, c, p)));
      }
      return;
    }
    w.trace.push_back({w.clock, TraceKind::TimerFire, p, c, r, "-", std::nullopt, std::nullopt});
    capture(w, p, w.eng[p]->step(TimerExpiryEvent{w.timer[p]}));
    for (std::uint32_t x : correct_) {
      if (!in_phase(w, p, r, Phase::Phase1)) return;
      if (x == c) continue;
      auto it = w.ucast.find(ukey(MsgKind::Response, r, x, p));
      if (it != w.ucast.end()) route(w, p, it->second);
    }
    if (in_phase(w, p, r, Phase::Phase1) && cbv_ && byz_ != c) {
      SignedMessage resp =
          Signer(pid(byz_), &auth_).make(MsgKind::Response, r, sc_.values[byz_], nullptr);
      rec_send(w, byz_, p, resp);
      route(w, p, resp);
    }
  }

  // ---- filter phases ----------------------------------------------------

  // Messages the faulty process can get past the daemons in this phase.
  std::vector<SignedMessage> byz_phase_msgs(const World& w, std::uint32_t r, MsgKind kind,
                                            const std::vector<CertifiedValue>& pool) {
    std::vector<SignedMessage> out;
    if (!cbv_) return out;
    Signer signer(pid(byz_), &auth_);
    if (kind == MsgKind::Relay) {
      // A non-bottom relay quotes the coordinator's own response, so this
      // only works in rounds the faulty process coordinates.
      if (coordinator_of(r, params_).index != byz_) return out;
      for (const auto& cv : pool) {
        if (!cv.cert) continue;
        SignedMessage resp = signer.make(MsgKind::Response, r, cv.value, cv.cert);
        CertPtr cert = build_certificate(CertKind::CoordResponse, {stripped(resp)}, cv.cert);
        SignedMessage relay = signer.make(MsgKind::Relay, r, cv.value, cert);
        CertContext cc{MsgKind::Relay, r, pid(byz_), cv.value};
        if (validate_certificate(*cert, cc, params_, auth_, opt_.muts).ok) out.push_back(relay);
      }
      return out;
    }
    // First-filter forgeries: its own relay vote plus enough correct relays
    // that do not contradict the value.
    for (const auto& cv : pool) {
      SignedMessage own = signer.make(MsgKind::Relay, r, cv.value, nullptr);
      std::vector<SignedMessage> evidence{stripped(own)};
      for (std::uint32_t x : correct_) {
        if (evidence.size() >= params_.quorum()) break;
        auto it = w.bcast.find(bkey(MsgKind::Relay, r, x));
        if (it == w.bcast.end()) continue;
        if (it->second.value.is_bottom() || it->second.value == cv.value)
          evidence.push_back(stripped(it->second));
      }
      if (evidence.size() < params_.quorum()) continue;
      CertPtr cert = build_certificate(CertKind::RelayQuorum, std::move(evidence));
      SignedMessage msg = signer.make(MsgKind::Filt1, r, cv.value, cert);
      CertContext cc{MsgKind::Filt1, r, pid(byz_), cv.value};
      if (validate_certificate(*cert, cc, params_, auth_, opt_.muts).ok) out.push_back(msg);
    }
    return out;
  }

  std::vector<CollectOption> phase_options(const World& w, std::uint32_t r, MsgKind kind,
                                           std::uint32_t p, std::size_t byz_count) {
    std::vector<std::uint32_t> avail;
    for (std::uint32_t x : correct_)
      if (x != p && w.bcast.count(bkey(kind, r, x))) avail.push_back(x);
    const std::uint32_t need = params_.quorum() - 1;
    std::vector<CollectOption> opts;
    for (std::size_t i = 0; i < byz_count; ++i) {
      int pick = static_cast<int>((p + i) % byz_count);
      if (need == 0) {
        opts.push_back({{}, pick, false});
        continue;
      }
      subsets_of(avail, need - 1,
                 [&](const std::vector<std::uint32_t>& s) { opts.push_back({s, pick, false}); });
    }
    subsets_of(avail, need,
               [&](const std::vector<std::uint32_t>& s) { opts.push_back({s, -1, false}); });
    if (opts.empty()) opts.push_back({{}, -1, true});
    return opts;
  }

  void apply_collect(World& w, std::uint32_t r, MsgKind kind, std::uint32_t p,
                     const CollectOption& opt, const std::vector<SignedMessage>& byz_msgs) {
    if (opt.stall) return;
    if (opt.byz_pick >= 0) {
      const SignedMessage& m = byz_msgs[opt.byz_pick];
      rec_send(w, byz_, p, m);
      route(w, p, m);
    }
    for (std::uint32_t x : opt.senders) route(w, p, w.bcast.at(bkey(kind, r, x)));
  }

  void dfs_filter(World w, std::uint32_t r, MsgKind kind, std::vector<CertifiedValue> pool) {
    if (done_) return;
    const Phase ph = kind == MsgKind::Relay ? Phase::Phase2 : Phase::Phase3;
    std::vector<SignedMessage> byz_msgs = byz_phase_msgs(w, r, kind, pool);
    std::vector<std::uint32_t> who;
    std::vector<std::vector<CollectOption>> opts;
    for (std::uint32_t p : correct_) {
      if (!in_phase(w, p, r, ph)) continue;
      who.push_back(p);
      opts.push_back(phase_options(w, r, kind, p, byz_msgs.size()));
    }
    odometer(opts, [&](const std::vector<std::size_t>& idx) {
      World w2 = w;
      ++w2.clock;
      for (std::size_t k = 0; k < who.size(); ++k)
        apply_collect(w2, r, kind, who[k], opts[k][idx[k]], byz_msgs);
      if (kind == MsgKind::Relay) {
        dfs_filter(std::move(w2), r, MsgKind::Filt1, pool);
      } else {
        if (prune_violation(w2)) return;
        dfs_phase4(std::move(w2), r);
      }
    });
  }

  void dfs_phase4(World w, std::uint32_t r) {
    if (done_) return;
    std::vector<std::uint32_t> who;
    std::vector<std::vector<CollectOption>> opts;
    for (std::uint32_t p : correct_) {
      if (!in_phase(w, p, r, Phase::Phase4)) continue;
      who.push_back(p);
      opts.push_back(phase_options(w, r, MsgKind::Filt2, p, 0));
    }
    std::vector<std::uint32_t> adopters = who;
    if (adopters.empty() || r + 1 > opt_.max_rounds) adopters = {0};
    for (std::uint32_t adopter : adopters) {
      odometer(opts, [&](const std::vector<std::size_t>& idx) {
        World w2 = w;
        ++w2.clock;
        for (std::size_t k = 0; k < who.size(); ++k)
          if (who[k] == adopter) {
            apply_collect(w2, r, MsgKind::Filt2, adopter, opts[k][idx[k]], {});
            forward_query(w2, adopter, r + 1);
          }
        for (std::size_t k = 0; k < who.size(); ++k)
          if (who[k] != adopter) apply_collect(w2, r, MsgKind::Filt2, who[k], opts[k][idx[k]], {});
        if (prune_violation(w2)) return;
        branch_decs(std::move(w2), r);
      });
      if (done_) break;
    }
  }

  void branch_decs(World w, std::uint32_t r) {
    std::vector<std::uint32_t> undecided = active_of(w);
    if (w.decs.empty() || undecided.empty()) {
      dfs_round(std::move(w), r + 1);
      return;
    }
    std::vector<std::vector<int>> opts(undecided.size(), {0, 1});
    odometer(opts, [&](const std::vector<std::size_t>& idx) {
      World w2 = w;
      ++w2.clock;
      for (std::size_t k = 0; k < undecided.size(); ++k) {
        if (idx[k] == 0) continue;
        const auto snapshot = w2.decs;
        for (const auto& d : snapshot) route(w2, undecided[k], d);
      }
      dfs_round(std::move(w2), r + 1);
    });
  }

  // ---- leaves -----------------------------------------------------------

  void flush_decs(World& w) {
    ++w.clock;
    for (int pass = 0; pass < 2; ++pass)
      for (std::uint32_t p : correct_) {
        if (w.eng[p]->state().decided) continue;
        const auto snapshot = w.decs;
        for (const auto& d : snapshot) route(w, p, d);
      }
  }

  std::vector<Verdict> safety_verdicts(const std::vector<TraceRecord>& trace) const {
    return {check_agreement(trace, ctx_), check_unique_certified(trace, ctx_),
            check_validity(trace, ctx_), check_round_handoff(trace, ctx_),
            check_wire_integrity(trace, ctx_)};
  }

  bool prune_violation(const World& w) {
    Verdict a = check_agreement(w.trace, ctx_);
    Verdict u = check_unique_certified(w.trace, ctx_);
    if (a.pass && u.pass) return false;
    register_leaf(w, {a, u}, true);
    return true;
  }

  void register_leaf(const World& w, std::vector<Verdict> verdicts, bool violated) {
    ++res_.schedules;
    if (violated) {
      ++res_.violations;
      if (res_.violation_trace.empty()) {
        res_.violation_trace = w.trace;
        res_.violation_verdicts = std::move(verdicts);
      }
      if (opt_.stop_on_violation) done_ = true;
    }
    if (opt_.collect_signatures)
      res_.signatures.insert(behavior_signature(w.decisions, w.decide_round, correct_set_));
    if (res_.schedules >= opt_.max_schedules && !done_) {
      res_.budget_exceeded = true;
      done_ = true;
    }
  }

  void leaf(World w) {
    std::vector<Verdict> verdicts = safety_verdicts(w.trace);
    bool violated = false;
    for (const auto& v : verdicts) violated = violated || !v.pass;
    register_leaf(w, std::move(verdicts), violated);
  }

  const Scenario& sc_;
  ExploreOptions opt_;
  SystemParams params_;
  SimAuthenticator auth_;
  CheckContext ctx_;
  std::uint32_t byz_ = 0;
  bool cbv_ = false;
  std::vector<std::uint32_t> correct_;
  std::set<std::uint32_t> correct_set_;
  ExploreReport res_;
};

}  // namespace

ExploreReport explore_exhaustive(const Scenario& sc, const ExploreOptions& opt) {
  return Explorer(sc, opt).run();
}

}  // namespace bwcons
