#include "bwcons/checkers.hpp"

#include <algorithm>
#include <sstream>

#include "bwcons/message.hpp"

namespace bwcons {

std::string to_line(const Verdict& v) {
  std::ostringstream out;
  out << "check\t" << v.property << '\t' << (v.pass ? "pass" : "fail") << '\t';
  if (v.witness)
    out << *v.witness;
  else
    out << '-';
  out << '\t' << v.explanation;
  return out.str();
}

CheckContext CheckContext::from_scenario(const Scenario& sc) {
  CheckContext ctx;
  for (const auto& [id, strat] : sc.byzantine) {
    (void)strat;
    ctx.byzantine.insert(id);
  }
  for (std::uint32_t i = 1; i <= sc.n; ++i) {
    ctx.processes.insert(i);
    ctx.proposals[i] = sc.values[i];
  }
  ctx.has_bw = sc.bw.has_value();
  return ctx;
}

namespace {

const char* kFilt2 = "filt2";
const char* kQuery = "query";

std::string pname(std::uint32_t id) { return "p" + std::to_string(id); }

// First Decide per correct process; the agreement check separately flags
// re-decisions that change the value.
std::map<std::uint32_t, std::pair<std::uint64_t, std::size_t>> correct_decisions(
    const std::vector<TraceRecord>& trace, const CheckContext& ctx) {
  std::map<std::uint32_t, std::pair<std::uint64_t, std::size_t>> out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    if (r.kind != TraceKind::Decide || !ctx.correct(r.actor)) continue;
    if (!r.value_digest) continue;
    out.emplace(r.actor, std::make_pair(*r.value_digest, i + 1));
  }
  return out;
}

}  // namespace

Verdict check_agreement(const std::vector<TraceRecord>& trace, const CheckContext& ctx) {
  Verdict v{"agreement", true, true, std::nullopt, "no correct process decided"};
  std::optional<std::uint64_t> value;
  std::map<std::uint32_t, std::uint64_t> per_actor;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    if (r.kind != TraceKind::Decide || !ctx.correct(r.actor)) continue;
    if (!r.value_digest) {
      return {"agreement", false, true, i + 1, pname(r.actor) + " decided without a value"};
    }
    if (auto it = per_actor.find(r.actor); it != per_actor.end() && it->second != *r.value_digest)
      return {"agreement", false, true, i + 1, pname(r.actor) + " changed its decision"};
    per_actor[r.actor] = *r.value_digest;
    if (!value) {
      value = r.value_digest;
      v.explanation = "all correct decisions carry value " + hex16(*value);
    } else if (*value != *r.value_digest) {
      return {"agreement", false, true, i + 1,
              pname(r.actor) + " decided " + hex16(*r.value_digest) + " but " + hex16(*value) +
                  " was decided earlier"};
    }
  }
  return v;
}

Verdict check_validity(const std::vector<TraceRecord>& trace, const CheckContext& ctx) {
  std::optional<Value> common;
  for (const auto& [id, val] : ctx.proposals) {
    if (!ctx.correct(id)) continue;
    if (!common)
      common = val;
    else if (!(*common == val))
      return {"validity", true, false, std::nullopt, "correct proposals differ, nothing implied"};
  }
  if (!common)
    return {"validity", true, false, std::nullopt, "no proposals known, nothing implied"};
  std::uint64_t want = digest_of(*common);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    if (r.kind != TraceKind::Decide || !ctx.correct(r.actor)) continue;
    if (!r.value_digest || *r.value_digest != want)
      return {"validity", false, true, i + 1,
              pname(r.actor) + " decided something other than the common proposal"};
  }
  return {"validity", true, true, std::nullopt, "every decision equals the common proposal"};
}

Verdict check_termination(const std::vector<TraceRecord>& trace, const CheckContext& ctx) {
  if (!ctx.has_bw)
    return {"termination", true, false, std::nullopt,
            "no privileged-link assignment, termination not guaranteed"};
  auto decided = correct_decisions(trace, ctx);
  std::set<std::uint32_t> expected = ctx.processes;
  if (expected.empty())
    for (const auto& r : trace) {
      if (r.actor) expected.insert(r.actor);
      if (r.peer) expected.insert(r.peer);
    }
  std::vector<std::uint32_t> missing;
  for (std::uint32_t id : expected)
    if (ctx.correct(id) && !decided.count(id)) missing.push_back(id);
  if (missing.empty())
    return {"termination", true, true, std::nullopt, "every correct process decided"};
  std::string who;
  for (auto id : missing) who += (who.empty() ? "" : ", ") + pname(id);
  return {"termination", false, true, std::nullopt, who + " never decided"};
}

Verdict check_unique_certified(const std::vector<TraceRecord>& trace, const CheckContext& ctx) {
  // Multiset of (receiver, message digest) pairs later struck by a discard;
  // what remains was accepted by the receiver's daemon.
  std::map<std::pair<std::uint32_t, std::uint64_t>, std::uint32_t> struck;
  for (const auto& r : trace)
    if (r.kind == TraceKind::Discard && r.msg_digest) struck[{r.actor, *r.msg_digest}]++;

  std::map<std::uint32_t, std::pair<std::uint64_t, std::size_t>> seen;  // round -> first value
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    if (r.phase != kFilt2 || !r.round || !r.value_digest) continue;
    bool counts = false;
    if (r.kind == TraceKind::Send && ctx.correct(r.actor)) counts = true;
    if (r.kind == TraceKind::Deliver && ctx.correct(r.actor) && r.msg_digest) {
      auto it = struck.find({r.actor, *r.msg_digest});
      if (it != struck.end() && it->second > 0)
        --it->second;  // this delivery was rejected, skip it
      else
        counts = true;
    }
    if (!counts) continue;
    auto [it, fresh] = seen.emplace(*r.round, std::make_pair(*r.value_digest, i + 1));
    if (!fresh && it->second.first != *r.value_digest)
      return {"unique-certified", false, true, i + 1,
              "round " + std::to_string(*r.round) + " carries both " +
                  hex16(it->second.first) + " and " + hex16(*r.value_digest) +
                  " on second-filter messages"};
  }
  return {"unique-certified", true, true, std::nullopt,
          "at most one value per round survived the filters"};
}

Verdict check_round_handoff(const std::vector<TraceRecord>& trace, const CheckContext& ctx) {
  std::map<std::uint32_t, std::uint64_t> decided_at;  // round -> value digest
  for (const auto& r : trace)
    if (r.kind == TraceKind::Decide && ctx.correct(r.actor) && r.round && r.value_digest)
      decided_at.emplace(*r.round, *r.value_digest);
  bool any = false;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    if (r.kind != TraceKind::Send || r.phase != kQuery || !ctx.correct(r.actor)) continue;
    if (!r.round || *r.round < 2) continue;
    auto it = decided_at.find(*r.round - 1);
    if (it == decided_at.end()) continue;
    any = true;
    if (!r.value_digest || *r.value_digest != it->second)
      return {"round-handoff", false, true, i + 1,
              pname(r.actor) + " entered round " + std::to_string(*r.round) +
                  " without the value decided in round " + std::to_string(*r.round - 1)};
  }
  if (!any)
    return {"round-handoff", true, false, std::nullopt,
            "no round was entered past a decided one"};
  return {"round-handoff", true, true, std::nullopt,
          "every query past a decided round carried the decided value"};
}

Verdict check_wire_integrity(const std::vector<TraceRecord>& trace, const CheckContext& ctx) {
  (void)ctx;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>, std::uint32_t> in_flight;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    if (!r.msg_digest) continue;
    if (r.kind == TraceKind::Send) {
      in_flight[{r.actor, r.peer, *r.msg_digest}]++;
    } else if (r.kind == TraceKind::Deliver) {
      auto it = in_flight.find({r.peer, r.actor, *r.msg_digest});
      if (it == in_flight.end() || it->second == 0)
        return {"wire-integrity", false, true, i + 1,
                pname(r.actor) + " received a message " + pname(r.peer) + " never sent"};
      --it->second;
    }
  }
  return {"wire-integrity", true, true, std::nullopt,
          "every delivery matches exactly one earlier send"};
}

std::vector<Verdict> run_all_checkers(const std::vector<TraceRecord>& trace,
                                      const CheckContext& ctx) {
  return {
      check_agreement(trace, ctx),       check_validity(trace, ctx),
      check_termination(trace, ctx),     check_unique_certified(trace, ctx),
      check_round_handoff(trace, ctx),   check_wire_integrity(trace, ctx),
  };
}

std::uint64_t ComplexityReport::sends_in(std::uint32_t round, const std::string& kind) const {
  auto it = sends_by_round_kind.find({round, kind});
  return it == sends_by_round_kind.end() ? 0 : it->second;
}

ComplexityReport measure_complexity(const std::vector<TraceRecord>& trace,
                                    const CheckContext& ctx) {
  ComplexityReport rep;
  for (const auto& r : trace) {
    if (r.kind == TraceKind::Send) {
      rep.total_sends++;
      rep.sends_by_kind[r.phase]++;
      rep.sends_by_round_kind[{r.round.value_or(0), r.phase}]++;
    } else if (r.kind == TraceKind::Decide && ctx.correct(r.actor) && r.round) {
      rep.any_decided = true;
      rep.last_decide_round = std::max(rep.last_decide_round, *r.round);
    }
  }
  if (rep.any_decided) rep.steps = 1 + 5ull * rep.last_decide_round;
  return rep;
}

}  // namespace bwcons
