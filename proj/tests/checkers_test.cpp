#include "doctest.h"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bwcons/checkers.hpp"
#include "bwcons/harness.hpp"
#include "bwcons/message.hpp"
#include "bwcons/netsim.hpp"
#include "bwcons/scenario.hpp"
#include "bwcons/trace_io.hpp"

using namespace bwcons;

namespace {

constexpr std::uint64_t kDigA = 0xaaaa'aaaa'aaaa'aaaaull;
constexpr std::uint64_t kDigB = 0xbbbb'bbbb'bbbb'bbbbull;

TraceRecord rec(std::uint64_t time, TraceKind kind, std::uint32_t actor, std::uint32_t peer,
                std::optional<std::uint32_t> round, std::string phase,
                std::optional<std::uint64_t> md, std::optional<std::uint64_t> vd) {
  TraceRecord r;
  r.time = time;
  r.kind = kind;
  r.actor = actor;
  r.peer = peer;
  r.round = round;
  r.phase = std::move(phase);
  r.msg_digest = md;
  r.value_digest = vd;
  return r;
}

TraceRecord decide(std::uint64_t t, std::uint32_t actor, std::uint32_t round, std::uint64_t vd) {
  return rec(t, TraceKind::Decide, actor, 0, round, "-", std::nullopt, vd);
}

CheckContext plain_ctx() {
  CheckContext ctx;
  ctx.processes = {1, 2, 3, 4};
  return ctx;
}

Verdict verdict_of(const std::vector<Verdict>& vs, const std::string& prop) {
  for (const auto& v : vs)
    if (v.property == prop) return v;
  FAIL("missing verdict for " << prop);
  return {};
}

// One all-timely run: everything lands in one tick, decision in round 1.
Scenario favorable(std::uint64_t seed, bool with_bw = false) {
  std::string text =
      "[system]\nn = 4\nt = 1\n"
      "[values]\ndefault = a\n"
      "[links]\ndefault = timely(delta=1, tau=0)\n";
  if (with_bw) text += "[bw]\npivot = p1\npreset = bisource\ndelta = 1\ntau = 0\n";
  Scenario sc = parse_scenario(text, "checkers-test");
  sc.seed = seed;
  validate_scenario(sc);
  return sc;
}

}  // namespace

TEST_CASE("a clean run satisfies every applicable property") {
  Scenario sc = favorable(1, true);
  SimResult r = run_simulation(sc);
  auto ctx = CheckContext::from_scenario(sc);
  auto vs = run_all_checkers(r.trace, ctx);
  REQUIRE(vs.size() == 6);
  for (const auto& v : vs) {
    CAPTURE(v.property);
    CAPTURE(v.explanation);
    CHECK(v.pass);
  }
  CHECK(verdict_of(vs, "agreement").applicable);
  CHECK(verdict_of(vs, "validity").applicable);
  CHECK(verdict_of(vs, "termination").applicable);  // bw assignment present
  CHECK(verdict_of(vs, "wire-integrity").applicable);
}

TEST_CASE("agreement flags conflicts, flips and valueless decisions") {
  auto ctx = plain_ctx();

  std::vector<TraceRecord> conflict = {decide(1, 2, 1, kDigA), decide(2, 3, 1, kDigB)};
  Verdict v = check_agreement(conflict, ctx);
  CHECK_FALSE(v.pass);
  CHECK(v.witness == 2);

  std::vector<TraceRecord> flip = {decide(1, 2, 1, kDigA), decide(2, 2, 2, kDigB)};
  v = check_agreement(flip, ctx);
  CHECK_FALSE(v.pass);
  CHECK(v.explanation == "p2 changed its decision");

  std::vector<TraceRecord> hollow = {decide(1, 2, 1, kDigA),
                                     rec(2, TraceKind::Decide, 3, 0, 1, "-", std::nullopt,
                                         std::nullopt)};
  CHECK_FALSE(check_agreement(hollow, ctx).pass);

  // byzantine decisions carry no weight
  ctx.byzantine = {3};
  CHECK(check_agreement(conflict, ctx).pass);
}

TEST_CASE("validity compares decisions against a common proposal") {
  auto ctx = plain_ctx();
  ctx.proposals = {{1, Value::of("a")}, {2, Value::of("a")},
                   {3, Value::of("a")}, {4, Value::of("a")}};
  std::uint64_t dig_a = digest_of(Value::of("a"));
  std::uint64_t dig_b = digest_of(Value::of("b"));

  std::vector<TraceRecord> good = {decide(1, 2, 1, dig_a)};
  Verdict v = check_validity(good, ctx);
  CHECK(v.pass);
  CHECK(v.applicable);

  std::vector<TraceRecord> bad = {decide(1, 2, 1, dig_b)};
  v = check_validity(bad, ctx);
  CHECK_FALSE(v.pass);
  CHECK(v.witness == 1);

  // disagreeing proposals say nothing
  ctx.proposals[3] = Value::of("b");
  v = check_validity(bad, ctx);
  CHECK(v.pass);
  CHECK_FALSE(v.applicable);

  ctx.proposals.clear();
  v = check_validity(bad, ctx);
  CHECK_FALSE(v.applicable);
}

TEST_CASE("termination is only a promise under a privileged assignment") {
  auto ctx = plain_ctx();
  std::vector<TraceRecord> partial = {decide(1, 1, 1, kDigA), decide(1, 2, 1, kDigA),
                                      decide(1, 3, 1, kDigA)};
  Verdict v = check_termination(partial, ctx);
  CHECK(v.pass);
  CHECK_FALSE(v.applicable);

  ctx.has_bw = true;
  v = check_termination(partial, ctx);
  CHECK_FALSE(v.pass);
  CHECK(v.explanation == "p4 never decided");

  ctx.byzantine = {4};
  CHECK(check_termination(partial, ctx).pass);
}

TEST_CASE("unique-certified catches a second value behind the filters") {
  auto ctx = plain_ctx();
  std::vector<TraceRecord> two = {
      rec(1, TraceKind::Send, 2, 1, 1, "filt2", 100, kDigA),
      rec(2, TraceKind::Send, 3, 1, 1, "filt2", 101, kDigB),
  };
  Verdict v = check_unique_certified(two, ctx);
  CHECK_FALSE(v.pass);
  CHECK(v.witness == 2);

  // the non-value never conflicts
  std::vector<TraceRecord> with_bottom = {
      rec(1, TraceKind::Send, 2, 1, 1, "filt2", 100, kDigA),
      rec(2, TraceKind::Send, 3, 1, 1, "filt2", 101, std::nullopt),
  };
  CHECK(check_unique_certified(with_bottom, ctx).pass);

  // different rounds never conflict
  std::vector<TraceRecord> two_rounds = {
      rec(1, TraceKind::Send, 2, 1, 1, "filt2", 100, kDigA),
      rec(2, TraceKind::Send, 3, 1, 2, "filt2", 101, kDigB),
  };
  CHECK(check_unique_certified(two_rounds, ctx).pass);

  // a byzantine-sent value counts once a correct daemon accepts it...
  ctx.byzantine = {3};
  std::vector<TraceRecord> accepted = {
      rec(1, TraceKind::Send, 2, 1, 1, "filt2", 100, kDigA),
      rec(2, TraceKind::Deliver, 4, 3, 1, "filt2", 101, kDigB),
  };
  CHECK_FALSE(check_unique_certified(accepted, ctx).pass);

  // ...but not if the daemon struck it down
  std::vector<TraceRecord> rejected = {
      rec(1, TraceKind::Send, 2, 1, 1, "filt2", 100, kDigA),
      rec(2, TraceKind::Deliver, 4, 3, 1, "filt2", 101, kDigB),
      rec(2, TraceKind::Discard, 4, 3, 1, "filt2", 101, kDigB),
  };
  CHECK(check_unique_certified(rejected, ctx).pass);
}

TEST_CASE("round handoff pins the query value after a decision") {
  auto ctx = plain_ctx();
  std::vector<TraceRecord> wrong = {
      decide(5, 2, 1, kDigA),
      rec(6, TraceKind::Send, 3, 1, 2, "query", 200, kDigB),
  };
  Verdict v = check_round_handoff(wrong, ctx);
  CHECK_FALSE(v.pass);
  CHECK(v.witness == 2);

  std::vector<TraceRecord> right = {
      decide(5, 2, 1, kDigA),
      rec(6, TraceKind::Send, 3, 1, 2, "query", 200, kDigA),
  };
  v = check_round_handoff(right, ctx);
  CHECK(v.pass);
  CHECK(v.applicable);
  CHECK(v.explanation == "every query past a decided round carried the decided value");

  std::vector<TraceRecord> nothing_after = {decide(5, 2, 1, kDigA)};
  v = check_round_handoff(nothing_after, ctx);
  CHECK(v.pass);
  CHECK_FALSE(v.applicable);
  CHECK(v.explanation == "no round was entered past a decided one");

  // byzantine queries prove nothing
  ctx.byzantine = {3};
  v = check_round_handoff(wrong, ctx);
  CHECK_FALSE(v.applicable);
}

TEST_CASE("wire integrity rejects forged and replayed deliveries") {
  auto ctx = plain_ctx();
  std::vector<TraceRecord> forged = {
      rec(1, TraceKind::Deliver, 2, 1, 1, "query", 300, kDigA),
  };
  Verdict v = check_wire_integrity(forged, ctx);
  CHECK_FALSE(v.pass);
  CHECK(v.witness == 1);

  std::vector<TraceRecord> replayed = {
      rec(1, TraceKind::Send, 1, 2, 1, "query", 300, kDigA),
      rec(2, TraceKind::Deliver, 2, 1, 1, "query", 300, kDigA),
      rec(3, TraceKind::Deliver, 2, 1, 1, "query", 300, kDigA),
  };
  v = check_wire_integrity(replayed, ctx);
  CHECK_FALSE(v.pass);
  CHECK(v.witness == 3);

  std::vector<TraceRecord> clean = {
      rec(1, TraceKind::Send, 1, 2, 1, "query", 300, kDigA),
      rec(2, TraceKind::Deliver, 2, 1, 1, "query", 300, kDigA),
  };
  CHECK(check_wire_integrity(clean, ctx).pass);
}

TEST_CASE("complexity counts rounds, steps and per-kind sends") {
  Scenario sc = favorable(1);
  SimResult r = run_simulation(sc);
  auto ctx = CheckContext::from_scenario(sc);
  ComplexityReport c = measure_complexity(r.trace, ctx);
  CHECK(c.any_decided);
  CHECK(c.last_decide_round == 1);
  CHECK(c.steps == 6);  // 1 proposal step + 5 phases of the single round
  CHECK(c.sends_in(0, "init") == 16);
  CHECK(c.sends_in(1, "query") == 16);
  CHECK(c.sends_in(1, "response") == 16);
  CHECK(c.sends_in(1, "dec") == 16);
  CHECK(c.sends_in(2, "query") == 0);
  CHECK(c.total_sends == 112);  // 7 kinds, 16 each
}

TEST_CASE("trace lines survive a byte-exact round trip") {
  Scenario sc = favorable(2);
  SimResult r = run_simulation(sc);
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    std::string line = to_line(r.trace[i]);
    TraceRecord back = parse_line(line, i + 1);
    CHECK(to_line(back) == line);
  }

  std::ostringstream out;
  write_trace(out, r.trace);
  std::istringstream in(out.str());
  auto again = read_trace(in);
  REQUIRE(again.size() == r.trace.size());
  std::ostringstream out2;
  write_trace(out2, again);
  CHECK(out2.str() == out.str());
}

TEST_CASE("malformed trace lines fail with their line number") {
  CHECK_THROWS_AS(parse_line("only\tfour\tfields\there", 7), TraceError);
  try {
    parse_line("1\tteleport\t1\t2\t1\tquery\t-\t-", 9);
    FAIL("bad kind accepted");
  } catch (const TraceError& e) {
    CHECK(e.line == 9);
  }
  CHECK_THROWS_AS(parse_line("x\tsend\t1\t2\t1\tquery\t-\t-", 1), TraceError);
  CHECK_THROWS_AS(parse_line("1\tsend\t1\t2\t1\tquery\tnothex!\t-", 1), TraceError);
}

TEST_CASE("saved traces re-check with and without their scenario") {
  Scenario sc = favorable(3, true);
  SimResult r = run_simulation(sc);

  auto with = verify_trace_records(r.trace, sc);
  for (const auto& v : with) CHECK(v.pass);
  CHECK(verdict_of(with, "termination").applicable);

  auto without = verify_trace_records(r.trace, std::nullopt);
  for (const auto& v : without) CHECK(v.pass);
  CHECK_FALSE(verdict_of(without, "validity").applicable);  // proposals unknown
  CHECK_FALSE(verdict_of(without, "termination").applicable);

  // corrupt one decision and both modes notice
  auto broken = r.trace;
  for (auto& rcd : broken)
    if (rcd.kind == TraceKind::Decide) {
      rcd.value_digest = *rcd.value_digest ^ 1;
      break;
    }
  CHECK_FALSE(verdict_of(verify_trace_records(broken, sc), "agreement").pass);
  CHECK_FALSE(verdict_of(verify_trace_records(broken, std::nullopt), "agreement").pass);
}
