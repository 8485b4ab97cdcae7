#include "doctest.h"

#include <deque>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bwcons/authenticator.hpp"
#include "bwcons/engine.hpp"
#include "bwcons/types.hpp"

using namespace bwcons;

namespace {

const SimAuthenticator kAuth;
const SystemParams kP4(4, 1);

Value val(const char* s) { return Value::of(s); }

struct Cluster {
  std::vector<std::unique_ptr<Engine>> eng;  // index 0 unused

  explicit Cluster(std::uint32_t n = 4) {
    eng.resize(n + 1);
    for (std::uint32_t i = 1; i <= n; ++i)
      eng[i] = std::make_unique<Engine>(pid(i), SystemParams(n, 1), &kAuth);
  }

  Engine& at(std::uint32_t i) { return *eng[i]; }
};

std::vector<SendAction> sends(const std::vector<Action>& actions) {
  std::vector<SendAction> out;
  for (const auto& a : actions)
    if (const auto* s = std::get_if<SendAction>(&a)) out.push_back(*s);
  return out;
}

// The broadcast payload (identical across recipients).
SignedMessage first_message(const std::vector<Action>& actions) {
  auto ss = sends(actions);
  REQUIRE(!ss.empty());
  return ss.front().message;
}

SignedMessage start(Cluster& c, std::uint32_t i, const char* v) {
  return first_message(c.at(i).step(StartEvent{val(v)}));
}

std::vector<Action> deliver(Cluster& c, std::uint32_t to, const SignedMessage& m) {
  return c.at(to).step(DeliverEvent{m});
}

std::optional<SetTimerAction> timer_of(const std::vector<Action>& actions) {
  for (const auto& a : actions)
    if (const auto* t = std::get_if<SetTimerAction>(&a)) return *t;
  return std::nullopt;
}

bool has_disable(const std::vector<Action>& actions) {
  for (const auto& a : actions)
    if (std::get_if<DisableTimerAction>(&a)) return true;
  return false;
}

SignedMessage plain_response(std::uint32_t from, const char* v) {
  return Signer(pid(from), &kAuth).make(MsgKind::Response, 1, val(v), nullptr);
}

}  // namespace

TEST_CASE("proposal exchange adopts the super-minority value") {
  Cluster c;
  SignedMessage i1 = start(c, 1, "a");
  SignedMessage i2 = start(c, 2, "a");
  SignedMessage i3 = start(c, 3, "b");
  start(c, 4, "b");

  // p4 collects {a, a, b}: "a" reaches n-2t = 2 and replaces its own "b".
  deliver(c, 4, i1);
  auto acts = deliver(c, 4, i2);
  CHECK(sends(acts).empty());  // two proposals are not yet a quorum
  acts = deliver(c, 4, i3);

  REQUIRE(c.at(4).state().round == 1);
  SignedMessage q = first_message(acts);
  CHECK(q.kind == MsgKind::Query);
  CHECK(q.value == val("a"));
  REQUIRE(q.certificate != nullptr);
  CHECK(q.certificate->kind == CertKind::InitQuorum);

  // a timer guards the round-1 coordinator, initial window 1
  auto t = timer_of(acts);
  REQUIRE(t.has_value());
  CHECK(t->duration == 1);
  CHECK(t->about == pid(1));
}

TEST_CASE("own proposal stands when no value reaches the threshold") {
  Cluster c;
  SignedMessage i1 = start(c, 1, "a");
  SignedMessage i2 = start(c, 2, "b");
  SignedMessage i3 = start(c, 3, "c");
  start(c, 4, "d");

  deliver(c, 4, i1);
  deliver(c, 4, i2);
  auto acts = deliver(c, 4, i3);
  SignedMessage q = first_message(acts);
  CHECK(q.value == val("d"));
}

TEST_CASE("coordinator answers every query with the first adopted estimate") {
  Cluster c;
  SignedMessage i1 = start(c, 1, "a");
  SignedMessage i2 = start(c, 2, "a");
  SignedMessage i3 = start(c, 3, "b");
  SignedMessage i4 = start(c, 4, "b");

  // p1 resolves to "a", p3 resolves to "b"
  deliver(c, 1, i1);
  deliver(c, 1, i2);
  SignedMessage q1 = first_message(deliver(c, 1, i3));
  CHECK(q1.value == val("a"));

  deliver(c, 3, i3);
  deliver(c, 3, i4);
  SignedMessage q3 = first_message(deliver(c, 3, i2));
  CHECK(q3.value == val("b"));

  // p3's query reaches the coordinator first and pins the round's estimate
  auto resp3 = sends(deliver(c, 1, q3));
  REQUIRE(resp3.size() == 1);
  CHECK(resp3[0].to == pid(3));
  CHECK(resp3[0].message.kind == MsgKind::Response);
  CHECK(resp3[0].message.value == val("b"));

  // p1's own query arrives second and gets the same answer
  auto resp1 = sends(deliver(c, 1, q1));
  REQUIRE(resp1.size() == 1);
  CHECK(resp1[0].to == pid(1));
  CHECK(resp1[0].message.value == val("b"));

  // the coordinator's own answer completes its phase 1 without a timeout
  auto acts = deliver(c, 1, resp1[0].message);
  auto relays = sends(acts);
  REQUIRE(relays.size() == 4);
  CHECK(relays[0].message.kind == MsgKind::Relay);
  CHECK(relays[0].message.value == val("b"));
  CHECK(has_disable(acts));
  CHECK(c.at(1).state().delta[1] == 1);  // window untouched
}

TEST_CASE("timeout arm relays bottom and widens the coordinator's window") {
  Cluster c;
  SignedMessage i1 = start(c, 1, "a");
  SignedMessage i2 = start(c, 2, "a");
  SignedMessage i3 = start(c, 3, "a");
  start(c, 4, "a");

  deliver(c, 2, i1);
  deliver(c, 2, i2);
  auto begun = deliver(c, 2, i3);
  auto t = timer_of(begun);
  REQUIRE(t.has_value());

  c.at(2).step(TimerExpiryEvent{t->handle});
  deliver(c, 2, plain_response(2, "a"));
  deliver(c, 2, plain_response(3, "a"));
  auto acts = deliver(c, 2, plain_response(4, "a"));

  auto relays = sends(acts);
  REQUIRE(relays.size() == 4);
  CHECK(relays[0].message.kind == MsgKind::Relay);
  CHECK(relays[0].message.value.is_bottom());
  REQUIRE(relays[0].message.certificate != nullptr);
  CHECK(relays[0].message.certificate->kind == CertKind::ResponseQuorum);
  CHECK_FALSE(has_disable(acts));
  CHECK(c.at(2).state().delta[1] == 2);
  CHECK(c.at(2).state().phase == Phase::Phase2);
}

TEST_CASE("coordinator response wins even after the timer fired") {
  Cluster c;
  SignedMessage i1 = start(c, 1, "a");
  SignedMessage i2 = start(c, 2, "a");
  SignedMessage i3 = start(c, 3, "a");
  start(c, 4, "a");

  deliver(c, 2, i1);
  deliver(c, 2, i2);
  auto begun = deliver(c, 2, i3);
  auto t = timer_of(begun);
  REQUIRE(t.has_value());

  c.at(2).step(TimerExpiryEvent{t->handle});
  deliver(c, 2, plain_response(3, "a"));
  deliver(c, 2, plain_response(4, "a"));

  // the coordinator's certified answer lands before a third response
  auto initq = build_certificate(
      CertKind::InitQuorum, std::vector<SignedMessage>{i1, i2, i3});
  SignedMessage coord = Signer(pid(1), &kAuth).make(MsgKind::Response, 1, val("a"), initq);
  auto acts = deliver(c, 2, coord);

  auto relays = sends(acts);
  REQUIRE(relays.size() == 4);
  CHECK(relays[0].message.kind == MsgKind::Relay);
  CHECK(relays[0].message.value == val("a"));
  CHECK(relays[0].message.certificate->kind == CertKind::CoordResponse);
  // the window still widens: the timer did fire this round
  CHECK(c.at(2).state().delta[1] == 2);
  CHECK_FALSE(has_disable(acts));
}

TEST_CASE("a lockstep cluster decides its common proposal in round 1") {
  Cluster c;
  struct Pending {
    std::uint32_t to;
    SignedMessage m;
  };
  std::deque<Pending> wire;
  auto push = [&](const std::vector<Action>& acts) {
    for (const auto& a : acts)
      if (const auto* s = std::get_if<SendAction>(&a)) wire.push_back({s->to.index, s->message});
  };

  for (std::uint32_t i = 1; i <= 4; ++i) push(c.at(i).step(StartEvent{val("a")}));

  std::map<std::uint32_t, Value> decided;
  std::map<std::uint32_t, std::uint32_t> decided_round;
  std::size_t guard = 0;
  while (!wire.empty() && guard++ < 10000) {
    Pending p = wire.front();
    wire.pop_front();
    auto acts = c.at(p.to).step(DeliverEvent{p.m});
    push(acts);
    for (const auto& a : acts)
      if (const auto* d = std::get_if<DecideAction>(&a)) {
        decided[p.to] = d->value;
        decided_round[p.to] = d->round;
      }
  }

  REQUIRE(decided.size() == 4);
  for (const auto& [id, v] : decided) {
    CAPTURE(id);
    CHECK(v == val("a"));
    CHECK(decided_round[id] == 1);
  }
  // no timer ever needed to fire: every exit went through the coordinator arm
  for (std::uint32_t i = 1; i <= 4; ++i) CHECK(c.at(i).state().delta[1] == 1);
}

TEST_CASE("a decision notice converts a lagging process immediately") {
  Cluster c;
  SignedMessage i1 = start(c, 1, "a");
  SignedMessage i2 = start(c, 2, "a");
  SignedMessage i3 = start(c, 3, "a");
  start(c, 4, "a");
  deliver(c, 4, i1);
  deliver(c, 4, i2);
  deliver(c, 4, i3);
  REQUIRE(c.at(4).state().phase == Phase::Phase1);

  std::vector<SignedMessage> filt2s;
  for (std::uint32_t i = 1; i <= 3; ++i)
    filt2s.push_back(Signer(pid(i), &kAuth).make(MsgKind::Filt2, 1, val("a"), nullptr));
  auto decq = build_certificate(CertKind::DecQuorum, filt2s);
  SignedMessage dec = Signer(pid(1), &kAuth).make(MsgKind::Dec, 1, val("a"), decq);

  auto acts = deliver(c, 4, dec);
  auto rebroadcast = sends(acts);
  REQUIRE(rebroadcast.size() == 4);
  for (const auto& s : rebroadcast) {
    CHECK(s.message.kind == MsgKind::Dec);
    CHECK(s.message.sender == pid(4));  // re-signed, not forwarded verbatim
    CHECK(s.message.value == val("a"));
  }
  CHECK(c.at(4).state().decided == val("a"));
  CHECK(c.at(4).state().phase == Phase::Decided);

  // a second notice changes nothing
  SignedMessage dec2 = Signer(pid(2), &kAuth).make(MsgKind::Dec, 1, val("a"), decq);
  CHECK(sends(deliver(c, 4, dec2)).empty());
}

TEST_CASE("identical event sequences produce identical behavior") {
  auto run = [] {
    Cluster c;
    std::deque<std::pair<std::uint32_t, SignedMessage>> wire;
    auto push = [&](const std::vector<Action>& acts) {
      for (const auto& a : acts)
        if (const auto* s = std::get_if<SendAction>(&a)) wire.push_back({s->to.index, s->message});
    };
    const char* vals[] = {"", "a", "a", "b", "b"};
    for (std::uint32_t i = 1; i <= 4; ++i) push(c.at(i).step(StartEvent{val(vals[i])}));
    std::string log;
    std::size_t guard = 0;
    while (!wire.empty() && guard++ < 10000) {
      auto [to, m] = wire.front();
      wire.pop_front();
      log += std::to_string(to) + ":" + hex16(m.digest()) + ";";
      push(c.at(to).step(DeliverEvent{m}));
    }
    return log;
  };
  CHECK(run() == run());
}
