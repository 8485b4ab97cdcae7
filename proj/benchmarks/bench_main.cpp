#include <benchmark/benchmark.h>

#include <sstream>
#include <vector>

#include "bwcons/authenticator.hpp"
#include "bwcons/checkers.hpp"
#include "bwcons/harness.hpp"
#include "bwcons/netsim.hpp"
#include "bwcons/scenario.hpp"
#include "bwcons/trace_io.hpp"

using namespace bwcons;

namespace {

const SimAuthenticator kAuth;
const SystemParams kP4(4, 1);

std::vector<SignedMessage> phase_msgs(MsgKind kind, std::uint32_t round,
                                      const std::vector<Value>& values) {
  std::vector<SignedMessage> out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out.push_back(Signer(pid(static_cast<std::uint32_t>(i + 1)), &kAuth)
                      .make(kind, round, values[i], nullptr));
  return out;
}

// Estimate proof three rounds deep: an init quorum under two all-bottom keeps.
CertPtr deep_chain() {
  Value a = Value::of("a");
  Value bot = Value::bottom();
  auto initq = build_certificate(CertKind::InitQuorum, phase_msgs(MsgKind::Init, 0, {a, a, bot}));
  auto keep1 = build_certificate(CertKind::ChainedEstimate,
                                 phase_msgs(MsgKind::Filt2, 1, {bot, bot, bot}), initq);
  return build_certificate(CertKind::ChainedEstimate,
                           phase_msgs(MsgKind::Filt2, 2, {bot, bot, bot}), keep1);
}

Scenario favorable(std::uint64_t seed) {
  Scenario sc = parse_scenario(
      "[system]\nn = 4\nt = 1\n"
      "[values]\ndefault = a\n"
      "[links]\ndefault = timely(delta=1, tau=0)\n",
      "bench");
  sc.seed = seed;
  validate_scenario(sc);
  return sc;
}

void BM_ChainValidation(benchmark::State& state) {
  CertPtr chain = deep_chain();
  Value a = Value::of("a");
  for (auto _ : state) {
    auto check = validate_estimate_proof(*chain, a, 3, pid(3), kP4, kAuth);
    benchmark::DoNotOptimize(check.ok);
  }
}
BENCHMARK(BM_ChainValidation);

void BM_FavorableRound(benchmark::State& state) {
  Scenario sc = favorable(1);
  for (auto _ : state) {
    SimResult r = run_simulation(sc);
    benchmark::DoNotOptimize(r.decisions.size());
  }
}
BENCHMARK(BM_FavorableRound);

void BM_Checkers(benchmark::State& state) {
  Scenario sc = favorable(2);
  SimResult r = run_simulation(sc);
  auto ctx = CheckContext::from_scenario(sc);
  for (auto _ : state) {
    auto verdicts = run_all_checkers(r.trace, ctx);
    benchmark::DoNotOptimize(verdicts.size());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(r.trace.size()));
}
BENCHMARK(BM_Checkers);

void BM_TraceSerialize(benchmark::State& state) {
  Scenario sc = favorable(3);
  SimResult r = run_simulation(sc);
  for (auto _ : state) {
    std::ostringstream out;
    write_trace(out, r.trace);
    benchmark::DoNotOptimize(out.str().size());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(r.trace.size()));
}
BENCHMARK(BM_TraceSerialize);

}  // namespace

BENCHMARK_MAIN();
