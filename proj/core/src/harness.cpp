#include "bwcons/harness.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

#include "bwcons/adversary.hpp"
#include "bwcons/trace_io.hpp"

namespace bwcons {

bool RunReport::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

RunReport run_once(const Scenario& sc, std::uint64_t seed, const std::string& trace_path,
                   const MutationSet& muts) {
  Scenario run = sc;
  run.seed = seed;

  const auto t0 = std::chrono::steady_clock::now();
  SimResult sim = run_simulation(run, muts);
  CheckContext ctx = CheckContext::from_scenario(run);

  RunReport rep;
  rep.scenario_id = run.id;
  rep.seed = seed;
  rep.budget_exhausted = sim.budget_exhausted;
  rep.verdicts = run_all_checkers(sim.trace, ctx);
  rep.complexity = measure_complexity(sim.trace, ctx);
  for (const auto& [id, v] : sim.decisions) {
    if (!ctx.correct(id)) continue;
    rep.decisions[id] = v.is_bottom() ? std::string("-") : v.bytes();
    auto it = sim.decide_round.find(id);
    if (it != sim.decide_round.end()) rep.rounds[id] = it->second;
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();

  if (!trace_path.empty()) save_trace(trace_path, sim.trace);
  return rep;
}

namespace {

std::string decided_value(const RunReport& rep) {
  if (rep.decisions.empty()) return "-";
  const std::string& first = rep.decisions.begin()->second;
  for (const auto& [id, v] : rep.decisions)
    if (v != first) return "mixed";
  return first;
}

}  // namespace

void print_report(std::ostream& out, const RunReport& rep, bool with_checks) {
  std::ostringstream line;
  line << "run\tscenario=" << rep.scenario_id << "\tseed=" << rep.seed << "\tdecided="
       << rep.decisions.size() << "\tvalue=" << decided_value(rep) << "\trounds=";
  if (rep.complexity.any_decided)
    line << rep.complexity.last_decide_round;
  else
    line << "-";
  line << "\tsteps=" << rep.complexity.steps << "\tsends=" << rep.complexity.total_sends
       << "\tresult=" << (rep.all_pass() ? "pass" : "fail");
  if (rep.budget_exhausted) line << "\tbudget=exhausted";
  out << line.str() << "\n";
  if (with_checks)
    for (const auto& v : rep.verdicts) out << to_line(v) << "\n";
}

void print_summary(std::ostream& out, const RunReport& rep) {
  out << "scenario " << rep.scenario_id << ", seed " << rep.seed
      << (rep.all_pass() ? "  [pass]" : "  [FAIL]") << "\n";
  out << "  decided   " << rep.decisions.size() << " correct process(es)";
  if (!rep.decisions.empty()) {
    out << ", value " << decided_value(rep) << ", slowest round "
        << rep.complexity.last_decide_round;
  }
  out << "\n";
  out << "  cost      steps " << rep.complexity.steps << ", sends " << rep.complexity.total_sends;
  if (rep.budget_exhausted) out << ", round budget exhausted";
  out << "\n  checks    ";
  bool first = true;
  for (const auto& v : rep.verdicts) {
    if (!first) out << ", ";
    first = false;
    out << v.property << (v.applicable ? (v.pass ? " ok" : " FAIL") : " n/a");
  }
  out << "\n";
  for (const auto& v : rep.verdicts)
    if (!v.pass) out << "  !! " << v.property << ": " << v.explanation << "\n";
}

Scenario sweep_variant(const Scenario& tmpl, std::uint64_t seed, const std::string& mix) {
  Scenario sc = tmpl;
  if (mix == "none" || mix.empty()) return sc;

  if (mix == "faults") {
    const auto& catalog = strategy_catalog();
    std::vector<std::uint32_t> targets;
    for (const auto& [id, spec] : sc.byzantine) targets.push_back(id);
    if (targets.empty()) {
      // Template declares no faulty set: conscript the highest ids, keeping
      // any privileged pivot honest.
      for (std::uint32_t id = sc.n; id >= 1 && targets.size() < sc.t; --id) {
        if (sc.bw && sc.bw->pivot.index == id) continue;
        targets.push_back(id);
      }
    }
    sc.byzantine.clear();
    for (std::uint32_t id : targets) {
      StrategySpec spec;
      spec.name = catalog[(seed + id) % catalog.size()];
      if (spec.name == "crash")
        spec.args = {seed % 3};
      else if (spec.name == "delayer")
        spec.args = {1 + seed % 4};
      else if (spec.name == "invalid-spammer")
        spec.args = {4 + seed % 5};
      sc.byzantine[id] = spec;
    }
    validate_scenario(sc);
    return sc;
  }

  if (mix == "bw") {
    static const char* presets[] = {"bisource", "winning", "mixed"};
    std::uint32_t pivot = 0;
    std::uint64_t delta = 2, tau = 4;
    if (sc.bw) {
      pivot = sc.bw->pivot.index;
      delta = sc.bw->delta;
      tau = sc.bw->tau;
    } else {
      for (std::uint32_t id = 1; id <= sc.n; ++id)
        if (!sc.is_byzantine(id)) {
          pivot = id;
          break;
        }
    }
    // Privileged links are rematerialized from scratch; manual per-pair
    // overrides in the template do not survive this mix.
    sc.link_overrides.clear();
    sc.bw.reset();
    apply_bw_preset(sc, presets[seed % 3], pid(pivot), delta, tau);
    validate_scenario(sc);
    return sc;
  }

  throw ScenarioError("unknown sweep mix: " + mix);
}

SweepReport sweep(const Scenario& tmpl, const SweepOptions& opt) {
  if (opt.seed_hi < opt.seed_lo) throw ScenarioError("sweep seed range is empty");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = opt.seed_lo; s <= opt.seed_hi; ++s) seeds.push_back(s);

  unsigned threads = opt.threads ? opt.threads : std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = std::min<unsigned>(threads, seeds.size());

  std::vector<std::vector<RunReport>> shards(threads);
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) {
    pool.emplace_back([&, k] {
      try {
        for (std::size_t i = k; i < seeds.size(); i += threads) {
          Scenario variant = sweep_variant(tmpl, seeds[i], opt.mix);
          shards[k].push_back(run_once(variant, seeds[i]));
        }
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  SweepReport rep;
  for (auto& shard : shards)
    for (auto& r : shard) rep.runs.push_back(std::move(r));
  std::sort(rep.runs.begin(), rep.runs.end(),
            [](const RunReport& a, const RunReport& b) { return a.seed < b.seed; });

  double round_sum = 0;
  std::uint64_t decided = 0;
  for (const auto& r : rep.runs) {
    if (!r.all_pass()) {
      ++rep.failures;
      for (const auto& v : r.verdicts)
        if (!v.pass) ++rep.fail_by_property[v.property];
    }
    if (r.complexity.any_decided) {
      const std::uint32_t rd = r.complexity.last_decide_round;
      if (decided == 0 || rd < rep.min_round) rep.min_round = rd;
      rep.max_round = std::max(rep.max_round, rd);
      round_sum += rd;
      ++decided;
    } else {
      ++rep.undecided_runs;
    }
  }
  if (decided) rep.mean_round = round_sum / static_cast<double>(decided);
  return rep;
}

void print_sweep(std::ostream& out, const SweepReport& rep, bool summary) {
  if (!summary)
    for (const auto& r : rep.runs) print_report(out, r, !r.all_pass());
  out << "sweep\truns=" << rep.runs.size() << "\tfailures=" << rep.failures
      << "\tundecided=" << rep.undecided_runs;
  if (rep.runs.size() > rep.undecided_runs) {
    std::ostringstream mean;
    mean.precision(2);
    mean << std::fixed << rep.mean_round;
    out << "\trounds=" << rep.min_round << "/" << mean.str() << "/" << rep.max_round;
  }
  out << "\n";
  for (const auto& [prop, count] : rep.fail_by_property)
    out << "sweep-fail\t" << prop << "\t" << count << "\n";
}

std::vector<Verdict> verify_trace_records(const std::vector<TraceRecord>& records,
                                          const std::optional<Scenario>& sc) {
  CheckContext ctx;
  if (sc) ctx = CheckContext::from_scenario(*sc);
  return run_all_checkers(records, ctx);
}

}  // namespace bwcons
