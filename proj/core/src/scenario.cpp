#include "bwcons/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "bwcons/adversary.hpp"

namespace bwcons {

const char* to_string(LinkClass c) {
  switch (c) {
    case LinkClass::Asynchronous: return "async";
    case LinkClass::Timely: return "timely";
    case LinkClass::Winning: return "winning";
  }
  return "?";
}

const LinkModel& Scenario::link(std::uint32_t from, std::uint32_t to) const {
  auto it = link_overrides.find({from, to});
  return it == link_overrides.end() ? default_link : it->second;
}

std::vector<std::uint32_t> Scenario::correct_ids() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 1; i <= n; ++i)
    if (!is_byzantine(i)) out.push_back(i);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ScenarioError("line " + std::to_string(line) + ": " + what);
}

std::uint64_t parse_num(const std::string& s, std::size_t line, const std::string& field) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(c); }))
    fail(line, field + " expects a number, got '" + s + "'");
  return std::stoull(s);
}

// "p3" or "3"
std::uint32_t parse_pid(const std::string& s, std::size_t line) {
  std::string body = s;
  if (!body.empty() && (body[0] == 'p' || body[0] == 'P')) body = body.substr(1);
  return static_cast<std::uint32_t>(parse_num(body, line, "process id"));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (out.empty()) out.push_back("");
  return out;
}

// "timely(delta=2, tau=5)" / "winning(tau=3)" / "async"
LinkModel parse_link(const std::string& spec, std::size_t line) {
  std::string name = spec;
  std::vector<std::string> args;
  auto open = spec.find('(');
  if (open != std::string::npos) {
    if (spec.back() != ')') fail(line, "unbalanced link spec '" + spec + "'");
    name = trim(spec.substr(0, open));
    std::string inner = spec.substr(open + 1, spec.size() - open - 2);
    if (!trim(inner).empty()) args = split(inner, ',');
  }
  LinkModel lm;
  if (name == "async") {
    lm.cls = LinkClass::Asynchronous;
    for (const auto& a : args) {
      auto kv = split(a, '=');
      if (kv.size() != 2) fail(line, "link argument '" + a + "' is not key=value");
      if (kv[0] == "base") {
        auto range = split(kv[1], '.');
        if (range.size() != 3 || !range[1].empty()) fail(line, "base expects lo..hi");
        AsyncDelay ad;
        ad.lo = parse_num(range[0], line, "base lo");
        ad.hi = parse_num(range[2], line, "base hi");
        lm.range = ad;
      } else {
        fail(line, "unknown link argument '" + kv[0] + "'");
      }
    }
    return lm;
  }
  if (name == "timely")
    lm.cls = LinkClass::Timely;
  else if (name == "winning")
    lm.cls = LinkClass::Winning;
  else
    fail(line, "unknown link class '" + name + "'");
  for (const auto& a : args) {
    auto kv = split(a, '=');
    if (kv.size() != 2) fail(line, "link argument '" + a + "' is not key=value");
    if (kv[0] == "delta" && lm.cls == LinkClass::Timely)
      lm.delta = parse_num(kv[1], line, "delta");
    else if (kv[0] == "tau")
      lm.tau = parse_num(kv[1], line, "tau");
    else
      fail(line, "unknown link argument '" + kv[0] + "'");
  }
  if (lm.cls == LinkClass::Timely && lm.delta == 0) fail(line, "delta must be positive");
  return lm;
}

StrategySpec parse_strategy(const std::string& spec, std::size_t line) {
  StrategySpec out;
  out.name = spec;
  auto open = spec.find('(');
  if (open != std::string::npos) {
    if (spec.back() != ')') fail(line, "unbalanced strategy spec '" + spec + "'");
    out.name = trim(spec.substr(0, open));
    std::string inner = trim(spec.substr(open + 1, spec.size() - open - 2));
    if (!inner.empty())
      for (const auto& a : split(inner, ','))
        out.args.push_back(parse_num(a, line, "strategy argument"));
  }
  return out;
}

}  // namespace

void apply_bw_preset(Scenario& sc, const std::string& preset, ProcessId pivot,
                     std::uint64_t delta, std::uint64_t tau) {
  BWAssignment bw;
  bw.pivot = pivot;
  bw.delta = delta;
  bw.tau = tau;
  std::vector<ProcessId> neighbors;
  for (std::uint32_t i = 1; i <= sc.n && neighbors.size() < 2 * sc.t; ++i)
    if (i != pivot.index) neighbors.push_back(pid(i));
  if (neighbors.size() < 2 * sc.t)
    throw ScenarioError("not enough processes for a privileged set of " +
                        std::to_string(2 * sc.t));
  if (preset == "bisource") {
    bw.timely = neighbors;
  } else if (preset == "winning") {
    bw.winning = neighbors;
  } else if (preset == "mixed") {
    bw.timely.assign(neighbors.begin(), neighbors.begin() + sc.t);
    bw.winning.assign(neighbors.begin() + sc.t, neighbors.end());
  } else {
    throw ScenarioError("unknown bw preset '" + preset + "'");
  }
  sc.bw = bw;
}

void validate_scenario(Scenario& sc) {
  SystemParams params(sc.n, sc.t);  // throws ResilienceError when n <= 3t

  if (sc.values.size() < sc.n + 1) sc.values.resize(sc.n + 1);
  for (std::uint32_t i = 1; i <= sc.n; ++i)
    if (sc.values[i].is_bottom()) throw ScenarioError("p" + std::to_string(i) + " has no proposal");

  if (sc.byzantine.size() > sc.t)
    throw ScenarioError(std::to_string(sc.byzantine.size()) + " byzantine processes exceed t=" +
                        std::to_string(sc.t));
  for (const auto& [id, strat] : sc.byzantine) {
    if (!params.valid_pid(pid(id)))
      throw ScenarioError("byzantine id p" + std::to_string(id) + " out of range");
    if (std::string why = check_strategy(strat); !why.empty()) throw ScenarioError(why);
  }

  if (sc.async.lo == 0 || sc.async.hi < sc.async.lo)
    throw ScenarioError("async delay range must satisfy 1 <= lo <= hi");

  for (const auto& [pair, lm] : sc.link_overrides) {
    if (!params.valid_pid(pid(pair.first)) || !params.valid_pid(pid(pair.second)))
      throw ScenarioError("link override names a process out of range");
    if (pair.first == pair.second)
      throw ScenarioError("self links are always immediate and cannot be overridden");
    if (lm.range && (lm.range->lo == 0 || lm.range->hi < lm.range->lo))
      throw ScenarioError("link override range must satisfy 1 <= lo <= hi");
  }

  if (sc.bw) {
    BWAssignment& bw = *sc.bw;
    if (!params.valid_pid(bw.pivot)) throw ScenarioError("bw pivot out of range");
    if (sc.is_byzantine(bw.pivot.index)) throw ScenarioError("bw pivot must be correct");
    std::set<std::uint32_t> seen{bw.pivot.index};
    for (const auto& p : bw.timely) {
      if (!params.valid_pid(p)) throw ScenarioError("bw timely member out of range");
      if (!seen.insert(p.index).second)
        throw ScenarioError("bw sets overlap or include the pivot");
    }
    for (const auto& p : bw.winning) {
      if (!params.valid_pid(p)) throw ScenarioError("bw winning member out of range");
      if (!seen.insert(p.index).second)
        throw ScenarioError("bw sets overlap or include the pivot");
    }
    if (bw.timely.size() + bw.winning.size() != 2 * sc.t)
      throw ScenarioError("bw privileged set must hold exactly 2t processes");
    if (bw.delta == 0) throw ScenarioError("bw delta must be positive");

    // Materialize the assignment as link overrides; an explicit conflicting
    // override is a consistency error, a matching one is kept.
    auto place = [&](std::uint32_t from, std::uint32_t to, LinkModel want) {
      auto it = sc.link_overrides.find({from, to});
      if (it == sc.link_overrides.end()) {
        sc.link_overrides[{from, to}] = want;
        return;
      }
      if (it->second.cls != want.cls)
        throw ScenarioError("link p" + std::to_string(from) + "->p" + std::to_string(to) +
                            " conflicts with the bw assignment");
    };
    for (const auto& y : bw.timely) {
      LinkModel lm{LinkClass::Timely, bw.delta, bw.tau, {}};
      place(bw.pivot.index, y.index, lm);
      place(y.index, bw.pivot.index, lm);
    }
    for (const auto& z : bw.winning) {
      LinkModel lm{LinkClass::Winning, 1, bw.tau, {}};
      place(bw.pivot.index, z.index, lm);
    }
  }

  if (sc.max_rounds == 0) sc.max_rounds = 4 * sc.n;
}

Scenario parse_scenario(const std::string& text, const std::string& id) {
  Scenario sc;
  sc.id = id;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  std::string section;
  Value default_value;
  std::map<std::uint32_t, Value> explicit_values;
  std::string bw_preset;
  ProcessId bw_pivot = pid(1);
  std::uint64_t bw_delta = 1, bw_tau = 0;
  std::vector<ProcessId> bw_y, bw_z;
  bool saw_bw = false, bw_explicit_sets = false;

  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "system" && section != "values" && section != "byzantine" &&
          section != "links" && section != "bw" && section != "run")
        fail(line, "unknown section [" + section + "]");
      if (section == "bw") saw_bw = true;
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty() || val.empty()) fail(line, "empty key or value");

    if (section == "system") {
      if (key == "n")
        sc.n = static_cast<std::uint32_t>(parse_num(val, line, "n"));
      else if (key == "t")
        sc.t = static_cast<std::uint32_t>(parse_num(val, line, "t"));
      else
        fail(line, "unknown system key '" + key + "'");
    } else if (section == "values") {
      if (key == "default")
        default_value = Value::of(val);
      else
        explicit_values[parse_pid(key, line)] = Value::of(val);
    } else if (section == "byzantine") {
      sc.byzantine[parse_pid(key, line)] = parse_strategy(val, line);
    } else if (section == "links") {
      if (key == "default") {
        sc.default_link = parse_link(val, line);
      } else if (key == "base") {
        auto range = split(val, '.');  // "1..4" splits as {"1","","4"}
        if (range.size() != 3 || !range[1].empty()) fail(line, "base expects lo..hi");
        sc.async.lo = parse_num(range[0], line, "base lo");
        sc.async.hi = parse_num(range[2], line, "base hi");
      } else if (key == "drift") {
        sc.async.drift_every = parse_num(val, line, "drift");
      } else {
        auto arrow = key.find("->");
        if (arrow == std::string::npos) fail(line, "link key must be default, base, drift or pA->pB");
        std::uint32_t from = parse_pid(trim(key.substr(0, arrow)), line);
        std::uint32_t to = parse_pid(trim(key.substr(arrow + 2)), line);
        sc.link_overrides[{from, to}] = parse_link(val, line);
      }
    } else if (section == "bw") {
      if (key == "pivot")
        bw_pivot = pid(parse_pid(val, line));
      else if (key == "preset")
        bw_preset = val;
      else if (key == "delta")
        bw_delta = parse_num(val, line, "delta");
      else if (key == "tau")
        bw_tau = parse_num(val, line, "tau");
      else if (key == "y" || key == "z") {
        bw_explicit_sets = true;
        auto& dst = key == "y" ? bw_y : bw_z;
        if (val != "-")
          for (const auto& item : split(val, ','))
            if (!item.empty()) dst.push_back(pid(parse_pid(item, line)));
      } else
        fail(line, "unknown bw key '" + key + "'");
    } else if (section == "run") {
      if (key == "seed")
        sc.seed = parse_num(val, line, "seed");
      else if (key == "max_rounds")
        sc.max_rounds = static_cast<std::uint32_t>(parse_num(val, line, "max_rounds"));
      else if (key == "id")
        sc.id = val;
      else
        fail(line, "unknown run key '" + key + "'");
    } else {
      fail(line, "key outside any section");
    }
  }

  if (sc.n == 0) throw ScenarioError("missing [system] n");
  sc.values.assign(sc.n + 1, Value::bottom());
  for (std::uint32_t i = 1; i <= sc.n; ++i) {
    auto it = explicit_values.find(i);
    if (it != explicit_values.end())
      sc.values[i] = it->second;
    else if (!default_value.is_bottom())
      sc.values[i] = default_value;
    else
      sc.values[i] = Value::of("a");
  }
  for (const auto& [id_, v] : explicit_values)
    if (id_ < 1 || id_ > sc.n)
      throw ScenarioError("value for p" + std::to_string(id_) + " out of range");

  if (saw_bw) {
    if (!bw_preset.empty() && bw_explicit_sets)
      throw ScenarioError("bw preset and explicit y/z sets are mutually exclusive");
    if (!bw_preset.empty()) {
      apply_bw_preset(sc, bw_preset, bw_pivot, bw_delta, bw_tau);
    } else {
      BWAssignment bw;
      bw.pivot = bw_pivot;
      bw.timely = bw_y;
      bw.winning = bw_z;
      bw.delta = bw_delta;
      bw.tau = bw_tau;
      sc.bw = bw;
    }
  }

  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string id = path;
  if (auto slash = id.find_last_of('/'); slash != std::string::npos) id = id.substr(slash + 1);
  if (auto dot = id.find_last_of('.'); dot != std::string::npos && dot > 0) id = id.substr(0, dot);
  return parse_scenario(buf.str(), id);
}

}  // namespace bwcons
