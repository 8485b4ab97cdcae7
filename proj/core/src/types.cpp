#include "bwcons/types.hpp"

namespace bwcons {

SystemParams::SystemParams(std::uint32_t n_, std::uint32_t t_) : n(n_), t(t_) {
  if (t < 1) throw ResilienceError("t must be at least 1");
  if (n <= 3 * t)
    throw ResilienceError("need n > 3t, got n=" + std::to_string(n) +
                          " t=" + std::to_string(t));
}

ProcessId coordinator_of(std::uint32_t round, const SystemParams& params) {
  if (round < 1) throw std::invalid_argument("rounds start at 1");
  return pid(((round - 1) % params.n) + 1);
}

std::pair<std::uint32_t, std::uint32_t> quorum_thresholds(std::uint32_t n, std::uint32_t t) {
  SystemParams p(n, t);  // validates n > 3t
  return {p.quorum(), p.super_minority()};
}

void ValueSet::add(const Value& v) {
  if (v.is_bottom()) {
    has_bottom = true;
    return;
  }
  if (!contains(v)) distinct_non_bottom.push_back(v);
}

bool ValueSet::contains(const Value& v) const {
  if (v.is_bottom()) return has_bottom;
  for (const auto& x : distinct_non_bottom)
    if (x == v) return true;
  return false;
}

std::optional<Value> ValueSet::unanimous() const {
  if (has_bottom) {
    if (distinct_non_bottom.empty()) return Value::bottom();
    return std::nullopt;
  }
  if (distinct_non_bottom.size() == 1) return distinct_non_bottom.front();
  return std::nullopt;
}

std::optional<Value> ValueSet::single_non_bottom() const {
  if (distinct_non_bottom.size() == 1) return distinct_non_bottom.front();
  return std::nullopt;
}

}  // namespace bwcons
