#pragma once

// Shared value-level vocabulary for the consensus core: process identities,
// system sizing, proposal values with an explicit "empty" marker, and the
// arithmetic helpers (coordinator rotation, quorum thresholds) everything
// else is built on.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bwcons {

struct ProcessId {
  // 1-based rank; 0 means "unset".
  std::uint32_t index = 0;

  auto operator<=>(const ProcessId&) const = default;
  explicit operator bool() const { return index != 0; }
};

inline ProcessId pid(std::uint32_t index) { return ProcessId{index}; }

// Thrown when a configuration violates n > 3t or related sizing rules.
struct ResilienceError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SystemParams {
  std::uint32_t n = 0;  // total processes, ids 1..n
  std::uint32_t t = 0;  // tolerated Byzantine processes

  SystemParams() = default;
  SystemParams(std::uint32_t n_, std::uint32_t t_);

  std::uint32_t quorum() const { return n - t; }        // collect threshold
  std::uint32_t super_minority() const { return n - 2 * t; }  // adoption threshold

  bool valid_pid(ProcessId p) const { return p.index >= 1 && p.index <= n; }
};

// Coordinator of round r under the rotating scheme c = ((r-1) mod n) + 1.
ProcessId coordinator_of(std::uint32_t round, const SystemParams& params);

// (n-t, n-2t) pair; throws ResilienceError unless n > 3t and t >= 1 fits.
std::pair<std::uint32_t, std::uint32_t> quorum_thresholds(std::uint32_t n, std::uint32_t t);

// A proposal value or the distinguished non-value used by the filter phases.
// The non-value can never be proposed; it only arises inside a round.
class Value {
 public:
  Value() = default;  // bottom
  static Value bottom() { return Value(); }
  static Value of(std::string bytes) {
    Value v;
    v.payload_ = std::move(bytes);
    return v;
  }

  bool is_bottom() const { return !payload_.has_value(); }
  const std::string& bytes() const { return *payload_; }

  bool operator==(const Value&) const = default;
  bool operator<(const Value& o) const {
    if (is_bottom() != o.is_bottom()) return is_bottom();
    if (is_bottom()) return false;
    return *payload_ < *o.payload_;
  }

 private:
  std::optional<std::string> payload_;
};

// Distinct values seen in a collected quorum, bottom tracked separately.
struct ValueSet {
  std::vector<Value> distinct_non_bottom;
  bool has_bottom = false;

  void add(const Value& v);
  bool contains(const Value& v) const;
  // {v} exactly, no bottom
  std::optional<Value> unanimous() const;
  // non-bottom part is a singleton (bottom may or may not be present)
  std::optional<Value> single_non_bottom() const;
  bool all_bottom() const { return distinct_non_bottom.empty(); }
};

}  // namespace bwcons
