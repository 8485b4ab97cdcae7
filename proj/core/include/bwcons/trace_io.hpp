#pragma once

// Trace persistence. One record per line, eight tab-separated fields:
//
//   time  kind  actor  peer  round  phase  msg-digest  value-digest
//
// kind is send|deliver|timer_set|timer_fire|decide|discard, digests are 16
// lowercase hex characters, and "-" marks an absent field. The writer is
// byte-stable: identical records always serialize identically.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bwcons/netsim.hpp"

namespace bwcons {

struct TraceError : std::runtime_error {
  std::size_t line;
  TraceError(std::size_t line_, const std::string& what)
      : std::runtime_error("trace line " + std::to_string(line_) + ": " + what), line(line_) {}
};

std::string to_line(const TraceRecord& r);
TraceRecord parse_line(const std::string& s, std::size_t line);

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records);
std::vector<TraceRecord> read_trace(std::istream& in);

void save_trace(const std::string& path, const std::vector<TraceRecord>& records);
std::vector<TraceRecord> load_trace(const std::string& path);

}  // namespace bwcons
