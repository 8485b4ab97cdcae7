#include "bwcons/trace_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "bwcons/message.hpp"

namespace bwcons {

namespace {

const char* kSep = "\t";

std::string opt_num(const std::optional<std::uint32_t>& v) {
  return v ? std::to_string(*v) : "-";
}

std::string opt_digest(const std::optional<std::uint64_t>& v) { return v ? hex16(*v) : "-"; }

std::uint64_t parse_u64(const std::string& s, std::size_t line, const char* field) {
  if (s.empty()) throw TraceError(line, std::string(field) + " is empty");
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw TraceError(line, std::string(field) + " is not a number: '" + s + "'");
  return std::stoull(s);
}

std::optional<std::uint64_t> parse_digest(const std::string& s, std::size_t line,
                                          const char* field) {
  if (s == "-") return std::nullopt;
  if (s.size() != 16) throw TraceError(line, std::string(field) + " must be 16 hex characters");
  std::uint64_t d = 0;
  for (char c : s) {
    d <<= 4;
    if (c >= '0' && c <= '9')
      d |= static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f')
      d |= static_cast<std::uint64_t>(c - 'a' + 10);
    else
      throw TraceError(line, std::string(field) + " has a non-hex character");
  }
  return d;
}

bool known_phase(const std::string& s) {
  if (s == "-") return true;
  for (auto k : {MsgKind::Init, MsgKind::Query, MsgKind::Response, MsgKind::Relay, MsgKind::Filt1,
                 MsgKind::Filt2, MsgKind::Dec})
    if (s == to_string(k)) return true;
  return false;
}

}  // namespace

std::string to_line(const TraceRecord& r) {
  std::ostringstream out;
  out << r.time << kSep << to_string(r.kind) << kSep << r.actor << kSep
      << (r.peer ? std::to_string(r.peer) : "-") << kSep << opt_num(r.round) << kSep << r.phase
      << kSep << opt_digest(r.msg_digest) << kSep << opt_digest(r.value_digest);
  return out.str();
}

TraceRecord parse_line(const std::string& s, std::size_t line) {
  std::vector<std::string> f;
  std::size_t start = 0;
  while (true) {
    auto tab = s.find('\t', start);
    f.push_back(s.substr(start, tab == std::string::npos ? tab : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (f.size() != 8)
    throw TraceError(line, "expected 8 fields, got " + std::to_string(f.size()));

  TraceRecord r;
  r.time = parse_u64(f[0], line, "time");
  auto kind = trace_kind_from(f[1]);
  if (!kind) throw TraceError(line, "unknown record kind '" + f[1] + "'");
  r.kind = *kind;
  r.actor = static_cast<std::uint32_t>(parse_u64(f[2], line, "actor"));
  r.peer = f[3] == "-" ? 0 : static_cast<std::uint32_t>(parse_u64(f[3], line, "peer"));
  if (f[4] != "-") r.round = static_cast<std::uint32_t>(parse_u64(f[4], line, "round"));
  if (!known_phase(f[5])) throw TraceError(line, "unknown phase '" + f[5] + "'");
  r.phase = f[5];
  r.msg_digest = parse_digest(f[6], line, "msg-digest");
  r.value_digest = parse_digest(f[7], line, "value-digest");
  return r;
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records) {
  for (const auto& r : records) out << to_line(r) << '\n';
}

std::vector<TraceRecord> read_trace(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string s;
  std::size_t line = 0;
  std::uint64_t last_time = 0;
  while (std::getline(in, s)) {
    ++line;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    if (s.empty()) throw TraceError(line, "blank line inside trace");
    TraceRecord r = parse_line(s, line);
    if (r.time < last_time) throw TraceError(line, "time goes backwards");
    last_time = r.time;
    out.push_back(std::move(r));
  }
  return out;
}

void save_trace(const std::string& path, const std::vector<TraceRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError(0, "cannot open '" + path + "' for writing");
  write_trace(out, records);
}

std::vector<TraceRecord> load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError(0, "cannot open '" + path + "'");
  return read_trace(in);
}

}  // namespace bwcons
