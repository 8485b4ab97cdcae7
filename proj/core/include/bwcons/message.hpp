#pragma once

// Wire-level message model. Every protocol message is a signed tuple
// (kind, round, sender, value, certificate). The signature covers the
// canonical byte serialization, which embeds the certificate by digest so
// that evidence copies of a message can drop the certificate body without
// invalidating the signature.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bwcons/types.hpp"

namespace bwcons {

enum class MsgKind : std::uint8_t {
  Init,
  Query,
  Response,
  Relay,
  Filt1,
  Filt2,
  Dec,
};

const char* to_string(MsgKind k);

enum class CertKind : std::uint8_t {
  InitQuorum,       // n-t INITs, justifies a round-1 QUERY estimate
  CoordResponse,    // coordinator-signed RESPONSE plus its value chain
  ResponseQuorum,   // n-t RESPONSEs, justifies a bottom RELAY
  RelayQuorum,      // n-t RELAYs, justifies a FILT1 value
  Filt1Quorum,      // n-t FILT1s, justifies a FILT2 value
  Filt2Quorum,      // n-t FILT2s, justifies a next-round QUERY estimate
  DecQuorum,        // n-t FILT2s carrying one value, justifies DEC
  ChainedEstimate,  // all-bottom FILT2 quorum chained onto an older estimate proof
};

const char* to_string(CertKind k);

using Digest = std::uint64_t;

// FNV-1a over a byte stream; stable across platforms.
struct Hasher {
  Digest h = 14695981039346656037ull;
  void feed(const void* data, std::size_t len);
  void feed_u32(std::uint32_t v);
  void feed_u64(std::uint64_t v);
  void feed_str(const std::string& s);
};

std::string hex16(Digest d);

struct Signature {
  ProcessId signer;
  Digest tag = 0;  // identity-tagged digest of the canonical bytes

  bool operator==(const Signature&) const = default;
};

struct Certificate;
using CertPtr = std::shared_ptr<const Certificate>;

struct SignedMessage {
  MsgKind kind = MsgKind::Init;
  std::uint32_t round = 0;  // 0 for INIT
  ProcessId sender;
  Value value;
  Digest cert_digest = 0;  // 0 when no certificate is attached
  CertPtr certificate;     // may be null on evidence copies (digest retained)
  Signature signature;

  Digest digest() const;  // digest of the canonical bytes
};

struct Certificate {
  CertKind kind = CertKind::InitQuorum;
  std::vector<SignedMessage> evidence;  // stored in stripped form
  CertPtr nested;                       // chain link, when the kind carries one
};

// Canonical bytes the signature covers: kind, round, sender, value
// (bottom marker or length + bytes), certificate digest.
void feed_canonical(Hasher& h, const SignedMessage& m);

Digest digest_of(const Certificate& c);
Digest digest_of(const Value& v);

// Copy for inclusion as certificate evidence: certificate body dropped,
// digest kept so the signature still verifies.
SignedMessage stripped(const SignedMessage& m);

}  // namespace bwcons
