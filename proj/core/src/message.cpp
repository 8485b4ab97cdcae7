#include "bwcons/message.hpp"

#include <array>

namespace bwcons {

const char* to_string(MsgKind k) {
  switch (k) {
    case MsgKind::Init: return "init";
    case MsgKind::Query: return "query";
    case MsgKind::Response: return "response";
    case MsgKind::Relay: return "relay";
    case MsgKind::Filt1: return "filt1";
    case MsgKind::Filt2: return "filt2";
    case MsgKind::Dec: return "dec";
  }
  return "?";
}

const char* to_string(CertKind k) {
  switch (k) {
    case CertKind::InitQuorum: return "init-quorum";
    case CertKind::CoordResponse: return "coord-response";
    case CertKind::ResponseQuorum: return "response-quorum";
    case CertKind::RelayQuorum: return "relay-quorum";
    case CertKind::Filt1Quorum: return "filt1-quorum";
    case CertKind::Filt2Quorum: return "filt2-quorum";
    case CertKind::DecQuorum: return "dec-quorum";
    case CertKind::ChainedEstimate: return "chained-estimate";
  }
  return "?";
}

void Hasher::feed(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
}

void Hasher::feed_u32(std::uint32_t v) {
  std::array<unsigned char, 4> b{static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                 static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  feed(b.data(), b.size());
}

void Hasher::feed_u64(std::uint64_t v) {
  feed_u32(static_cast<std::uint32_t>(v));
  feed_u32(static_cast<std::uint32_t>(v >> 32));
}

void Hasher::feed_str(const std::string& s) {
  feed_u32(static_cast<std::uint32_t>(s.size()));
  feed(s.data(), s.size());
}

std::string hex16(Digest d) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[d & 0xf];
    d >>= 4;
  }
  return out;
}

void feed_canonical(Hasher& h, const SignedMessage& m) {
  h.feed_u32(static_cast<std::uint32_t>(m.kind));
  h.feed_u32(m.round);
  h.feed_u32(m.sender.index);
  if (m.value.is_bottom()) {
    h.feed_u32(0);
  } else {
    h.feed_u32(1);
    h.feed_str(m.value.bytes());
  }
  h.feed_u64(m.cert_digest);
}

Digest SignedMessage::digest() const {
  Hasher h;
  feed_canonical(h, *this);
  return h.h;
}

Digest digest_of(const Certificate& c) {
  Hasher h;
  h.feed_u32(static_cast<std::uint32_t>(c.kind));
  h.feed_u32(static_cast<std::uint32_t>(c.evidence.size()));
  for (const auto& m : c.evidence) {
    feed_canonical(h, m);
    h.feed_u64(m.signature.tag);
    h.feed_u32(m.signature.signer.index);
  }
  h.feed_u64(c.nested ? digest_of(*c.nested) : 0);
  return h.h;
}

Digest digest_of(const Value& v) {
  Hasher h;
  if (v.is_bottom()) {
    h.feed_u32(0);
  } else {
    h.feed_u32(1);
    h.feed_str(v.bytes());
  }
  return h.h;
}

SignedMessage stripped(const SignedMessage& m) {
  SignedMessage out = m;
  out.certificate = nullptr;  // digest stays, so the signature still checks out
  return out;
}

}  // namespace bwcons
