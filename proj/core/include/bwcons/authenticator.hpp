#pragma once

// Signing, certificate construction and validation, and the per-process
// daemon that filters every delivered message before the protocol sees it.
//
// A certificate justifies the value a message carries by quoting signed
// messages from the previous exchange. Quoted evidence is kept in stripped
// form (signature plus certificate digest, no certificate body), so
// certificates stay small; the chains that justify an estimate across
// rounds grow linearly with the round number.

#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bwcons/message.hpp"
#include "bwcons/types.hpp"

namespace bwcons {

// Engine mutation switches. Only honored when built with BWCONS_MUTATIONS;
// they exist so the test suite can prove the checkers detect a broken
// protocol, and are compiled out of release builds.
struct MutationSet {
  bool phase3_any_value = false;  // third filter passes any non-bottom value

  bool any() const { return phase3_any_value; }
};

class AuthBackend {
 public:
  virtual ~AuthBackend() = default;
  virtual Signature sign(ProcessId as, Digest canonical) const = 0;
  virtual bool verify(ProcessId claimed, Digest canonical, const Signature& sig) const = 0;
};

// Default backend: identity-tagged digests. Within the simulation a forged
// signature is structurally impossible because strategies only ever hold a
// Signer bound to their own id.
class SimAuthenticator : public AuthBackend {
 public:
  Signature sign(ProcessId as, Digest canonical) const override;
  bool verify(ProcessId claimed, Digest canonical, const Signature& sig) const override;
};

bool verify_message(const AuthBackend& auth, const SignedMessage& m);

// Signing capability for exactly one process id.
class Signer {
 public:
  Signer(ProcessId me, const AuthBackend* backend) : me_(me), backend_(backend) {}

  ProcessId id() const { return me_; }

  SignedMessage make(MsgKind kind, std::uint32_t round, Value value, CertPtr cert) const;

 private:
  ProcessId me_;
  const AuthBackend* backend_;
};

// Evidence is stripped and the certificate frozen behind a const pointer.
CertPtr build_certificate(CertKind kind, std::vector<SignedMessage> evidence, CertPtr nested = nullptr);

enum class DiscardReason : std::uint8_t {
  BadSignature,
  Malformed,
  MissingCertificate,
  BadCertificate,
  Duplicate,
  StaleRound,
};

const char* to_string(DiscardReason r);

struct CertCheck {
  bool ok = false;
  DiscardReason reason = DiscardReason::BadCertificate;
  std::string detail;

  static CertCheck accept() { return CertCheck{true, DiscardReason::BadCertificate, {}}; }
  static CertCheck reject(std::string why) {
    return CertCheck{false, DiscardReason::BadCertificate, std::move(why)};
  }
};

struct CertContext {
  MsgKind carrier;
  std::uint32_t round = 0;
  ProcessId sender;
  Value value;
};

// Full rule table: does `cert` justify `ctx.value` on a `ctx.carrier`
// message for `ctx.round` sent by `ctx.sender`?
CertCheck validate_certificate(const Certificate& cert, const CertContext& ctx,
                               const SystemParams& params, const AuthBackend& auth,
                               const MutationSet& muts = {});

// Shared by QUERY validation, coordinator RESPONSE validation, and chain
// links: proves `est` was a certified estimate entering `round`.
CertCheck validate_estimate_proof(const Certificate& cert, const Value& est, std::uint32_t round,
                                  ProcessId holder, const SystemParams& params,
                                  const AuthBackend& auth, const MutationSet& muts = {});

struct FilterResult {
  bool accepted = false;
  DiscardReason reason = DiscardReason::Malformed;
  std::string detail;
};

// Message admission: signature, well-formedness, staleness, duplicates,
// certificate. QUERY and DEC are exempt from the staleness rule: queries
// must be answerable by processes that have moved ahead, and decision
// notices are meaningful at any time.
class Daemon {
 public:
  Daemon(SystemParams params, const AuthBackend* auth, MutationSet muts = {})
      : params_(params), auth_(auth), muts_(muts) {}

  FilterResult filter(const SignedMessage& m, std::uint32_t current_round);

 private:
  SystemParams params_;
  const AuthBackend* auth_;
  MutationSet muts_;
  std::set<std::tuple<std::uint32_t, std::uint8_t, std::uint32_t>> seen_;
};

}  // namespace bwcons
