#include "bwcons/authenticator.hpp"

#include <algorithm>
#include <map>

namespace bwcons {

namespace {

Digest canonical_digest(const SignedMessage& m) {
  Hasher h;
  feed_canonical(h, m);
  return h.h;
}

}  // namespace

Signature SimAuthenticator::sign(ProcessId as, Digest canonical) const {
  Hasher h;
  h.feed_u32(as.index);
  h.feed_u64(canonical);
  return Signature{as, h.h};
}

bool SimAuthenticator::verify(ProcessId claimed, Digest canonical, const Signature& sig) const {
  if (sig.signer != claimed) return false;
  return sign(claimed, canonical).tag == sig.tag;
}

bool verify_message(const AuthBackend& auth, const SignedMessage& m) {
  return auth.verify(m.sender, canonical_digest(m), m.signature);
}

SignedMessage Signer::make(MsgKind kind, std::uint32_t round, Value value, CertPtr cert) const {
  SignedMessage m;
  m.kind = kind;
  m.round = round;
  m.sender = me_;
  m.value = std::move(value);
  m.certificate = std::move(cert);
  m.cert_digest = m.certificate ? digest_of(*m.certificate) : 0;
  m.signature = backend_->sign(me_, canonical_digest(m));
  return m;
}

CertPtr build_certificate(CertKind kind, std::vector<SignedMessage> evidence, CertPtr nested) {
  auto cert = std::make_shared<Certificate>();
  cert->kind = kind;
  cert->evidence.reserve(evidence.size());
  for (auto& m : evidence) cert->evidence.push_back(stripped(m));
  cert->nested = std::move(nested);
  return cert;
}

const char* to_string(DiscardReason r) {
  switch (r) {
    case DiscardReason::BadSignature: return "bad-signature";
    case DiscardReason::Malformed: return "malformed";
    case DiscardReason::MissingCertificate: return "missing-certificate";
    case DiscardReason::BadCertificate: return "bad-certificate";
    case DiscardReason::Duplicate: return "duplicate";
    case DiscardReason::StaleRound: return "stale-round";
  }
  return "?";
}

namespace {

// Signature, kind, round and sender-distinctness checks shared by every
// quorum rule. Exact arity: a quorum certificate carries n-t messages.
CertCheck check_evidence(const Certificate& cert, MsgKind want_kind, std::uint32_t want_round,
                         const SystemParams& params, const AuthBackend& auth) {
  if (cert.evidence.size() != params.quorum())
    return CertCheck::reject("evidence arity " + std::to_string(cert.evidence.size()) +
                             ", expected " + std::to_string(params.quorum()));
  std::set<std::uint32_t> senders;
  for (const auto& e : cert.evidence) {
    if (e.kind != want_kind) return CertCheck::reject("evidence kind mismatch");
    if (e.round != want_round) return CertCheck::reject("evidence round mismatch");
    if (!params.valid_pid(e.sender)) return CertCheck::reject("evidence sender out of range");
    if (!senders.insert(e.sender.index).second)
      return CertCheck::reject("evidence sender repeated");
    if (!verify_message(auth, e)) return CertCheck::reject("evidence signature invalid");
  }
  return CertCheck::accept();
}

ValueSet evidence_values(const Certificate& cert) {
  ValueSet vs;
  for (const auto& e : cert.evidence) vs.add(e.value);
  return vs;
}

CertCheck check_init_quorum(const Certificate& cert, const CertContext& ctx,
                            const SystemParams& params, const AuthBackend& auth) {
  if (auto c = check_evidence(cert, MsgKind::Init, 0, params, auth); !c.ok) return c;
  std::map<Value, std::uint32_t> counts;
  for (const auto& e : cert.evidence) {
    if (e.value.is_bottom()) return CertCheck::reject("bottom proposal in evidence");
    counts[e.value]++;
  }
  for (const auto& [v, c] : counts) {
    if (c >= params.super_minority()) {
      if (ctx.value == v) return CertCheck::accept();
      return CertCheck::reject("a value reached n-2t but the estimate differs");
    }
  }
  // No value reached n-2t, so the estimate fell back to a proposal. Any
  // quoted proposal qualifies: the proof travels (coordinators re-quote the
  // querier's), and when all correct proposals agree the n-2t case above is
  // the only reachable one, so validity does not rest on this arm.
  for (const auto& e : cert.evidence) {
    if (e.value == ctx.value) return CertCheck::accept();
  }
  return CertCheck::reject("no n-2t value and the estimate was never proposed");
}

}  // namespace

CertCheck validate_estimate_proof(const Certificate& cert, const Value& est, std::uint32_t round,
                                  ProcessId holder, const SystemParams& params,
                                  const AuthBackend& auth, const MutationSet& muts) {
  if (est.is_bottom()) return CertCheck::reject("estimates are never bottom");
  if (round == 1) {
    if (cert.kind != CertKind::InitQuorum)
      return CertCheck::reject("round-1 estimate needs an init quorum");
    CertContext ctx{MsgKind::Query, 1, holder, est};
    return check_init_quorum(cert, ctx, params, auth);
  }
  if (cert.kind == CertKind::Filt2Quorum) {
    if (auto c = check_evidence(cert, MsgKind::Filt2, round - 1, params, auth); !c.ok) return c;
    ValueSet vs = evidence_values(cert);
    if (vs.all_bottom())
      return CertCheck::reject("all-bottom quorum cannot introduce a value");
    for (const auto& v : vs.distinct_non_bottom)
      if (!(v == est)) return CertCheck::reject("quorum carries a different value");
    return CertCheck::accept();
  }
  if (cert.kind == CertKind::ChainedEstimate) {
    if (auto c = check_evidence(cert, MsgKind::Filt2, round - 1, params, auth); !c.ok) return c;
    // A mutated third filter lets rounds end with several surviving values,
    // so the mutated rule tolerates non-bottom evidence in chain links.
    bool relaxed = false;
#if BWCONS_MUTATIONS
    relaxed = muts.phase3_any_value;
#endif
    if (!relaxed && !evidence_values(cert).all_bottom())
      return CertCheck::reject("chained link requires an all-bottom quorum");
    if (!cert.nested) return CertCheck::reject("chained link missing its tail");
    return validate_estimate_proof(*cert.nested, est, round - 1, holder, params, auth, muts);
  }
  return CertCheck::reject("certificate kind cannot justify an estimate");
}

CertCheck validate_certificate(const Certificate& cert, const CertContext& ctx,
                               const SystemParams& params, const AuthBackend& auth,
                               const MutationSet& muts) {
  switch (ctx.carrier) {
    case MsgKind::Init:
      return CertCheck::reject("proposals carry no certificate");

    case MsgKind::Query:
      return validate_estimate_proof(cert, ctx.value, ctx.round, ctx.sender, params, auth, muts);

    case MsgKind::Response:
      // Only coordinator responses are certificate-checked; the carried
      // value is the estimate the coordinator adopted for this round.
      return validate_estimate_proof(cert, ctx.value, ctx.round, ctx.sender, params, auth, muts);

    case MsgKind::Relay: {
      if (ctx.value.is_bottom()) {
        if (cert.kind != CertKind::ResponseQuorum)
          return CertCheck::reject("bottom relay needs a response quorum");
        return check_evidence(cert, MsgKind::Response, ctx.round, params, auth);
      }
      if (cert.kind != CertKind::CoordResponse)
        return CertCheck::reject("non-bottom relay needs the coordinator's response");
      if (cert.evidence.size() != 1) return CertCheck::reject("exactly one response expected");
      const SignedMessage& resp = cert.evidence.front();
      if (resp.kind != MsgKind::Response || resp.round != ctx.round)
        return CertCheck::reject("quoted message is not this round's response");
      if (resp.sender != coordinator_of(ctx.round, params))
        return CertCheck::reject("quoted response not from the coordinator");
      if (!(resp.value == ctx.value)) return CertCheck::reject("relayed value differs");
      if (!verify_message(auth, resp)) return CertCheck::reject("response signature invalid");
      if (!cert.nested) return CertCheck::reject("missing the value's own chain");
      if (resp.cert_digest != digest_of(*cert.nested))
        return CertCheck::reject("chain does not match the response's digest");
      return validate_estimate_proof(*cert.nested, ctx.value, ctx.round,
                                     coordinator_of(ctx.round, params), params, auth, muts);
    }

    case MsgKind::Filt1: {
      if (cert.kind != CertKind::RelayQuorum)
        return CertCheck::reject("first filter needs a relay quorum");
      if (auto c = check_evidence(cert, MsgKind::Relay, ctx.round, params, auth); !c.ok) return c;
      ValueSet vs = evidence_values(cert);
      if (ctx.value.is_bottom()) {
        if (vs.single_non_bottom())
          return CertCheck::reject("quorum pins a single value, bottom not justified");
        return CertCheck::accept();
      }
      if (auto v = vs.single_non_bottom(); v && *v == ctx.value) return CertCheck::accept();
      return CertCheck::reject("quorum does not pin this value");
    }

    case MsgKind::Filt2: {
      if (cert.kind != CertKind::Filt1Quorum)
        return CertCheck::reject("second filter needs a filt1 quorum");
      if (auto c = check_evidence(cert, MsgKind::Filt1, ctx.round, params, auth); !c.ok) return c;
      ValueSet vs = evidence_values(cert);
#if BWCONS_MUTATIONS
      if (muts.phase3_any_value) {
        if (ctx.value.is_bottom()) {
          if (vs.all_bottom()) return CertCheck::accept();
          return CertCheck::reject("a value was present");
        }
        if (vs.contains(ctx.value)) return CertCheck::accept();
        return CertCheck::reject("value absent from quorum");
      }
#else
      (void)muts;
#endif
      if (ctx.value.is_bottom()) {
        if (auto v = vs.unanimous(); v && !v->is_bottom())
          return CertCheck::reject("unanimous quorum, bottom not justified");
        return CertCheck::accept();
      }
      if (auto v = vs.unanimous(); v && *v == ctx.value) return CertCheck::accept();
      return CertCheck::reject("quorum not unanimous for this value");
    }

    case MsgKind::Dec: {
      if (cert.kind != CertKind::DecQuorum)
        return CertCheck::reject("decision needs a dec quorum");
      if (ctx.value.is_bottom()) return CertCheck::reject("bottom is never decided");
      if (auto c = check_evidence(cert, MsgKind::Filt2, ctx.round, params, auth); !c.ok) return c;
      for (const auto& e : cert.evidence)
        if (!(e.value == ctx.value)) return CertCheck::reject("quorum carries a different value");
      return CertCheck::accept();
    }
  }
  return CertCheck::reject("unknown carrier");
}

FilterResult Daemon::filter(const SignedMessage& m, std::uint32_t current_round) {
  if (!params_.valid_pid(m.sender))
    return {false, DiscardReason::Malformed, "sender out of range"};
  if (!verify_message(*auth_, m)) return {false, DiscardReason::BadSignature, "signature check failed"};

  const bool is_init = m.kind == MsgKind::Init;
  if (is_init && m.round != 0) return {false, DiscardReason::Malformed, "proposal with a round"};
  if (!is_init && m.round < 1) return {false, DiscardReason::Malformed, "round missing"};

  switch (m.kind) {
    case MsgKind::Init:
    case MsgKind::Query:
      if (m.value.is_bottom()) return {false, DiscardReason::Malformed, "bottom proposal"};
      break;
    default:
      break;
  }

  // Staleness. Proposals matter only before round 1; phase traffic for
  // rounds already left behind is useless to this process. Queries must
  // stay answerable and decision notices are never stale.
  switch (m.kind) {
    case MsgKind::Init:
      if (current_round >= 1) return {false, DiscardReason::StaleRound, "already past the proposal exchange"};
      break;
    case MsgKind::Response:
    case MsgKind::Relay:
    case MsgKind::Filt1:
    case MsgKind::Filt2:
      if (m.round < current_round) return {false, DiscardReason::StaleRound, "round already left"};
      break;
    case MsgKind::Query:
    case MsgKind::Dec:
      break;
  }

  auto key = std::make_tuple(m.sender.index, static_cast<std::uint8_t>(m.kind), m.round);
  if (seen_.count(key)) return {false, DiscardReason::Duplicate, "already accepted one of these"};

  const bool needs_cert = [&] {
    switch (m.kind) {
      case MsgKind::Init: return false;
      case MsgKind::Response: return m.sender == coordinator_of(m.round, params_);
      default: return true;
    }
  }();
  if (needs_cert) {
    if (!m.certificate)
      return {false, DiscardReason::MissingCertificate, "certificate required"};
    if (m.cert_digest != digest_of(*m.certificate))
      return {false, DiscardReason::BadCertificate, "certificate digest mismatch"};
    CertContext ctx{m.kind, m.round, m.sender, m.value};
    CertCheck c = validate_certificate(*m.certificate, ctx, params_, *auth_, muts_);
    if (!c.ok) return {false, DiscardReason::BadCertificate, c.detail};
  }

  seen_.insert(key);
  return {true, DiscardReason::Malformed, {}};
}

}  // namespace bwcons
