// Copyright 2026 The PBAG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pbag/auth.hpp"

#include <sodium.h>

#include <algorithm>
#include <map>
#include <set>

#include "pbag/counters.hpp"
#include "pbag/error.hpp"
#include "sodium_init.hpp"

namespace pbag::auth {

namespace {

constexpr uint8_t kTagPlain = 0x01;
constexpr uint8_t kTagBlinded = 0x02;

Bytes mask(const Point& p, std::string_view label, size_t len) {
  detail::ensure_sodium();
  std::array<uint8_t, crypto_generichash_blake2b_PERSONALBYTES> pers{};
  std::copy(label.begin(), label.end(), pers.begin());
  Bytes out(len);
  crypto_generichash_blake2b_salt_personal(out.data(), len, p.bytes().data(), p.bytes().size(),
                                           nullptr, 0, nullptr, pers.data());
  return out;
}

void xor_into(Bytes& dst, ByteSpan src) {
  for (size_t k = 0; k < dst.size(); ++k) dst[k] ^= src[k];
}

Digest message_digest(ByteSpan m, uint64_t t, ByteSpan e_a) {
  OpCounters::global().add_hash();
  ByteWriter w;
  w.raw(m);
  w.u64(t);
  w.raw(e_a);
  return sha256(w.bytes());
}

// E_A = mask((nsk * r) * fpk) XOR (clipped key || t).
Bytes make_e_a(const Credential& cred, const SessionContext& s, const Point& fpk, uint64_t t) {
  auto key = identity::ledger_key(cred.e_id).to_bytes();
  ByteWriter w;
  w.raw(ByteSpan(key).last(identity::kComponentBits / 8));
  w.u64(t);
  Bytes e_a = std::move(w).take();
  xor_into(e_a, mask(fpk * (cred.online.sk * s.r), "pbag.trace", kTraceBytes));
  return e_a;
}

// M_A = mask((r * nsk) * peer_published) XOR H(m || t || E_A).
Bytes make_m_a(const Credential& cred, const SessionContext& s, ByteSpan m, uint64_t t,
               ByteSpan e_a) {
  Bytes m_a = mask(s.peer_published * (s.r * cred.online.sk), "pbag.mac", kMacBytes);
  xor_into(m_a, message_digest(m, t, e_a));
  return m_a;
}

bool mask_ok(const Verifier& v, const Point& sender_published, ByteSpan e_a, ByteSpan m_a,
             ByteSpan m, uint64_t t) {
  if (e_a.size() != kTraceBytes || m_a.size() != kMacBytes) return false;
  Bytes expect = mask(sender_published * (v.r * v.key.sk), "pbag.mac", kMacBytes);
  xor_into(expect, message_digest(m, t, e_a));
  return crypto_verify_32(expect.data(), m_a.data()) == 0;
}

template <typename Fn>
auto parse(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseFailure) throw;
    throw Error(ErrorCode::kParseFailure, e.what());
  }
}

struct Prepared {
  size_t position;
  size_t index;
};

bool consistent(const kzg::PublicParameters& pp, std::span<const BatchItem> items,
                std::span<const Prepared> subset, Drbg& rng) {
  std::vector<FieldScalar> weights;
  std::vector<G1Point> g_us;
  FieldScalar sum_u;
  for (const auto& p : subset) {
    const auto& t = items[p.position].tuple;
    if (!(t.g_omega == pp.domain_g2[p.index])) return false;
    std::array<uint8_t, 16> w{};
    rng.fill(w);
    auto rho = FieldScalar::from_bytes_reduce(w);
    weights.push_back(rho);
    g_us.push_back(t.g_u);
    sum_u += rho * t.u;
  }
  return curve::msm(g_us, weights, 8 * sizeof(std::array<uint8_t, 16>)) ==
         G1Point::generator() * sum_u;
}

bool group_ok(const kzg::PublicParameters& pp, const kzg::Commitment& c,
              std::span<const BatchItem> items, std::span<const Prepared> subset, Drbg& rng) {
  if (!consistent(pp, items, subset, rng)) return false;
  std::vector<kzg::ProofItem> proofs;
  std::map<size_t, FieldScalar> evals;
  for (const auto& p : subset) {
    const auto& t = items[p.position].tuple;
    proofs.push_back({p.index, t.u, t.proof});
    evals.emplace(p.index, t.u);
  }
  return kzg::verify_multi(pp, c, evals, kzg::aggregate_proofs(pp, proofs));
}

void bisect(const kzg::PublicParameters& pp, const kzg::Commitment& c,
            std::span<const BatchItem> items, std::span<const Prepared> subset, Drbg& rng,
            std::vector<size_t>& offenders) {
  if (subset.size() == 1) {
    offenders.push_back(subset[0].position);
    return;
  }
  const size_t half = subset.size() / 2;
  for (auto part : {subset.first(half), subset.subspan(half)}) {
    if (!group_ok(pp, c, items, part, rng)) bisect(pp, c, items, part, rng, offenders);
  }
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kAccept: return "accept";
    case Verdict::kStale: return "stale";
    case Verdict::kDegenerate: return "degenerate";
    case Verdict::kUnknownIndex: return "unknown-index";
    case Verdict::kInconsistent: return "inconsistent";
    case Verdict::kMaskMismatch: return "mask-mismatch";
    case Verdict::kPairingMismatch: return "pairing-mismatch";
  }
  return "unknown";
}

bool VerifyClock::fresh(uint64_t t) const {
  return t + window >= now && t <= now + window;
}

// ---- sessions ----

SessionContext SessionContext::start(Drbg& rng, const Point& npk, const Point& peer_published) {
  Scalar r;
  do {
    r = Scalar::random(rng);
  } while (r.is_one());
  return with_blinder(r, npk, peer_published);
}

SessionContext SessionContext::with_blinder(const Scalar& r, const Point& npk,
                                            const Point& peer_published) {
  return {r, npk * r, peer_published};
}

void SessionContext::rotate(Drbg& rng, const Point& npk) {
  *this = start(rng, npk, peer_published);
}

Verifier Verifier::create(Drbg& rng) {
  Verifier v;
  v.key = identity::keygen(rng);
  do {
    v.r = Scalar::random(rng);
  } while (v.r.is_one());
  v.published = v.key.pk * v.r;
  return v;
}

// ---- wire formats ----

Bytes AuthTupleBlinded::serialize() const {
  ByteWriter w;
  w.u8(kTagBlinded);
  w.raw(pi_au.to_bytes());
  w.raw(g_omega_au.to_bytes());
  w.raw(g_u_prime_au.to_bytes());
  w.raw(g_r_minus_1.to_bytes());
  w.var(e_a);
  w.var(m_a);
  w.var(message);
  w.u64(timestamp);
  return std::move(w).take();
}

AuthTupleBlinded AuthTupleBlinded::deserialize(ByteSpan data) {
  return parse([&] {
    ByteReader r(data);
    if (r.u8() != kTagBlinded) throw Error(ErrorCode::kParseFailure, "tuple tag");
    AuthTupleBlinded t;
    t.pi_au = G1Point::from_bytes(r.raw(G1Point::kCompressedBytes));
    t.g_omega_au = G2Point::from_bytes(r.raw(G2Point::kCompressedBytes));
    t.g_u_prime_au = G1Point::from_bytes(r.raw(G1Point::kCompressedBytes));
    t.g_r_minus_1 = G2Point::from_bytes(r.raw(G2Point::kCompressedBytes));
    t.e_a = r.var(kTraceBytes);
    t.m_a = r.var(kMacBytes);
    t.message = r.var();
    t.timestamp = r.u64();
    r.expect_done();
    return t;
  });
}

Bytes AuthTuplePlain::serialize() const {
  ByteWriter w;
  w.u8(kTagPlain);
  w.raw(omega.to_bytes());
  w.raw(u.to_bytes());
  w.raw(g_omega.to_bytes());
  w.raw(g_u.to_bytes());
  w.raw(proof.element.to_bytes());
  w.var(e_a);
  w.var(m_a);
  w.var(message);
  w.u64(timestamp);
  return std::move(w).take();
}

AuthTuplePlain AuthTuplePlain::deserialize(ByteSpan data) {
  return parse([&] {
    ByteReader r(data);
    if (r.u8() != kTagPlain) throw Error(ErrorCode::kParseFailure, "tuple tag");
    AuthTuplePlain t;
    t.omega = FieldScalar::from_bytes(r.raw(32));
    t.u = FieldScalar::from_bytes(r.raw(32));
    t.g_omega = G2Point::from_bytes(r.raw(G2Point::kCompressedBytes));
    t.g_u = G1Point::from_bytes(r.raw(G1Point::kCompressedBytes));
    t.proof.element = G1Point::from_bytes(r.raw(G1Point::kCompressedBytes));
    t.e_a = r.var(kTraceBytes);
    t.m_a = r.var(kMacBytes);
    t.message = r.var();
    t.timestamp = r.u64();
    r.expect_done();
    return t;
  });
}

// ---- untrusted verifiers ----

AuthTupleBlinded gen_auth_untrusted(const Credential& cred, const SessionContext& session,
                                    const Point& fpk, ByteSpan message, uint64_t t) {
  if (session.r.is_zero() || session.r.is_one()) throw Error(ErrorCode::kDegenerateBlinder);
  const auto& p = cred.params;
  const FieldScalar r = session.r.to_field();
  const FieldScalar r_minus_1 = r - FieldScalar::one();
  const FieldScalar rp = identity::blinding_value(session.published);

  AuthTupleBlinded out;
  out.pi_au = p.proof.element * r_minus_1;
  out.g_omega_au = p.g_omega * r;
  out.g_u_prime_au = p.g_u + G1Point::generator() * (-rp) + out.pi_au * p.omega_i;
  out.g_r_minus_1 = G2Point::generator() * r_minus_1;
  out.e_a = make_e_a(cred, session, fpk, t);
  out.m_a = make_m_a(cred, session, message, t, out.e_a);
  out.message.assign(message.begin(), message.end());
  out.timestamp = t;
  return out;
}

VerifyResult verify_auth_untrusted(const kzg::PublicParameters& pp, const kzg::Commitment& c,
                                   const AuthTupleBlinded& tuple, const Verifier& verifier,
                                   const Point& sender_published, const VerifyClock& clock) {
  if (!clock.fresh(tuple.timestamp)) return {Verdict::kStale};
  if (tuple.pi_au.is_identity() || tuple.g_omega_au.is_identity() ||
      tuple.g_r_minus_1.is_identity() || sender_published.is_identity()) {
    return {Verdict::kDegenerate};
  }
  if (!mask_ok(verifier, sender_published, tuple.e_a, tuple.m_a, tuple.message, tuple.timestamp)) {
    return {Verdict::kMaskMismatch};
  }
  const G1Point g_au_u =
      G1Point::generator() * identity::blinding_value(sender_published) + tuple.g_u_prime_au;
  if (!curve::pairings_equal(c.element - g_au_u, tuple.g_r_minus_1, tuple.pi_au,
                             pp.g2_tau() - tuple.g_omega_au)) {
    return {Verdict::kPairingMismatch};
  }
  return {Verdict::kAccept};
}

// ---- trusted verifiers ----

AuthTuplePlain gen_auth_trusted(const Credential& cred, const SessionContext& session,
                                const Point& fpk, ByteSpan message, uint64_t t) {
  const auto& p = cred.params;
  AuthTuplePlain out;
  out.omega = p.omega_i;
  out.u = p.u_i;
  out.g_omega = p.g_omega;
  out.g_u = p.g_u;
  out.proof = p.proof;
  out.e_a = make_e_a(cred, session, fpk, t);
  out.m_a = make_m_a(cred, session, message, t, out.e_a);
  out.message.assign(message.begin(), message.end());
  out.timestamp = t;
  return out;
}

VerifyResult verify_auth_trusted(const kzg::PublicParameters& pp, const kzg::Commitment& c,
                                 const AuthTuplePlain& tuple, const Verifier& verifier,
                                 const Point& sender_published, const VerifyClock& clock) {
  if (!clock.fresh(tuple.timestamp)) return {Verdict::kStale};
  if (tuple.u.is_zero() || sender_published.is_identity()) return {Verdict::kDegenerate};
  if (!pp.domain.index_of(tuple.omega)) return {Verdict::kUnknownIndex};
  if (!(G1Point::generator() * tuple.u == tuple.g_u) ||
      !(G2Point::generator() * tuple.omega == tuple.g_omega)) {
    return {Verdict::kInconsistent};
  }
  if (!mask_ok(verifier, sender_published, tuple.e_a, tuple.m_a, tuple.message, tuple.timestamp)) {
    return {Verdict::kMaskMismatch};
  }
  if (!curve::pairings_equal(c.element - tuple.g_u, G2Point::generator(), tuple.proof.element,
                             pp.g2_tau() - tuple.g_omega)) {
    return {Verdict::kPairingMismatch};
  }
  return {Verdict::kAccept};
}

BatchResult batch_verify_trusted(const kzg::PublicParameters& pp, const kzg::Commitment& c,
                                 std::span<const BatchItem> items, const Verifier& verifier,
                                 const VerifyClock& clock, Drbg* rng) {
  std::set<std::array<uint8_t, 32>> seen;
  for (const auto& item : items) {
    if (!seen.insert(item.tuple.omega.to_bytes()).second) {
      throw Error(ErrorCode::kDuplicateIndexInBatch);
    }
  }
  Drbg local = rng ? rng->fork("batch") : Drbg::from_entropy();

  BatchResult result;
  std::vector<Prepared> candidates;
  for (size_t k = 0; k < items.size(); ++k) {
    const auto& t = items[k].tuple;
    auto index = pp.domain.index_of(t.omega);
    if (!clock.fresh(t.timestamp) || t.u.is_zero() || !index ||
        items[k].sender_published.is_identity() ||
        !mask_ok(verifier, items[k].sender_published, t.e_a, t.m_a, t.message, t.timestamp)) {
      result.offenders.push_back(k);
      continue;
    }
    candidates.push_back({k, *index});
  }
  if (!candidates.empty() && !group_ok(pp, c, items, candidates, local)) {
    bisect(pp, c, items, candidates, local, result.offenders);
  }
  std::sort(result.offenders.begin(), result.offenders.end());
  result.ok = result.offenders.empty();
  return result;
}

// ---- tracing ----

TraceResult trace(ByteSpan e_a, const Point& sender_published, const Scalar& fsk) {
  if (e_a.size() != kTraceBytes) throw Error(ErrorCode::kParseFailure, "E_A length");
  Bytes plain(e_a.begin(), e_a.end());
  xor_into(plain, mask(sender_published * fsk, "pbag.trace", kTraceBytes));
  std::array<uint8_t, 32> key{};
  constexpr size_t kKey = identity::kComponentBits / 8;
  std::copy(plain.begin(), plain.begin() + kKey, key.end() - kKey);
  ByteReader r(ByteSpan(plain).subspan(kKey));
  return {FieldScalar::from_bytes(key), r.u64()};
}

}  // namespace pbag::auth
