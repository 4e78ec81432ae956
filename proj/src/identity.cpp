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

#include "pbag/identity.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>

#include "pbag/counters.hpp"
#include "pbag/error.hpp"
#include "sodium_init.hpp"

namespace pbag::identity {

using detail::ensure_sodium;

namespace {

// Encoding of the ristretto255 base point.
constexpr std::array<uint8_t, 32> kBasepoint = {
    0xe2, 0xf2, 0xae, 0x0a, 0x6a, 0xbc, 0x4e, 0x71, 0xa8, 0x84, 0xa9, 0x61, 0xc5, 0x00, 0x51, 0x5f,
    0x58, 0xe3, 0x0b, 0x6a, 0xa5, 0x82, 0xdd, 0x8d, 0xb6, 0xa6, 0x59, 0x45, 0xe0, 0x8d, 0x2d, 0x76};

std::array<uint8_t, 16> personal(std::string_view label) {
  std::array<uint8_t, 16> p{};
  std::memcpy(p.data(), label.data(), std::min(label.size(), p.size()));
  return p;
}

template <size_t N>
std::array<uint8_t, N> blake2b(ByteSpan input, std::string_view label, ByteSpan key = {}) {
  ensure_sodium();
  std::array<uint8_t, N> out{};
  auto pers = personal(label);
  crypto_generichash_blake2b_salt_personal(out.data(), N, input.data(), input.size(),
                                           key.empty() ? nullptr : key.data(), key.size(),
                                           nullptr, pers.data());
  return out;
}

Scalar challenge(const std::array<uint8_t, 32>& r, const Point& pk, ByteSpan message) {
  crypto_hash_sha512_state st;
  crypto_hash_sha512_init(&st);
  static constexpr std::string_view kLabel = "pbag.schnorr.v1";
  crypto_hash_sha512_update(&st, reinterpret_cast<const uint8_t*>(kLabel.data()), kLabel.size());
  crypto_hash_sha512_update(&st, r.data(), r.size());
  crypto_hash_sha512_update(&st, pk.bytes().data(), pk.bytes().size());
  crypto_hash_sha512_update(&st, message.data(), message.size());
  std::array<uint8_t, 64> wide{};
  crypto_hash_sha512_final(&st, wide.data());
  return Scalar::from_wide(wide);
}

bool all_zero(ByteSpan b) {
  return std::all_of(b.begin(), b.end(), [](uint8_t x) { return x == 0; });
}

}  // namespace

// ---- Scalar ----

Scalar::Scalar(uint64_t small) : v_{} {
  for (size_t i = 0; i < 8; ++i) v_[i] = static_cast<uint8_t>(small >> (8 * i));
}

Scalar Scalar::from_bytes(ByteSpan le32) {
  if (le32.size() != kBytes) throw Error(ErrorCode::kMalformedInput, "scalar length");
  std::array<uint8_t, 64> wide{};
  std::copy(le32.begin(), le32.end(), wide.begin());
  Scalar s = from_wide(wide);
  if (!std::equal(le32.begin(), le32.end(), s.v_.begin())) {
    throw Error(ErrorCode::kMalformedInput, "non-canonical scalar");
  }
  return s;
}

Scalar Scalar::from_wide(ByteSpan le64) {
  ensure_sodium();
  if (le64.size() != 64) throw Error(ErrorCode::kMalformedInput, "wide scalar length");
  Scalar s;
  crypto_core_ristretto255_scalar_reduce(s.v_.data(), le64.data());
  return s;
}

Scalar Scalar::random(Drbg& rng) {
  for (;;) {
    std::array<uint8_t, 64> wide{};
    rng.fill(wide);
    Scalar s = from_wide(wide);
    sodium_memzero(wide.data(), wide.size());
    if (!s.is_zero()) return s;
  }
}

bool Scalar::is_zero() const { return all_zero(v_); }

bool Scalar::is_one() const { return *this == Scalar(1); }

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar out;
  crypto_core_ristretto255_scalar_add(out.v_.data(), v_.data(), o.v_.data());
  return out;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar out;
  crypto_core_ristretto255_scalar_sub(out.v_.data(), v_.data(), o.v_.data());
  return out;
}

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar out;
  crypto_core_ristretto255_scalar_mul(out.v_.data(), v_.data(), o.v_.data());
  return out;
}

FieldScalar Scalar::to_field() const {
  std::array<uint8_t, kBytes> be{};
  std::reverse_copy(v_.begin(), v_.end(), be.begin());
  return FieldScalar::from_bytes(be);
}

// ---- Point ----

Point Point::generator() {
  Point p;
  p.v_ = kBasepoint;
  return p;
}

Point Point::base_mult(const Scalar& s) {
  ensure_sodium();
  OpCounters::global().add_ec_mult();
  Point out;
  if (crypto_scalarmult_ristretto255_base(out.v_.data(), s.bytes().data()) != 0) out.v_.fill(0);
  return out;
}

Point Point::from_bytes(ByteSpan enc) {
  ensure_sodium();
  if (enc.size() != kBytes || all_zero(enc) ||
      crypto_core_ristretto255_is_valid_point(enc.data()) != 1) {
    throw Error(ErrorCode::kInvalidPoint, "not a ristretto255 element");
  }
  Point p;
  std::copy(enc.begin(), enc.end(), p.v_.begin());
  return p;
}

Point Point::operator*(const Scalar& s) const {
  ensure_sodium();
  OpCounters::global().add_ec_mult();
  Point out;
  if (crypto_scalarmult_ristretto255(out.v_.data(), s.bytes().data(), v_.data()) != 0) {
    out.v_.fill(0);
  }
  return out;
}

Point Point::operator+(const Point& o) const {
  ensure_sodium();
  Point out;
  if (crypto_core_ristretto255_add(out.v_.data(), v_.data(), o.v_.data()) != 0) {
    throw Error(ErrorCode::kInvalidPoint, "addition operand");
  }
  return out;
}

Point Point::operator-(const Point& o) const {
  ensure_sodium();
  Point out;
  if (crypto_core_ristretto255_sub(out.v_.data(), v_.data(), o.v_.data()) != 0) {
    throw Error(ErrorCode::kInvalidPoint, "subtraction operand");
  }
  return out;
}

bool Point::is_identity() const { return all_zero(v_); }

// ---- keys, identities, signatures ----

KeyPair keygen(Drbg& rng) {
  KeyPair kp;
  kp.sk = Scalar::random(rng);
  kp.pk = Point::base_mult(kp.sk);
  return kp;
}

EncryptedId encrypt_id(std::string_view id, const Scalar& fsk) {
  if (id.size() != kIdLength) {
    throw Error(ErrorCode::kMalformedId, "expected " + std::to_string(kIdLength) + " bytes");
  }
  auto key = blake2b<crypto_aead_xchacha20poly1305_ietf_KEYBYTES>(fsk.bytes(), "pbag.eid.key");
  auto nonce_key = blake2b<32>(fsk.bytes(), "pbag.eid.nonce");
  auto nonce = blake2b<crypto_aead_xchacha20poly1305_ietf_NPUBBYTES>(as_bytes(id), "pbag.eid.iv",
                                                                      nonce_key);
  EncryptedId out;
  out.bytes.resize(EncryptedId::kBytes);
  std::copy(nonce.begin(), nonce.end(), out.bytes.begin());
  unsigned long long clen = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(out.bytes.data() + nonce.size(), &clen,
                                             reinterpret_cast<const uint8_t*>(id.data()),
                                             id.size(), nullptr, 0, nullptr, nonce.data(),
                                             key.data());
  sodium_memzero(key.data(), key.size());
  sodium_memzero(nonce_key.data(), nonce_key.size());
  return out;
}

std::string decrypt_id(const EncryptedId& e_id, const Scalar& fsk) {
  if (e_id.bytes.size() != EncryptedId::kBytes) {
    throw Error(ErrorCode::kDecryptionFailed, "ciphertext length");
  }
  auto key = blake2b<crypto_aead_xchacha20poly1305_ietf_KEYBYTES>(fsk.bytes(), "pbag.eid.key");
  constexpr size_t kNonce = crypto_aead_xchacha20poly1305_ietf_NPUBBYTES;
  std::string id(kIdLength, '\0');
  unsigned long long mlen = 0;
  int rc = crypto_aead_xchacha20poly1305_ietf_decrypt(
      reinterpret_cast<uint8_t*>(id.data()), &mlen, nullptr, e_id.bytes.data() + kNonce,
      e_id.bytes.size() - kNonce, nullptr, 0, e_id.bytes.data(), key.data());
  sodium_memzero(key.data(), key.size());
  if (rc != 0 || mlen != kIdLength) throw Error(ErrorCode::kDecryptionFailed);
  return id;
}

Signature sign(ByteSpan message, const Scalar& sk) {
  ensure_sodium();
  Point pk = Point::base_mult(sk);
  auto prefix = blake2b<32>(sk.bytes(), "pbag.sig.nonce");
  crypto_hash_sha512_state st;
  crypto_hash_sha512_init(&st);
  crypto_hash_sha512_update(&st, prefix.data(), prefix.size());
  crypto_hash_sha512_update(&st, message.data(), message.size());
  std::array<uint8_t, 64> wide{};
  crypto_hash_sha512_final(&st, wide.data());
  Scalar k = Scalar::from_wide(wide);
  sodium_memzero(prefix.data(), prefix.size());
  sodium_memzero(wide.data(), wide.size());

  Point r = Point::base_mult(k);
  Scalar s = k + challenge(r.bytes(), pk, message) * sk;
  Signature sig{};
  std::copy(r.bytes().begin(), r.bytes().end(), sig.begin());
  std::copy(s.bytes().begin(), s.bytes().end(), sig.begin() + 32);
  return sig;
}

bool check_sig(const Point& pk, const Signature& sigma, ByteSpan message) {
  ensure_sodium();
  if (pk.is_identity()) return false;
  Point r;
  Scalar s;
  try {
    r = Point::from_bytes(ByteSpan(sigma).first(32));
    s = Scalar::from_bytes(ByteSpan(sigma).subspan(32));
  } catch (const Error&) {
    return false;
  }
  Point lhs = Point::base_mult(s);
  Point rhs = r + pk * challenge(r.bytes(), pk, message);
  return lhs == rhs;
}

// ---- clipping and u ----

FieldScalar clip(ByteSpan input, unsigned out_bits) {
  if (out_bits < 1 || out_bits > 254) {
    throw Error(ErrorCode::kOversizedTruncation, std::to_string(out_bits) + " bits");
  }
  Digest h = sha256(input);
  const unsigned shift = 256 - out_bits;
  const unsigned byte_shift = shift / 8, bit_shift = shift % 8;
  std::array<uint8_t, 32> be{};
  for (int i = 31; i >= 0; --i) {
    int src = i - static_cast<int>(byte_shift);
    unsigned v = 0;
    if (src >= 0) v |= h[src] >> bit_shift;
    if (src >= 1 && bit_shift != 0) v |= (h[src - 1] << (8 - bit_shift)) & 0xff;
    be[i] = static_cast<uint8_t>(v);
  }
  return FieldScalar::from_bytes(be);
}

FieldScalar ledger_key(const EncryptedId& e_id) { return clip(e_id.bytes, kComponentBits); }

FieldScalar compose_u(const FieldScalar& e, const FieldScalar& p) {
  constexpr size_t kLow = kComponentBits / 8;  // 15 bytes per component
  auto eb = e.to_bytes(), pb = p.to_bytes();
  auto fits = [](const std::array<uint8_t, 32>& b) {
    return std::all_of(b.begin(), b.end() - kLow, [](uint8_t x) { return x == 0; });
  };
  if (!fits(eb) || !fits(pb)) throw Error(ErrorCode::kOversizedTruncation, "component width");
  std::array<uint8_t, 32> out{};
  std::copy(eb.end() - kLow, eb.end(), out.end() - 2 * kLow);
  std::copy(pb.end() - kLow, pb.end(), out.end() - kLow);
  return FieldScalar::from_bytes(out);
}

FieldScalar derive_u(const EncryptedId& e_id, const Point& npk) {
  return compose_u(clip(e_id.bytes, kComponentBits), clip(npk.bytes(), kComponentBits));
}

FieldScalar blinding_value(const Point& published) { return clip(published.bytes(), kBlindBits); }

BlindedU blind_u(const FieldScalar& u, const Scalar& r, const Point& npk) {
  if (r.is_zero() || r.is_one()) throw Error(ErrorCode::kDegenerateBlinder);
  BlindedU out;
  out.published = npk * r;
  out.u_prime = u - blinding_value(out.published);
  return out;
}

// ---- serialization ----

Bytes Certificate::serialize() const {
  ByteWriter w;
  w.var(e_id.bytes);
  w.u8(static_cast<uint8_t>(op_tag));
  w.var(npk.bytes());
  w.u64(t_expired);
  w.var(sigma);
  return std::move(w).take();
}

Certificate Certificate::deserialize(ByteSpan data) {
  ByteReader r(data);
  Certificate c;
  c.e_id.bytes = r.var(EncryptedId::kBytes);
  if (c.e_id.bytes.size() != EncryptedId::kBytes) {
    throw Error(ErrorCode::kMalformedInput, "encrypted id length");
  }
  uint8_t tag = r.u8();
  if (tag > static_cast<uint8_t>(OpTag::kRevoke)) throw Error(ErrorCode::kMalformedInput, "op tag");
  c.op_tag = static_cast<OpTag>(tag);
  c.npk = Point::from_bytes(r.var(Point::kBytes));
  c.t_expired = r.u64();
  Bytes sig = r.var(64);
  if (sig.size() != 64) throw Error(ErrorCode::kMalformedInput, "signature length");
  std::copy(sig.begin(), sig.end(), c.sigma.begin());
  r.expect_done();
  return c;
}

Bytes ParameterSet::serialize() const {
  ByteWriter w;
  w.u32(static_cast<uint32_t>(index));
  w.raw(omega_i.to_bytes());
  w.raw(u_i.to_bytes());
  w.raw(g_omega.to_bytes());
  w.raw(g_u.to_bytes());
  w.raw(proof.element.to_bytes());
  w.raw(update_key.rho.to_bytes());
  w.raw(update_key.mu.to_bytes());
  return std::move(w).take();
}

ParameterSet ParameterSet::deserialize(ByteSpan data) {
  using curve::G1Point;
  using curve::G2Point;
  ByteReader r(data);
  ParameterSet p;
  p.index = r.u32();
  p.omega_i = FieldScalar::from_bytes(r.raw(32));
  p.u_i = FieldScalar::from_bytes(r.raw(32));
  p.g_omega = G2Point::from_bytes(r.raw(G2Point::kCompressedBytes));
  p.g_u = G1Point::from_bytes(r.raw(G1Point::kCompressedBytes));
  p.proof.element = G1Point::from_bytes(r.raw(G1Point::kCompressedBytes));
  p.update_key.index = p.index;
  p.update_key.omega_i = p.omega_i;
  p.update_key.rho = G1Point::from_bytes(r.raw(G1Point::kCompressedBytes));
  p.update_key.mu = G1Point::from_bytes(r.raw(G1Point::kCompressedBytes));
  r.expect_done();
  return p;
}

}  // namespace pbag::identity
