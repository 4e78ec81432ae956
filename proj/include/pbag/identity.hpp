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

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "pbag/algebra/field.hpp"
#include "pbag/bytes.hpp"
#include "pbag/curve.hpp"
#include "pbag/kzg.hpp"
#include "pbag/rng.hpp"

/// Vehicle and authority key material on ristretto255, encrypted identities,
/// Schnorr signatures, and derivation of the committed value u.
namespace pbag::identity {

using algebra::FieldScalar;

/// Scalar modulo the ristretto255 group order l (little-endian, canonical).
class Scalar {
 public:
  static constexpr size_t kBytes = 32;

  Scalar() : v_{} {}
  explicit Scalar(uint64_t small);

  /// Throws kMalformedInput unless canonical.
  static Scalar from_bytes(ByteSpan le32);
  /// Reduces 64 little-endian bytes modulo l.
  static Scalar from_wide(ByteSpan le64);
  /// Uniform non-zero scalar.
  static Scalar random(Drbg& rng);

  const std::array<uint8_t, kBytes>& bytes() const { return v_; }
  bool is_zero() const;
  bool is_one() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  bool operator==(const Scalar& o) const = default;

  /// Same integer viewed in the pairing scalar field (l < r, so no reduction).
  FieldScalar to_field() const;

 private:
  std::array<uint8_t, kBytes> v_;
};

/// ristretto255 element; the all-zero encoding is the identity.
class Point {
 public:
  static constexpr size_t kBytes = 32;

  Point() : v_{} {}
  static Point generator();
  /// s * P. Counted as one signature-curve multiplication.
  static Point base_mult(const Scalar& s);
  /// Throws kInvalidPoint for non-canonical encodings and for the identity.
  static Point from_bytes(ByteSpan enc);

  /// Counted as one signature-curve multiplication.
  Point operator*(const Scalar& s) const;
  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;
  bool operator==(const Point& o) const = default;

  bool is_identity() const;
  const std::array<uint8_t, kBytes>& bytes() const { return v_; }

 private:
  std::array<uint8_t, kBytes> v_;
};

struct KeyPair {
  Scalar sk;
  Point pk;
};
/// Offline/master pair held by the authority (fsk, fpk).
using MasterKeyPair = KeyPair;
/// Per-vehicle online pair (nsk, npk).
using OnlineKeyPair = KeyPair;

KeyPair keygen(Drbg& rng);

/// Length of the plate+VIN composite identity.
inline constexpr size_t kIdLength = 18;

/// Deterministic authenticated ciphertext of a real identity: nonce || ct || tag.
struct EncryptedId {
  static constexpr size_t kBytes = 24 + kIdLength + 16;
  Bytes bytes;
  bool operator==(const EncryptedId&) const = default;
};

/// Throws kMalformedId unless id has exactly kIdLength bytes.
EncryptedId encrypt_id(std::string_view id, const Scalar& fsk);
/// Throws kDecryptionFailed on a wrong key or tampered ciphertext.
std::string decrypt_id(const EncryptedId& e_id, const Scalar& fsk);

/// R || s, 64 bytes.
using Signature = std::array<uint8_t, 64>;

/// Schnorr signature with a deterministic nonce.
Signature sign(ByteSpan message, const Scalar& sk);
/// False on any malformed component.
bool check_sig(const Point& pk, const Signature& sigma, ByteSpan message);

/// First out_bits bits of SHA-256(input) as a big-endian integer.
/// Throws kOversizedTruncation unless 1 <= out_bits <= 254.
FieldScalar clip(ByteSpan input, unsigned out_bits);

/// Bits per component of u.
inline constexpr unsigned kComponentBits = 120;
/// Width of the session blinding value RP.
inline constexpr unsigned kBlindBits = 240;

/// Ledger key: clip(E_id, 120).
FieldScalar ledger_key(const EncryptedId& e_id);

/// (e << 120) + p for two 120-bit components. Throws kOversizedTruncation otherwise.
FieldScalar compose_u(const FieldScalar& e, const FieldScalar& p);
/// u = (clip(E_id, 120) << 120) + clip(npk, 120).
FieldScalar derive_u(const EncryptedId& e_id, const Point& npk);

/// RP = clip(published, 240).
FieldScalar blinding_value(const Point& published);

struct BlindedU {
  FieldScalar u_prime;  // u - RP
  Point published;      // r * npk
};
/// Throws kDegenerateBlinder when r is 0 or 1.
BlindedU blind_u(const FieldScalar& u, const Scalar& r, const Point& npk);

enum class OpTag : uint8_t { kIssue = 0, kUpdate = 1, kRevoke = 2 };

struct Certificate {
  EncryptedId e_id;
  OpTag op_tag = OpTag::kIssue;
  Point npk;
  uint64_t t_expired = 0;
  Signature sigma{};  // authority signature over e_id

  Bytes serialize() const;
  /// Throws kMalformedInput.
  static Certificate deserialize(ByteSpan data);
  bool operator==(const Certificate&) const = default;
};

/// Private authentication material for one committed slot.
struct ParameterSet {
  size_t index = 0;
  FieldScalar omega_i;
  FieldScalar u_i;
  curve::G2Point g_omega;
  curve::G1Point g_u;
  kzg::EvaluationProof proof;
  kzg::UpdateKey update_key;

  Bytes serialize() const;
  /// Throws kMalformedInput or kInvalidGroupElement.
  static ParameterSet deserialize(ByteSpan data);
  bool operator==(const ParameterSet&) const = default;
};

}  // namespace pbag::identity
