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

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pbag/bytes.hpp"
#include "pbag/curve.hpp"
#include "pbag/identity.hpp"
#include "pbag/kzg.hpp"
#include "pbag/rng.hpp"

/// Message authentication tuples for untrusted (blinded) and trusted (plain)
/// verifiers, batch verification, and authority-side tracing.
namespace pbag::auth {

using algebra::FieldScalar;
using curve::G1Point;
using curve::G2Point;
using identity::Point;
using identity::Scalar;

inline constexpr uint64_t kDefaultWindow = 300;
/// Bytes of E_A: clipped ledger key then a 64-bit big-endian timestamp.
inline constexpr size_t kTraceBytes = identity::kComponentBits / 8 + 8;
inline constexpr size_t kMacBytes = 32;

/// What a certified vehicle keeps in its on-board unit.
struct Credential {
  identity::EncryptedId e_id;
  identity::KeyPair online;
  identity::ParameterSet params;
};

/// Ephemeral blinding state of the sender for one authentication.
struct SessionContext {
  Scalar r;
  Point published;       // r * npk
  Point peer_published;  // r_B * npk_B

  /// Samples r outside {0, 1}.
  static SessionContext start(Drbg& rng, const Point& npk, const Point& peer_published);
  /// Uses the given blinder as is; generation rejects degenerate values.
  static SessionContext with_blinder(const Scalar& r, const Point& npk,
                                     const Point& peer_published);
  /// Fresh blinder after a completed authentication.
  void rotate(Drbg& rng, const Point& npk);
};

/// Receiving party: long-term online key plus its own session blinder.
struct Verifier {
  identity::KeyPair key;
  Scalar r;
  Point published;  // r * npk_B

  static Verifier create(Drbg& rng);
};

struct AuthTupleBlinded {
  G1Point pi_au;         // pi^(r-1)
  G2Point g_omega_au;    // (g^omega)^r
  G1Point g_u_prime_au;  // g^(u') * pi_au^omega
  G2Point g_r_minus_1;   // g^(r-1)
  Bytes e_a;
  Bytes m_a;
  Bytes message;
  uint64_t timestamp = 0;

  Bytes serialize() const;
  /// Throws kParseFailure.
  static AuthTupleBlinded deserialize(ByteSpan data);
  bool operator==(const AuthTupleBlinded&) const = default;
};

struct AuthTuplePlain {
  FieldScalar omega;
  FieldScalar u;
  G2Point g_omega;
  G1Point g_u;
  kzg::EvaluationProof proof;
  Bytes e_a;
  Bytes m_a;
  Bytes message;
  uint64_t timestamp = 0;

  Bytes serialize() const;
  /// Throws kParseFailure.
  static AuthTuplePlain deserialize(ByteSpan data);
  bool operator==(const AuthTuplePlain&) const = default;
};

enum class Verdict {
  kAccept,
  kStale,          // timestamp outside the freshness window
  kDegenerate,     // identity element or zero value where none is allowed
  kUnknownIndex,   // omega is not a domain element
  kInconsistent,   // g^u or g^omega does not match the scalar beside it
  kMaskMismatch,   // M_A check failed
  kPairingMismatch,
};

std::string_view to_string(Verdict v);

struct VerifyResult {
  Verdict verdict = Verdict::kAccept;
  explicit operator bool() const { return verdict == Verdict::kAccept; }
};

struct VerifyClock {
  uint64_t now = 0;
  uint64_t window = kDefaultWindow;
  bool fresh(uint64_t t) const;
};

/// Throws kDegenerateBlinder when the session blinder is 0 or 1.
AuthTupleBlinded gen_auth_untrusted(const Credential& cred, const SessionContext& session,
                                    const Point& fpk, ByteSpan message, uint64_t t);

VerifyResult verify_auth_untrusted(const kzg::PublicParameters& pp, const kzg::Commitment& c,
                                   const AuthTupleBlinded& tuple, const Verifier& verifier,
                                   const Point& sender_published, const VerifyClock& clock);

AuthTuplePlain gen_auth_trusted(const Credential& cred, const SessionContext& session,
                                const Point& fpk, ByteSpan message, uint64_t t);

VerifyResult verify_auth_trusted(const kzg::PublicParameters& pp, const kzg::Commitment& c,
                                 const AuthTuplePlain& tuple, const Verifier& verifier,
                                 const Point& sender_published, const VerifyClock& clock);

struct BatchItem {
  AuthTuplePlain tuple;
  Point sender_published;
};

struct BatchResult {
  bool ok = false;
  /// Positions of the rejected items, ascending. Empty when ok.
  std::vector<size_t> offenders;
};

/// Per-item freshness and mask checks, a randomized consistency check of the
/// group elements, then one aggregated opening check. On failure the batch is
/// bisected to isolate offenders. Throws kDuplicateIndexInBatch. `rng` draws the
/// combination weights; entropy is used when null.
BatchResult batch_verify_trusted(const kzg::PublicParameters& pp, const kzg::Commitment& c,
                                 std::span<const BatchItem> items, const Verifier& verifier,
                                 const VerifyClock& clock, Drbg* rng = nullptr);

struct TraceResult {
  FieldScalar e_id_clip;
  uint64_t timestamp = 0;
};

/// Unmasks E_A with the authority key. A foreign key yields an unrelated ledger
/// key. Throws kParseFailure on a wrong length.
TraceResult trace(ByteSpan e_a, const Point& sender_published, const Scalar& fsk);

}  // namespace pbag::auth
