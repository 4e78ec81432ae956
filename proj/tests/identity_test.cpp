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

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <set>

#include "pbag/counters.hpp"
#include "pbag/error.hpp"
#include "pbag/identity.hpp"

namespace pbag::identity {
namespace {

using boost::multiprecision::cpp_int;

cpp_int to_int(const FieldScalar& x) {
  auto b = x.to_bytes();
  cpp_int v;
  boost::multiprecision::import_bits(v, b.begin(), b.end(), 8, true);
  return v;
}

// Hash prefix taken with big-integer arithmetic instead of byte surgery.
cpp_int clip_oracle(ByteSpan input, unsigned bits) {
  auto h = sha256(input);
  cpp_int v;
  boost::multiprecision::import_bits(v, h.begin(), h.end(), 8, true);
  return v >> (256 - bits);
}

std::string fleet_id(size_t k) {
  std::string id = "VIN" + std::to_string(k);
  id.resize(kIdLength, 'X');
  return id;
}

template <typename Fn>
void expect_error(ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(ScalarTest, FieldViewAndCanonicalDecoding) {
  EXPECT_EQ(Scalar(12345).to_field(), FieldScalar(12345));
  Drbg rng(1);
  auto s = Scalar::random(rng);
  EXPECT_EQ(Scalar::from_bytes(s.bytes()), s);
  std::array<uint8_t, 32> high{};
  high.fill(0xff);
  expect_error(ErrorCode::kMalformedInput, [&] { Scalar::from_bytes(high); });
  EXPECT_EQ(Scalar(7) - Scalar(9) + Scalar(2), Scalar());
}

TEST(PointTest, RejectsIdentityAndGarbage) {
  std::array<uint8_t, 32> zero{};
  expect_error(ErrorCode::kInvalidPoint, [&] { Point::from_bytes(zero); });
  auto bad = Point::generator().bytes();
  bad[0] ^= 1;
  expect_error(ErrorCode::kInvalidPoint, [&] { Point::from_bytes(bad); });
  EXPECT_EQ(Point::base_mult(Scalar(1)), Point::generator());
  EXPECT_EQ(Point::base_mult(Scalar(3)), Point::generator() * Scalar(2) + Point::generator());
}

TEST(KeygenTest, DeterministicFromSeed) {
  Drbg a(42), b(42);
  auto ka = keygen(a), kb = keygen(b);
  EXPECT_EQ(ka.sk, kb.sk);
  EXPECT_EQ(ka.pk, kb.pk);
  EXPECT_EQ(Point::from_bytes(ka.pk.bytes()), ka.pk);
  EXPECT_EQ(ka.pk, Point::generator() * ka.sk);
}

TEST(KeygenTest, NoDuplicateScalarsOverThousandDraws) {
  Drbg rng(43);
  std::set<std::array<uint8_t, 32>> seen;
  for (int k = 0; k < 1000; ++k) {
    auto kp = keygen(rng);
    EXPECT_FALSE(kp.sk.is_zero());
    seen.insert(kp.sk.bytes());
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(EncryptIdTest, RoundTripAndFixedLength) {
  Drbg rng(44);
  auto ra = keygen(rng);
  const std::string id = "ABC1234WVW9Z000001";
  auto e = encrypt_id(id, ra.sk);
  EXPECT_EQ(e.bytes.size(), EncryptedId::kBytes);
  EXPECT_EQ(decrypt_id(e, ra.sk), id);
  EXPECT_EQ(encrypt_id(id, ra.sk), e);
}

TEST(EncryptIdTest, DistinctIdsDistinctCiphertexts) {
  Drbg rng(45);
  auto ra = keygen(rng);
  std::set<Bytes> seen;
  for (size_t k = 0; k < 200; ++k) seen.insert(encrypt_id(fleet_id(k), ra.sk).bytes);
  EXPECT_EQ(seen.size(), 200u);
}

TEST(EncryptIdTest, WrongKeyAndTamperFail) {
  Drbg rng(46);
  auto ra = keygen(rng), other = keygen(rng);
  auto e = encrypt_id(fleet_id(1), ra.sk);
  expect_error(ErrorCode::kDecryptionFailed, [&] { decrypt_id(e, other.sk); });
  auto tampered = e;
  tampered.bytes[30] ^= 0x20;
  expect_error(ErrorCode::kDecryptionFailed, [&] { decrypt_id(tampered, ra.sk); });
  auto truncated = e;
  truncated.bytes.pop_back();
  expect_error(ErrorCode::kDecryptionFailed, [&] { decrypt_id(truncated, ra.sk); });
}

TEST(EncryptIdTest, RejectsWrongLength) {
  Drbg rng(47);
  auto ra = keygen(rng);
  expect_error(ErrorCode::kMalformedId, [&] { encrypt_id("SHORT", ra.sk); });
  expect_error(ErrorCode::kMalformedId, [&] { encrypt_id(std::string(19, 'A'), ra.sk); });
}

TEST(SignatureTest, RoundTripAndEmptyMessage) {
  Drbg rng(48);
  auto kp = keygen(rng);
  auto sig = sign(as_bytes("hello"), kp.sk);
  EXPECT_TRUE(check_sig(kp.pk, sig, as_bytes("hello")));
  EXPECT_FALSE(check_sig(kp.pk, sig, as_bytes("hellp")));
  auto empty = sign({}, kp.sk);
  EXPECT_TRUE(check_sig(kp.pk, empty, {}));
  EXPECT_EQ(sign(as_bytes("hello"), kp.sk), sig);
}

TEST(SignatureTest, KeySwapAndMalformed) {
  Drbg rng(49);
  auto a = keygen(rng), b = keygen(rng);
  auto sig = sign(as_bytes("msg"), a.sk);
  EXPECT_FALSE(check_sig(b.pk, sig, as_bytes("msg")));
  EXPECT_FALSE(check_sig(Point(), sig, as_bytes("msg")));
  Signature zero{};
  EXPECT_FALSE(check_sig(a.pk, zero, as_bytes("msg")));
  auto high_s = sig;
  std::fill(high_s.begin() + 32, high_s.end(), 0xff);
  EXPECT_FALSE(check_sig(a.pk, high_s, as_bytes("msg")));
}

TEST(SignatureTest, ThousandMessagesWithBitFlips) {
  Drbg rng(50);
  auto kp = keygen(rng);
  int false_accepts = 0, false_rejects = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Bytes msg = rng.bytes(1 + rng.uniform(64));
    auto sig = sign(msg, kp.sk);
    false_rejects += !check_sig(kp.pk, sig, msg);
    Bytes flipped_msg = msg;
    flipped_msg[rng.uniform(msg.size())] ^= static_cast<uint8_t>(1u << rng.uniform(8));
    false_accepts += check_sig(kp.pk, sig, flipped_msg);
    auto flipped_sig = sig;
    flipped_sig[rng.uniform(64)] ^= static_cast<uint8_t>(1u << rng.uniform(8));
    false_accepts += check_sig(kp.pk, flipped_sig, msg);
  }
  EXPECT_EQ(false_rejects, 0);
  EXPECT_EQ(false_accepts, 0);
}

TEST(ClipTest, KnownVector) {
  // SHA-256("abc") = ba7816bf 8f01cfea 414140de 5dae2223 ...
  EXPECT_EQ(clip(as_bytes("abc"), 8), FieldScalar(0xba));
  EXPECT_EQ(clip(as_bytes("abc"), 12), FieldScalar(0xba7));
  EXPECT_EQ(clip(as_bytes("abc"), 1), FieldScalar(1));
  EXPECT_EQ(clip(as_bytes("abc"), 64), FieldScalar(0xba7816bf8f01cfeaULL));
  EXPECT_EQ(clip(as_bytes("abc"), 120).to_hex(),
            "0000000000000000000000000000000000ba7816bf8f01cfea414140de5dae22");
}

TEST(ClipTest, MatchesBigIntegerOracle) {
  Drbg rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    Bytes in = rng.bytes(rng.uniform(100));
    unsigned bits = 1 + static_cast<unsigned>(rng.uniform(254));
    EXPECT_EQ(to_int(clip(in, bits)), clip_oracle(in, bits)) << bits;
    EXPECT_EQ(clip(in, bits), clip(in, bits));
  }
}

TEST(ClipTest, SingleBitChangesOutput) {
  Drbg rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    Bytes in = rng.bytes(32);
    Bytes flipped = in;
    flipped[rng.uniform(32)] ^= static_cast<uint8_t>(1u << rng.uniform(8));
    EXPECT_NE(clip(in, 120), clip(flipped, 120));
  }
}

TEST(ClipTest, WidthBounds) {
  expect_error(ErrorCode::kOversizedTruncation, [] { clip(as_bytes("x"), 0); });
  expect_error(ErrorCode::kOversizedTruncation, [] { clip(as_bytes("x"), 255); });
  EXPECT_LT(to_int(clip(as_bytes("x"), 254)), cpp_int(1) << 254);
}

TEST(DeriveUTest, CompositionShape) {
  EXPECT_TRUE(compose_u(FieldScalar(), FieldScalar()).is_zero());
  EXPECT_EQ(to_int(compose_u(FieldScalar(1), FieldScalar())), cpp_int(1) << 120);
  auto too_wide = FieldScalar(2).pow(120);
  expect_error(ErrorCode::kOversizedTruncation, [&] { compose_u(too_wide, FieldScalar()); });
  expect_error(ErrorCode::kOversizedTruncation, [&] { compose_u(FieldScalar(), too_wide); });
}

TEST(DeriveUTest, MatchesConcatenationOracle) {
  Drbg rng(53);
  auto ra = keygen(rng);
  for (int trial = 0; trial < 50; ++trial) {
    auto e = encrypt_id(fleet_id(trial), ra.sk);
    auto v = keygen(rng);
    cpp_int expected = (clip_oracle(e.bytes, 120) << 120) + clip_oracle(v.pk.bytes(), 120);
    auto u = derive_u(e, v.pk);
    EXPECT_EQ(to_int(u), expected);
    EXPECT_LT(to_int(u), cpp_int(1) << 240);
    EXPECT_EQ(to_int(ledger_key(e)), clip_oracle(e.bytes, 120));
  }
}

TEST(DeriveUTest, NoCollisionsAcrossTenThousandVehicles) {
  Drbg rng(54);
  auto ra = keygen(rng);
  std::set<std::array<uint8_t, 32>> seen;
  for (size_t k = 0; k < 10000; ++k) {
    auto v = keygen(rng);
    seen.insert(derive_u(encrypt_id(fleet_id(k), ra.sk), v.pk).to_bytes());
  }
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(BlindUTest, RoundTripAndCost) {
  Drbg rng(55);
  auto v = keygen(rng);
  for (int trial = 0; trial < 20; ++trial) {
    auto u = FieldScalar::random(rng);
    auto r = Scalar::random(rng);
    CounterScope scope;
    auto b = blind_u(u, r, v.pk);
    EXPECT_EQ(scope.delta().ec_mults, 1u);
    EXPECT_EQ(b.published, v.pk * r);
    EXPECT_EQ(b.u_prime + blinding_value(b.published), u);
  }
}

TEST(BlindUTest, ForcedCancellation) {
  Drbg rng(56);
  auto v = keygen(rng);
  auto r = Scalar::random(rng);
  auto rp = blinding_value(v.pk * r);
  EXPECT_TRUE(blind_u(rp, r, v.pk).u_prime.is_zero());
  EXPECT_EQ(to_int(rp), clip_oracle((v.pk * r).bytes(), 240));
}

TEST(BlindUTest, SessionsUnlinkableAndDegenerateRejected) {
  Drbg rng(57);
  auto v = keygen(rng);
  auto u = FieldScalar::random(rng);
  auto a = blind_u(u, Scalar::random(rng), v.pk);
  auto b = blind_u(u, Scalar::random(rng), v.pk);
  EXPECT_NE(a.u_prime, b.u_prime);
  EXPECT_NE(a.published, b.published);
  expect_error(ErrorCode::kDegenerateBlinder, [&] { blind_u(u, Scalar(), v.pk); });
  expect_error(ErrorCode::kDegenerateBlinder, [&] { blind_u(u, Scalar(1), v.pk); });
}

TEST(CertificateTest, SerializationRoundTrip) {
  Drbg rng(58);
  auto ra = keygen(rng), v = keygen(rng);
  Certificate c;
  c.e_id = encrypt_id(fleet_id(7), ra.sk);
  c.op_tag = OpTag::kUpdate;
  c.npk = v.pk;
  c.t_expired = 1'800'000'000;
  c.sigma = sign(c.e_id.bytes, ra.sk);
  auto bytes = c.serialize();
  EXPECT_EQ(bytes.size(), 4 + EncryptedId::kBytes + 1 + 4 + 32 + 8 + 4 + 64);
  auto back = Certificate::deserialize(bytes);
  EXPECT_EQ(back, c);
  EXPECT_TRUE(check_sig(ra.pk, back.sigma, back.e_id.bytes));

  auto bad_tag = bytes;
  bad_tag[4 + EncryptedId::kBytes] = 9;
  expect_error(ErrorCode::kMalformedInput, [&] { Certificate::deserialize(bad_tag); });
  bytes.push_back(0);
  expect_error(ErrorCode::kMalformedInput, [&] { Certificate::deserialize(bytes); });
}

TEST(ParameterSetTest, SerializationRoundTrip) {
  Drbg rng(59);
  ParameterSet p;
  p.index = 5;
  p.omega_i = FieldScalar::random(rng);
  p.u_i = FieldScalar::random(rng);
  p.g_omega = curve::G2Point::from_scalar(p.omega_i);
  p.g_u = curve::G1Point::from_scalar(p.u_i);
  p.proof.element = curve::G1Point::from_scalar(FieldScalar::random(rng));
  p.update_key = {5, curve::G1Point::from_scalar(FieldScalar(3)), curve::G1Point(), p.omega_i};
  auto bytes = p.serialize();
  EXPECT_EQ(ParameterSet::deserialize(bytes), p);
  bytes.pop_back();
  expect_error(ErrorCode::kMalformedInput, [&] { ParameterSet::deserialize(bytes); });
}

}  // namespace
}  // namespace pbag::identity
