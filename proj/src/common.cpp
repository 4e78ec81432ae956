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

#include <sodium.h>

#include <algorithm>
#include <cstring>

#include "pbag/bytes.hpp"
#include "pbag/counters.hpp"
#include "pbag/error.hpp"
#include "pbag/rng.hpp"
#include "sodium_init.hpp"

namespace pbag {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonPowerOfTwo: return "NonPowerOfTwo";
    case ErrorCode::kNoRootOfOrderN: return "NoRootOfOrderN";
    case ErrorCode::kDuplicateAbscissa: return "DuplicateAbscissa";
    case ErrorCode::kDivisionByZeroPolynomial: return "DivisionByZeroPolynomial";
    case ErrorCode::kEmptyIndexSet: return "EmptyIndexSet";
    case ErrorCode::kIndexOutOfDomain: return "IndexOutOfDomain";
    case ErrorCode::kIndexNotInSet: return "IndexNotInSet";
    case ErrorCode::kZeroInverse: return "ZeroInverse";
    case ErrorCode::kNonCanonicalScalar: return "NonCanonicalScalar";
    case ErrorCode::kUnsupportedDomainSize: return "UnsupportedDomainSize";
    case ErrorCode::kDegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::kWrongEvaluationCount: return "WrongEvaluationCount";
    case ErrorCode::kDuplicateIndex: return "DuplicateIndex";
    case ErrorCode::kSameIndex: return "SameIndex";
    case ErrorCode::kInvalidGroupElement: return "InvalidGroupElement";
    case ErrorCode::kMalformedId: return "MalformedId";
    case ErrorCode::kDecryptionFailed: return "DecryptionFailed";
    case ErrorCode::kOversizedTruncation: return "OversizedTruncation";
    case ErrorCode::kDegenerateBlinder: return "DegenerateBlinder";
    case ErrorCode::kInvalidPoint: return "InvalidPoint";
    case ErrorCode::kAlreadyRegistered: return "AlreadyRegistered";
    case ErrorCode::kCapacityExhausted: return "CapacityExhausted";
    case ErrorCode::kInvalidRaSignature: return "InvalidRaSignature";
    case ErrorCode::kNotRegistered: return "NotRegistered";
    case ErrorCode::kOwnershipCheckFailed: return "OwnershipCheckFailed";
    case ErrorCode::kPendNeedsRaValidation: return "PendNeedsRaValidation";
    case ErrorCode::kIllegalTransition: return "IllegalTransition";
    case ErrorCode::kInvalidHolderProof: return "InvalidHolderProof";
    case ErrorCode::kCorruptState: return "CorruptState";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kDuplicateIndexInBatch: return "DuplicateIndexInBatch";
    case ErrorCode::kParseFailure: return "ParseFailure";
    case ErrorCode::kScriptReferenceError: return "ScriptReferenceError";
    case ErrorCode::kMalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

namespace detail {

void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium initialisation failed");
}

}  // namespace detail

using detail::ensure_sodium;

std::string to_hex(ByteSpan bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorCode::kMalformedInput, "odd-length hex string");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error(ErrorCode::kMalformedInput, "invalid hex digit");
  };
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

Bytes concat(std::initializer_list<ByteSpan> parts) {
  Bytes out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Digest sha256(ByteSpan data) {
  ensure_sodium();
  Digest out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

void ByteWriter::u16(uint16_t v) {
  u8(static_cast<uint8_t>(v >> 8));
  u8(static_cast<uint8_t>(v));
}

void ByteWriter::u32(uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) u8(static_cast<uint8_t>(v >> s));
}

void ByteWriter::u64(uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) u8(static_cast<uint8_t>(v >> s));
}

void ByteWriter::var(ByteSpan data) {
  u32(static_cast<uint32_t>(data.size()));
  raw(data);
}

ByteSpan ByteReader::raw(size_t n) {
  if (remaining() < n) throw Error(ErrorCode::kMalformedInput, "truncated input");
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

uint8_t ByteReader::u8() { return raw(1)[0]; }

uint16_t ByteReader::u16() {
  auto s = raw(2);
  return static_cast<uint16_t>(s[0] << 8 | s[1]);
}

uint32_t ByteReader::u32() {
  uint32_t v = 0;
  for (uint8_t b : raw(4)) v = v << 8 | b;
  return v;
}

uint64_t ByteReader::u64() {
  uint64_t v = 0;
  for (uint8_t b : raw(8)) v = v << 8 | b;
  return v;
}

Bytes ByteReader::var(size_t max_len) {
  uint32_t len = u32();
  if (len > max_len) throw Error(ErrorCode::kMalformedInput, "field length out of range");
  auto s = raw(len);
  return Bytes(s.begin(), s.end());
}

void ByteReader::expect_done() const {
  if (!done()) throw Error(ErrorCode::kMalformedInput, "trailing bytes");
}

Drbg::Drbg(uint64_t seed) {
  for (int i = 0; i < 8; ++i) seed_[i] = static_cast<uint8_t>(seed >> (8 * i));
  static constexpr std::string_view kTag = "pbag-drbg";
  std::copy(kTag.begin(), kTag.end(), seed_.begin() + 8);
}

Drbg Drbg::fork(std::string_view label) {
  ensure_sodium();
  std::array<uint8_t, 32> child{};
  auto salt = bytes(32);
  crypto_generichash(child.data(), child.size(), reinterpret_cast<const uint8_t*>(label.data()),
                     label.size(), salt.data(), salt.size());
  return Drbg(child);
}

void Drbg::fill(std::span<uint8_t> out) {
  ensure_sodium();
  // Each call draws from a fresh stream keyed by (seed, counter).
  std::array<uint8_t, 32> key{};
  std::array<uint8_t, 8> ctr{};
  for (int i = 0; i < 8; ++i) ctr[i] = static_cast<uint8_t>(counter_ >> (8 * i));
  ++counter_;
  crypto_generichash(key.data(), key.size(), ctr.data(), ctr.size(), seed_.data(), seed_.size());
  randombytes_buf_deterministic(out.data(), out.size(), key.data());
  sodium_memzero(key.data(), key.size());
}

Bytes Drbg::bytes(size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

uint64_t Drbg::next_u64() {
  std::array<uint8_t, 8> b{};
  fill(b);
  uint64_t v = 0;
  for (uint8_t x : b) v = v << 8 | x;
  return v;
}

uint64_t Drbg::uniform(uint64_t bound) {
  if (bound <= 1) return 0;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

Drbg Drbg::from_entropy() {
  ensure_sodium();
  std::array<uint8_t, 32> seed{};
  randombytes_buf(seed.data(), seed.size());
  return Drbg(seed);
}

OpCounters& OpCounters::global() {
  static OpCounters counters;
  return counters;
}

OpCounts OpCounters::snapshot() const {
  return {pairings_.load(), g1_.load(), g2_.load(), ec_.load(), msm_.load(), hash_.load()};
}

void OpCounters::reset() {
  pairings_ = 0;
  g1_ = 0;
  g2_ = 0;
  ec_ = 0;
  msm_ = 0;
  hash_ = 0;
}

}  // namespace pbag
