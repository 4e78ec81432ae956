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

#include "pbag/algebra/field.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

#include "pbag/error.hpp"

namespace pbag::algebra {

FieldScalar::FieldScalar(uint64_t small) {
  const uint64_t limbs[4] = {small, 0, 0, 0};
  blst_fr_from_uint64(&v_, limbs);
}

FieldScalar FieldScalar::from_bytes(ByteSpan be32) {
  if (be32.size() != kBytes) throw Error(ErrorCode::kNonCanonicalScalar, "expected 32 bytes");
  blst_scalar s;
  blst_scalar_from_bendian(&s, be32.data());
  if (!blst_scalar_fr_check(&s)) {
    // fr_check rejects zero as well; zero is a legitimate field element here.
    bool all_zero = std::all_of(be32.begin(), be32.end(), [](uint8_t b) { return b == 0; });
    if (!all_zero) throw Error(ErrorCode::kNonCanonicalScalar, "scalar not below field order");
    return FieldScalar();
  }
  FieldScalar out;
  blst_fr_from_scalar(&out.v_, &s);
  return out;
}

FieldScalar FieldScalar::from_bytes_reduce(ByteSpan be) {
  blst_scalar s;
  blst_scalar_from_be_bytes(&s, be.data(), be.size());
  FieldScalar out;
  blst_fr_from_scalar(&out.v_, &s);
  return out;
}

FieldScalar FieldScalar::random(Drbg& rng) {
  std::array<uint8_t, 64> buf{};
  rng.fill(buf);
  return from_bytes_reduce(buf);
}

std::array<uint8_t, FieldScalar::kBytes> FieldScalar::to_bytes() const {
  blst_scalar s;
  blst_scalar_from_fr(&s, &v_);
  std::array<uint8_t, kBytes> out{};
  blst_bendian_from_scalar(out.data(), &s);
  return out;
}

blst_scalar FieldScalar::to_blst_scalar() const {
  blst_scalar s;
  blst_scalar_from_fr(&s, &v_);
  return s;
}

std::string FieldScalar::to_hex() const {
  auto b = to_bytes();
  return pbag::to_hex(b);
}

bool FieldScalar::is_zero() const {
  static const blst_fr kZero{};
  return std::memcmp(&v_, &kZero, sizeof(v_)) == 0;
}

FieldScalar FieldScalar::operator+(const FieldScalar& o) const {
  FieldScalar out;
  blst_fr_add(&out.v_, &v_, &o.v_);
  return out;
}

FieldScalar FieldScalar::operator-(const FieldScalar& o) const {
  FieldScalar out;
  blst_fr_sub(&out.v_, &v_, &o.v_);
  return out;
}

FieldScalar FieldScalar::operator*(const FieldScalar& o) const {
  FieldScalar out;
  blst_fr_mul(&out.v_, &v_, &o.v_);
  return out;
}

FieldScalar FieldScalar::operator-() const {
  FieldScalar out;
  blst_fr_cneg(&out.v_, &v_, true);
  return out;
}

FieldScalar FieldScalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::kZeroInverse);
  FieldScalar out;
  blst_fr_eucl_inverse(&out.v_, &v_);
  return out;
}

FieldScalar FieldScalar::pow(uint64_t e) const {
  return pow(std::array<uint64_t, 4>{e, 0, 0, 0});
}

FieldScalar FieldScalar::pow(const std::array<uint64_t, 4>& e) const {
  FieldScalar acc = one();
  for (int limb = 3; limb >= 0; --limb) {
    for (int bit = 63; bit >= 0; --bit) {
      acc = acc * acc;
      if ((e[limb] >> bit) & 1) acc = acc * *this;
    }
  }
  return acc;
}

bool FieldScalar::operator==(const FieldScalar& o) const {
  return std::memcmp(&v_, &o.v_, sizeof(v_)) == 0;
}

std::array<uint64_t, 4> FieldScalar::to_limbs() const {
  std::array<uint64_t, 4> out{};
  blst_uint64_from_fr(out.data(), &v_);
  return out;
}

std::vector<FieldScalar> batch_inverse(std::span<const FieldScalar> xs) {
  std::vector<FieldScalar> prefix(xs.size());
  FieldScalar acc = FieldScalar::one();
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].is_zero()) throw Error(ErrorCode::kZeroInverse, "batch inverse of zero");
    prefix[i] = acc;
    acc *= xs[i];
  }
  FieldScalar inv = acc.inverse();
  std::vector<FieldScalar> out(xs.size());
  for (size_t i = xs.size(); i-- > 0;) {
    out[i] = inv * prefix[i];
    inv *= xs[i];
  }
  return out;
}

size_t FieldScalarHash::operator()(const FieldScalar& x) const {
  auto limbs = x.to_limbs();
  return std::hash<uint64_t>{}(limbs[0] ^ (limbs[1] * 0x9e3779b97f4a7c15ULL) ^ limbs[2] ^ limbs[3]);
}

}  // namespace pbag::algebra
