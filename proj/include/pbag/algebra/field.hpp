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
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pbag/bytes.hpp"
#include "pbag/rng.hpp"

extern "C" {
#include "blst.h"
}

namespace pbag::algebra {

/// Element of the BLS12-381 scalar field Z_r, r ~ 2^255, with r - 1 divisible by 2^32.
/// Stored in Montgomery form; all arithmetic is exact.
class FieldScalar {
 public:
  static constexpr size_t kBytes = 32;
  /// 2-adicity of r - 1.
  static constexpr unsigned kTwoAdicity = 32;

  FieldScalar() : v_{} {}
  explicit FieldScalar(uint64_t small);

  static FieldScalar zero() { return FieldScalar(); }
  static FieldScalar one() { return FieldScalar(1); }
  /// Multiplicative generator of Z_r^* (7).
  static FieldScalar multiplicative_generator() { return FieldScalar(7); }

  /// Canonical 32-byte big-endian decoding; throws kNonCanonicalScalar when >= r.
  static FieldScalar from_bytes(ByteSpan be32);
  /// Big-endian bytes of any length, reduced modulo r.
  static FieldScalar from_bytes_reduce(ByteSpan be);
  /// Uniform element (64 random bytes reduced).
  static FieldScalar random(Drbg& rng);

  std::array<uint8_t, kBytes> to_bytes() const;
  /// Little-endian 256-bit integer, as blst scalar multiplication expects.
  blst_scalar to_blst_scalar() const;
  std::string to_hex() const;

  bool is_zero() const;

  FieldScalar operator+(const FieldScalar& o) const;
  FieldScalar operator-(const FieldScalar& o) const;
  FieldScalar operator*(const FieldScalar& o) const;
  FieldScalar operator/(const FieldScalar& o) const { return *this * o.inverse(); }
  FieldScalar operator-() const;
  FieldScalar& operator+=(const FieldScalar& o) { return *this = *this + o; }
  FieldScalar& operator-=(const FieldScalar& o) { return *this = *this - o; }
  FieldScalar& operator*=(const FieldScalar& o) { return *this = *this * o; }

  /// Throws kZeroInverse on zero.
  FieldScalar inverse() const;
  FieldScalar pow(uint64_t e) const;
  /// Exponent given as a little-endian 256-bit integer.
  FieldScalar pow(const std::array<uint64_t, 4>& e) const;

  bool operator==(const FieldScalar& o) const;

  /// Integer value as little-endian 64-bit limbs (canonical, < r).
  std::array<uint64_t, 4> to_limbs() const;

 private:
  blst_fr v_;
};

/// Montgomery batch inversion; throws kZeroInverse if any input is zero.
std::vector<FieldScalar> batch_inverse(std::span<const FieldScalar> xs);

struct FieldScalarHash {
  size_t operator()(const FieldScalar& x) const;
};

}  // namespace pbag::algebra
