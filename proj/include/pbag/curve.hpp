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
#include <span>
#include <vector>

#include "pbag/algebra/field.hpp"
#include "pbag/bytes.hpp"

extern "C" {
#include "blst.h"
}

namespace pbag::curve {

using algebra::FieldScalar;

/// Element of the BLS12-381 G1 subgroup (Jacobian coordinates).
class G1Point {
 public:
  static constexpr size_t kCompressedBytes = 48;

  G1Point() : p_{} {}  // identity
  static G1Point identity() { return {}; }
  static G1Point generator();
  /// generator^s
  static G1Point from_scalar(const FieldScalar& s) { return generator() * s; }

  G1Point operator+(const G1Point& o) const;
  G1Point operator-(const G1Point& o) const;
  G1Point operator-() const;
  G1Point& operator+=(const G1Point& o) { return *this = *this + o; }
  /// Scalar multiplication; counted as one G1 exponentiation.
  G1Point operator*(const FieldScalar& s) const;

  bool is_identity() const;
  bool operator==(const G1Point& o) const;

  std::array<uint8_t, kCompressedBytes> to_bytes() const;
  /// Rejects off-curve and out-of-subgroup encodings with kInvalidGroupElement.
  static G1Point from_bytes(ByteSpan compressed);

  blst_p1_affine to_affine() const;
  /// Wraps a point produced by blst arithmetic (no validation).
  static G1Point from_raw(const blst_p1& p) { return G1Point(p); }
  const blst_p1& raw() const { return p_; }

 private:
  explicit G1Point(const blst_p1& p) : p_(p) {}
  blst_p1 p_;
};

/// Element of the BLS12-381 G2 subgroup.
class G2Point {
 public:
  static constexpr size_t kCompressedBytes = 96;

  G2Point() : p_{} {}
  static G2Point identity() { return {}; }
  static G2Point generator();
  static G2Point from_scalar(const FieldScalar& s) { return generator() * s; }

  G2Point operator+(const G2Point& o) const;
  G2Point operator-(const G2Point& o) const;
  G2Point operator-() const;
  G2Point& operator+=(const G2Point& o) { return *this = *this + o; }
  G2Point operator*(const FieldScalar& s) const;

  bool is_identity() const;
  bool operator==(const G2Point& o) const;

  std::array<uint8_t, kCompressedBytes> to_bytes() const;
  static G2Point from_bytes(ByteSpan compressed);

  blst_p2_affine to_affine() const;
  static G2Point from_raw(const blst_p2& p) { return G2Point(p); }
  const blst_p2& raw() const { return p_; }

 private:
  explicit G2Point(const blst_p2& p) : p_(p) {}
  blst_p2 p_;
};

/// sum_i scalars[i] * points[i] (Pippenger). Sizes must match. `bits` may be
/// lowered when every scalar is known to be below 2^bits.
G1Point msm(std::span<const G1Point> points, std::span<const FieldScalar> scalars,
            size_t bits = 255);
G2Point msm(std::span<const G2Point> points, std::span<const FieldScalar> scalars,
            size_t bits = 255);

/// Precomputed window tables for a fixed list of bases. msm() accepts any
/// prefix of the bases, which fits commitments to polynomials of any degree.
class FixedBaseG1 {
 public:
  explicit FixedBaseG1(std::span<const G1Point> bases);
  G1Point msm(std::span<const FieldScalar> scalars) const;
  size_t size() const { return size_; }

 private:
  size_t size_ = 0;
  std::vector<blst_p1_affine> table_;
};

class FixedBaseG2 {
 public:
  explicit FixedBaseG2(std::span<const G2Point> bases);
  G2Point msm(std::span<const FieldScalar> scalars) const;
  size_t size() const { return size_; }

 private:
  size_t size_ = 0;
  std::vector<blst_p2_affine> table_;
};

/// e(a1, b1) == e(a2, b2), evaluated as two Miller loops and one final exponentiation.
/// Adds exactly 2 to the pairing counter.
bool pairings_equal(const G1Point& a1, const G2Point& b1, const G1Point& a2, const G2Point& b2);

}  // namespace pbag::curve
