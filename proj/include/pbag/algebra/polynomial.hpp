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

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pbag/algebra/field.hpp"

namespace pbag::algebra {

/// Dense univariate polynomial over Z_r, coefficients low-degree first.
/// Trailing zero coefficients are always stripped, so the zero polynomial has
/// an empty coefficient vector and degree() == kZeroDegree.
class Polynomial {
 public:
  static constexpr std::ptrdiff_t kZeroDegree = -1;

  Polynomial() = default;
  explicit Polynomial(std::vector<FieldScalar> coeffs);

  static Polynomial constant(const FieldScalar& c);
  /// X - root
  static Polynomial linear_root(const FieldScalar& root);
  static Polynomial monomial(size_t degree, const FieldScalar& c = FieldScalar::one());
  static Polynomial random(size_t degree, Drbg& rng);

  const std::vector<FieldScalar>& coeffs() const { return coeffs_; }
  std::ptrdiff_t degree() const { return static_cast<std::ptrdiff_t>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  FieldScalar coeff(size_t i) const { return i < coeffs_.size() ? coeffs_[i] : FieldScalar(); }

  FieldScalar evaluate(const FieldScalar& x) const;
  Polynomial derivative() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const FieldScalar& c) const;
  bool operator==(const Polynomial& o) const = default;

  /// Exact division by (X - root) via synthetic division; returns (quotient, remainder).
  std::pair<Polynomial, FieldScalar> divide_by_linear(const FieldScalar& root) const;

 private:
  void normalize();
  std::vector<FieldScalar> coeffs_;
};

struct DivisionResult {
  Polynomial quotient;
  Polynomial remainder;
};

/// Long division: numerator = divisor * quotient + remainder, deg(remainder) < deg(divisor).
/// Throws kDivisionByZeroPolynomial when divisor is zero.
DivisionResult poly_divide(const Polynomial& numerator, const Polynomial& divisor);

/// Unique polynomial of degree < |points| through the given (x, y) pairs.
/// Throws kDuplicateAbscissa when two x coincide.
Polynomial interpolate(std::span<const std::pair<FieldScalar, FieldScalar>> points);

/// Monic polynomial with the given roots.
Polynomial from_roots(std::span<const FieldScalar> roots);

}  // namespace pbag::algebra
