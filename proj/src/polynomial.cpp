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

#include "pbag/algebra/polynomial.hpp"

#include <unordered_set>

#include "pbag/error.hpp"

namespace pbag::algebra {

Polynomial::Polynomial(std::vector<FieldScalar> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

void Polynomial::normalize() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Polynomial Polynomial::constant(const FieldScalar& c) { return Polynomial({c}); }

Polynomial Polynomial::linear_root(const FieldScalar& root) {
  return Polynomial({-root, FieldScalar::one()});
}

Polynomial Polynomial::monomial(size_t degree, const FieldScalar& c) {
  std::vector<FieldScalar> v(degree + 1);
  v[degree] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::random(size_t degree, Drbg& rng) {
  std::vector<FieldScalar> v(degree + 1);
  for (auto& c : v) c = FieldScalar::random(rng);
  while (v.back().is_zero()) v.back() = FieldScalar::random(rng);
  return Polynomial(std::move(v));
}

FieldScalar Polynomial::evaluate(const FieldScalar& x) const {
  FieldScalar acc;
  for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<FieldScalar> v(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * FieldScalar(i);
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<FieldScalar> v(std::max(coeffs_.size(), o.coeffs_.size()));
  for (size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) + o.coeff(i);
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  std::vector<FieldScalar> v(std::max(coeffs_.size(), o.coeffs_.size()));
  for (size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) - o.coeff(i);
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<FieldScalar> v(coeffs_.size() + o.coeffs_.size() - 1);
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    for (size_t j = 0; j < o.coeffs_.size(); ++j) v[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator*(const FieldScalar& c) const {
  std::vector<FieldScalar> v(coeffs_);
  for (auto& x : v) x *= c;
  return Polynomial(std::move(v));
}

std::pair<Polynomial, FieldScalar> Polynomial::divide_by_linear(const FieldScalar& root) const {
  if (coeffs_.empty()) return {Polynomial(), FieldScalar()};
  std::vector<FieldScalar> q(coeffs_.size() - 1);
  FieldScalar carry;
  for (size_t i = coeffs_.size(); i-- > 0;) {
    carry = carry * root + coeffs_[i];
    if (i > 0) q[i - 1] = carry;
  }
  return {Polynomial(std::move(q)), carry};
}

DivisionResult poly_divide(const Polynomial& numerator, const Polynomial& divisor) {
  if (divisor.is_zero()) throw Error(ErrorCode::kDivisionByZeroPolynomial);
  if (numerator.degree() < divisor.degree()) return {Polynomial(), numerator};

  std::vector<FieldScalar> rem = numerator.coeffs();
  const auto& d = divisor.coeffs();
  const size_t dd = d.size() - 1;
  const FieldScalar lead_inv = d.back().inverse();
  std::vector<FieldScalar> q(rem.size() - dd);
  for (size_t k = q.size(); k-- > 0;) {
    FieldScalar t = rem[k + dd] * lead_inv;
    q[k] = t;
    if (t.is_zero()) continue;
    for (size_t j = 0; j <= dd; ++j) rem[k + j] -= t * d[j];
  }
  rem.resize(dd);
  return {Polynomial(std::move(q)), Polynomial(std::move(rem))};
}

Polynomial from_roots(std::span<const FieldScalar> roots) {
  std::vector<FieldScalar> v{FieldScalar::one()};
  v.reserve(roots.size() + 1);
  for (const auto& root : roots) {
    // v <- v * (X - root)
    v.push_back(FieldScalar());
    for (size_t i = v.size() - 1; i > 0; --i) v[i] = v[i - 1] - v[i] * root;
    v[0] = -(v[0] * root);
  }
  return Polynomial(std::move(v));
}

Polynomial interpolate(std::span<const std::pair<FieldScalar, FieldScalar>> points) {
  if (points.empty()) return {};
  std::unordered_set<FieldScalar, FieldScalarHash> seen;
  std::vector<FieldScalar> xs;
  xs.reserve(points.size());
  for (const auto& [x, y] : points) {
    if (!seen.insert(x).second) throw Error(ErrorCode::kDuplicateAbscissa, x.to_hex());
    xs.push_back(x);
  }

  // Barycentric weights w_i = 1 / prod_{j != i} (x_i - x_j).
  std::vector<FieldScalar> denom(xs.size(), FieldScalar::one());
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t j = 0; j < xs.size(); ++j) {
      if (i != j) denom[i] *= xs[i] - xs[j];
    }
  }
  auto weights = batch_inverse(denom);

  // sum_i y_i w_i * D(X) / (X - x_i)
  const Polynomial full = from_roots(xs);
  std::vector<FieldScalar> acc(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    const FieldScalar scale = points[i].second * weights[i];
    if (scale.is_zero()) continue;
    auto [q, r] = full.divide_by_linear(xs[i]);
    for (size_t k = 0; k < q.coeffs().size(); ++k) acc[k] += q.coeffs()[k] * scale;
  }
  return Polynomial(std::move(acc));
}

}  // namespace pbag::algebra
