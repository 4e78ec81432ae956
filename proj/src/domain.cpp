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

#include "pbag/algebra/domain.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "pbag/error.hpp"

namespace pbag::algebra {

namespace {

// (r - 1) / n for n = 2^log_n, as little-endian limbs.
std::array<uint64_t, 4> order_cofactor(unsigned log_n) {
  auto e = (-FieldScalar::one()).to_limbs();
  for (unsigned s = 0; s < log_n; ++s) {
    for (int i = 0; i < 4; ++i) {
      e[i] = (e[i] >> 1) | (i < 3 ? (e[i + 1] << 63) : 0);
    }
  }
  return e;
}

void check_indices(std::span<const size_t> indices, const EvaluationDomain& domain) {
  if (indices.empty()) throw Error(ErrorCode::kEmptyIndexSet);
  std::set<size_t> seen;
  for (size_t i : indices) {
    if (i >= domain.size()) throw Error(ErrorCode::kIndexOutOfDomain, std::to_string(i));
    if (!seen.insert(i).second) throw Error(ErrorCode::kDuplicateIndex, std::to_string(i));
  }
}

size_t bit_reverse(size_t x, unsigned bits) {
  size_t r = 0;
  for (unsigned b = 0; b < bits; ++b) r |= ((x >> b) & 1) << (bits - 1 - b);
  return r;
}

void fft_in_place(std::vector<FieldScalar>& a, const FieldScalar& root) {
  const size_t n = a.size();
  const unsigned bits = static_cast<unsigned>(std::countr_zero(n));
  for (size_t i = 0; i < n; ++i) {
    size_t j = bit_reverse(i, bits);
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const FieldScalar step = root.pow(n / len);
    for (size_t start = 0; start < n; start += len) {
      FieldScalar w = FieldScalar::one();
      for (size_t k = 0; k < len / 2; ++k) {
        FieldScalar u = a[start + k];
        FieldScalar v = a[start + k + len / 2] * w;
        a[start + k] = u + v;
        a[start + k + len / 2] = u - v;
        w *= step;
      }
    }
  }
}

}  // namespace

EvaluationDomain roots_of_unity(size_t n) {
  if (n == 0 || !std::has_single_bit(n)) {
    throw Error(ErrorCode::kNonPowerOfTwo, std::to_string(n));
  }
  const unsigned log_n = static_cast<unsigned>(std::countr_zero(n));
  if (log_n > FieldScalar::kTwoAdicity) {
    throw Error(ErrorCode::kNoRootOfOrderN, std::to_string(n));
  }

  EvaluationDomain d;
  d.omega_ = FieldScalar::multiplicative_generator().pow(order_cofactor(log_n));
  d.omega_inv_ = d.omega_.inverse();
  d.size_inv_ = FieldScalar(n).inverse();
  d.elements_.reserve(n);
  FieldScalar x = FieldScalar::one();
  for (size_t i = 0; i < n; ++i) {
    d.elements_.push_back(x);
    d.index_.emplace(x, i);
    x *= d.omega_;
  }
  return d;
}

std::optional<size_t> EvaluationDomain::index_of(const FieldScalar& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<FieldScalar> EvaluationDomain::fft(std::vector<FieldScalar> coeffs) const {
  if (coeffs.size() > size()) throw Error(ErrorCode::kDegreeTooLarge);
  coeffs.resize(size());
  fft_in_place(coeffs, omega_);
  return coeffs;
}

Polynomial EvaluationDomain::ifft(std::vector<FieldScalar> evals) const {
  if (evals.size() != size()) throw Error(ErrorCode::kWrongEvaluationCount);
  fft_in_place(evals, omega_inv_);
  for (auto& c : evals) c *= size_inv_;
  return Polynomial(std::move(evals));
}

Polynomial EvaluationDomain::lagrange_basis(size_t i) const {
  if (i >= size()) throw Error(ErrorCode::kIndexOutOfDomain, std::to_string(i));
  std::vector<FieldScalar> evals(size());
  evals[i] = FieldScalar::one();
  return ifft(std::move(evals));
}

Polynomial vanishing_poly(std::span<const size_t> indices, const EvaluationDomain& domain) {
  check_indices(indices, domain);
  std::vector<FieldScalar> roots;
  roots.reserve(indices.size());
  for (size_t i : indices) roots.push_back(domain.element(i));
  return from_roots(roots);
}

FieldScalar derivative_at_root(std::span<const size_t> indices, size_t i,
                               const EvaluationDomain& domain) {
  check_indices(indices, domain);
  if (std::find(indices.begin(), indices.end(), i) == indices.end()) {
    throw Error(ErrorCode::kIndexNotInSet, std::to_string(i));
  }
  const FieldScalar& x = domain.element(i);
  FieldScalar acc = FieldScalar::one();
  for (size_t j : indices) {
    if (j != i) acc *= x - domain.element(j);
  }
  return acc;
}

std::map<size_t, FieldScalar> partial_fraction_coeffs(std::span<const size_t> indices,
                                                      const EvaluationDomain& domain) {
  check_indices(indices, domain);
  std::map<size_t, FieldScalar> out;
  if (indices.size() == domain.size()) {
    // D = X^n - 1, D'(w^i) = n w^-i, so c_i = w^i / n.
    for (size_t i : indices) out.emplace(i, domain.element(i) * domain.size_inv());
    return out;
  }
  std::vector<FieldScalar> derivs;
  derivs.reserve(indices.size());
  for (size_t i : indices) derivs.push_back(derivative_at_root(indices, i, domain));
  auto inv = batch_inverse(derivs);
  for (size_t k = 0; k < indices.size(); ++k) out.emplace(indices[k], inv[k]);
  return out;
}

}  // namespace pbag::algebra
