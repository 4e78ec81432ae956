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
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "pbag/algebra/field.hpp"
#include "pbag/algebra/polynomial.hpp"

namespace pbag::algebra {

/// Multiplicative subgroup {omega^i : i in [0, n)} of Z_r^*, n a power of two.
class EvaluationDomain {
 public:
  size_t size() const { return elements_.size(); }
  const FieldScalar& omega() const { return omega_; }
  const FieldScalar& omega_inv() const { return omega_inv_; }
  const FieldScalar& size_inv() const { return size_inv_; }
  const FieldScalar& element(size_t i) const { return elements_.at(i); }
  const std::vector<FieldScalar>& elements() const { return elements_; }

  /// Index i with omega^i == x, if x lies in the domain.
  std::optional<size_t> index_of(const FieldScalar& x) const;

  /// Coefficients -> evaluations over the domain (radix-2 FFT). deg < n required.
  std::vector<FieldScalar> fft(std::vector<FieldScalar> coeffs) const;
  /// Evaluations -> coefficients; the full-domain interpolation path.
  Polynomial ifft(std::vector<FieldScalar> evals) const;

  /// Lagrange basis polynomial L_i over this domain.
  Polynomial lagrange_basis(size_t i) const;

 private:
  friend EvaluationDomain roots_of_unity(size_t n);
  FieldScalar omega_, omega_inv_, size_inv_;
  std::vector<FieldScalar> elements_;
  std::unordered_map<FieldScalar, size_t, FieldScalarHash> index_;
};

/// Throws kNonPowerOfTwo or kNoRootOfOrderN (n > 2^32).
EvaluationDomain roots_of_unity(size_t n);

/// Sorted, duplicate-free index set I of [0, n).
using IndexSet = std::vector<size_t>;

/// D_I(X) = prod_{i in I} (X - omega^i). Throws kEmptyIndexSet, kIndexOutOfDomain.
Polynomial vanishing_poly(std::span<const size_t> indices, const EvaluationDomain& domain);

/// D_I'(omega^i) = prod_{j in I, j != i} (omega^i - omega^j); equals n * omega^-i for
/// the full domain. Throws kIndexNotInSet.
FieldScalar derivative_at_root(std::span<const size_t> indices, size_t i,
                               const EvaluationDomain& domain);

/// c_i = 1 / D_I'(omega^i), the partial-fraction coefficients of 1 / D_I(X).
std::map<size_t, FieldScalar> partial_fraction_coeffs(std::span<const size_t> indices,
                                                      const EvaluationDomain& domain);

}  // namespace pbag::algebra
