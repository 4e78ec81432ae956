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
#include <memory>
#include <span>
#include <vector>

#include "pbag/algebra/domain.hpp"
#include "pbag/algebra/polynomial.hpp"
#include "pbag/bytes.hpp"
#include "pbag/curve.hpp"
#include "pbag/rng.hpp"

/// KZG polynomial commitments over a roots-of-unity domain, with the update keys
/// that let proofs and commitments follow single-slot edits in constant time.
namespace pbag::kzg {

using algebra::EvaluationDomain;
using algebra::FieldScalar;
using algebra::IndexSet;
using algebra::Polynomial;
using curve::G1Point;
using curve::G2Point;

struct Commitment {
  G1Point element;
  bool operator==(const Commitment&) const = default;
};

struct EvaluationProof {
  G1Point element;
  bool operator==(const EvaluationProof&) const = default;
};

/// (rho_i, mu_i, omega^i) for slot `index`.
struct UpdateKey {
  size_t index = 0;
  G1Point rho;  // g^(D(tau) / (tau - omega^i)), D(X) = X^n - 1
  G1Point mu;   // g^((L_i(tau) - 1) / (tau - omega^i))
  FieldScalar omega_i;
  bool operator==(const UpdateKey&) const = default;
};

/// Structured reference string plus per-slot precomputation.
///
/// powers_g2 carries n + 1 entries (tau^0 .. tau^n) so that the full-domain
/// vanishing polynomial X^n - 1 can be committed in G2; every other vector has n.
/// The point vectors must not change once built: window tables over the powers
/// are cached on first use and shared with copies.
struct PublicParameters {
  size_t n = 0;
  EvaluationDomain domain;
  std::vector<G1Point> powers_g1;
  std::vector<G2Point> powers_g2;
  std::vector<G1Point> lagrange_g1;
  std::vector<G1Point> update_rho;
  std::vector<G1Point> update_mu;
  /// g2^(omega^i) for every slot. Derived on load, not serialized.
  std::vector<G2Point> domain_g2;

  UpdateKey update_key(size_t i) const;
  const curve::FixedBaseG1& g1_table() const;
  const curve::FixedBaseG2& g2_table() const;
  const G2Point& g2_tau() const { return powers_g2.at(1 % powers_g2.size()); }

  /// Versioned binary file image; see serialize_parameters().
  Bytes serialize() const;
  static PublicParameters deserialize(ByteSpan data);

  mutable std::shared_ptr<const curve::FixedBaseG1> g1_table_;
  mutable std::shared_ptr<const curve::FixedBaseG2> g2_table_;
};

/// Generates parameters for an n-slot domain. The secret exponent is sampled
/// from `rng` and wiped before returning. Throws kUnsupportedDomainSize.
PublicParameters setup(size_t n, Drbg& rng);

namespace detail {
/// Builds the parameters for a given secret exponent. Used by setup() and by
/// test fixtures that keep the exponent as an oracle.
PublicParameters setup_from_secret(size_t n, const FieldScalar& tau);
}  // namespace detail

/// C = g^(Psi(tau)) from coefficients. Throws kDegreeTooLarge when deg >= n.
Commitment commit(const PublicParameters& pp, const Polynomial& poly);
/// C = prod l_i^(u_i) from the n evaluations on the domain. Throws kWrongEvaluationCount.
Commitment commit_evaluations(const PublicParameters& pp, std::span<const FieldScalar> evals);

struct SingleOpening {
  FieldScalar value;
  EvaluationProof proof;
};

/// u_i = Psi(omega^i) and pi = g^(q(tau)), q = (Psi - u_i) / (X - omega^i).
SingleOpening prove_single(const PublicParameters& pp, const Polynomial& poly, size_t i);

/// Proofs for every slot. Naive per-slot division, O(n^2) field work overall.
std::vector<EvaluationProof> prove_all(const PublicParameters& pp, const Polynomial& poly);

/// e(C / g^y, g) == e(pi, g^tau / g^x). Exactly two pairings.
bool verify_single(const PublicParameters& pp, const Commitment& c, const FieldScalar& x,
                   const FieldScalar& y, const EvaluationProof& proof);

struct MultiOpening {
  std::map<size_t, FieldScalar> evals;
  EvaluationProof proof;
};

/// Opening of Psi at {omega^i : i in I}: Psi = D_I * q + R, proof = g^(q(tau)).
MultiOpening prove_multi(const PublicParameters& pp, const Polynomial& poly,
                         std::span<const size_t> indices);

struct ProofItem {
  size_t index;
  FieldScalar value;
  EvaluationProof proof;
};

/// pi_I = prod pi_i^(c_i), c_i = 1 / D_I'(omega^i). Throws kDuplicateIndex.
EvaluationProof aggregate_proofs(const PublicParameters& pp, std::span<const ProofItem> items);

/// e(C / g^(R(tau)), g) == e(pi_I, g^(D_I(tau))). Exactly two pairings for any |I|.
bool verify_multi(const PublicParameters& pp, const Commitment& c,
                  const std::map<size_t, FieldScalar>& evals, const EvaluationProof& proof);

/// C' = C * l_i^delta.
Commitment update_commitment(const PublicParameters& pp, const Commitment& c, size_t i,
                             const FieldScalar& delta);

/// Owner refresh after its own slot moved by delta: pi' = pi * mu_i^delta.
EvaluationProof update_proof_local(const EvaluationProof& proof, const UpdateKey& key,
                                   const FieldScalar& delta);

/// Correction element p_{i,j} = g^(L_j(tau) / (tau - omega^i)) built from the two
/// public update keys. Throws kSameIndex when i == j.
G1Point cross_update_element(const UpdateKey& key_i, const UpdateKey& key_j, size_t n);

/// Refresh of slot i's proof after slot j != i moved by delta: pi' = pi * p_{i,j}^delta.
EvaluationProof update_proof_other(const EvaluationProof& proof_i, const UpdateKey& key_i,
                                   const UpdateKey& key_j, const FieldScalar& delta, size_t n);

}  // namespace pbag::kzg
