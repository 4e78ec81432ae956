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

#include "pbag/kzg.hpp"

#include <sodium.h>

#include <mutex>
#include <set>
#include <string>

#include "pbag/error.hpp"

namespace pbag::kzg {

namespace {

constexpr uint8_t kSrsMagic[4] = {'P', 'B', 'S', 'R'};
constexpr uint16_t kSrsVersion = 1;

void check_index(const PublicParameters& pp, size_t i) {
  if (i >= pp.n) throw Error(ErrorCode::kIndexOutOfDomain, std::to_string(i));
}

G1Point commit_coeffs_g1(const PublicParameters& pp, const Polynomial& poly) {
  if (poly.is_zero()) return G1Point::identity();
  if (static_cast<size_t>(poly.degree()) >= pp.powers_g1.size()) {
    throw Error(ErrorCode::kDegreeTooLarge, std::to_string(poly.degree()));
  }
  return pp.g1_table().msm(poly.coeffs());
}

G2Point commit_coeffs_g2(const PublicParameters& pp, const Polynomial& poly) {
  if (poly.is_zero()) return G2Point::identity();
  if (static_cast<size_t>(poly.degree()) >= pp.powers_g2.size()) {
    throw Error(ErrorCode::kDegreeTooLarge, std::to_string(poly.degree()));
  }
  return pp.g2_table().msm(poly.coeffs());
}

template <typename Point>
void write_points(ByteWriter& w, const std::vector<Point>& pts) {
  for (const auto& p : pts) w.raw(p.to_bytes());
}

template <typename Point>
std::vector<Point> read_points(ByteReader& r, size_t count) {
  std::vector<Point> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.push_back(Point::from_bytes(r.raw(Point::kCompressedBytes)));
  return out;
}

}  // namespace

UpdateKey PublicParameters::update_key(size_t i) const {
  if (i >= n) throw Error(ErrorCode::kIndexOutOfDomain, std::to_string(i));
  return UpdateKey{i, update_rho[i], update_mu[i], domain.element(i)};
}

Bytes PublicParameters::serialize() const {
  ByteWriter w;
  w.raw(kSrsMagic);
  w.u16(kSrsVersion);
  w.u32(static_cast<uint32_t>(n));
  write_points(w, powers_g1);
  write_points(w, powers_g2);
  write_points(w, lagrange_g1);
  write_points(w, update_rho);
  write_points(w, update_mu);
  return std::move(w).take();
}

namespace {

std::mutex table_mutex;

}  // namespace

const curve::FixedBaseG1& PublicParameters::g1_table() const {
  std::lock_guard lock(table_mutex);
  if (!g1_table_) g1_table_ = std::make_shared<curve::FixedBaseG1>(powers_g1);
  return *g1_table_;
}

const curve::FixedBaseG2& PublicParameters::g2_table() const {
  std::lock_guard lock(table_mutex);
  if (!g2_table_) g2_table_ = std::make_shared<curve::FixedBaseG2>(powers_g2);
  return *g2_table_;
}

namespace {

std::vector<G2Point> domain_table(const EvaluationDomain& domain) {
  std::vector<G2Point> out;
  out.reserve(domain.size());
  for (const auto& w : domain.elements()) out.push_back(G2Point::generator() * w);
  return out;
}

}  // namespace

PublicParameters PublicParameters::deserialize(ByteSpan data) {
  ByteReader r(data);
  auto magic = r.fixed<4>();
  if (!std::equal(magic.begin(), magic.end(), kSrsMagic)) {
    throw Error(ErrorCode::kMalformedInput, "not a parameter file");
  }
  if (r.u16() != kSrsVersion) throw Error(ErrorCode::kVersionMismatch, "parameter file version");
  PublicParameters pp;
  pp.n = r.u32();
  pp.domain = algebra::roots_of_unity(pp.n);
  pp.powers_g1 = read_points<G1Point>(r, pp.n);
  pp.powers_g2 = read_points<G2Point>(r, pp.n + 1);
  pp.lagrange_g1 = read_points<G1Point>(r, pp.n);
  pp.update_rho = read_points<G1Point>(r, pp.n);
  pp.update_mu = read_points<G1Point>(r, pp.n);
  r.expect_done();
  pp.domain_g2 = domain_table(pp.domain);
  return pp;
}

namespace detail {

PublicParameters setup_from_secret(size_t n, const FieldScalar& tau) {
  PublicParameters pp;
  try {
    pp.domain = algebra::roots_of_unity(n);
  } catch (const Error& e) {
    throw Error(ErrorCode::kUnsupportedDomainSize, e.what());
  }
  pp.n = n;
  if (pp.domain.index_of(tau)) {
    throw Error(ErrorCode::kUnsupportedDomainSize, "secret exponent lies in the domain");
  }

  const G1Point g1 = G1Point::generator();
  const G2Point g2 = G2Point::generator();
  FieldScalar power = FieldScalar::one();
  for (size_t i = 0; i <= n; ++i) {
    if (i < n) pp.powers_g1.push_back(g1 * power);
    pp.powers_g2.push_back(g2 * power);
    if (i == n) break;
    power *= tau;
  }

  // With D(X) = X^n - 1:
  //   L_i(tau)  = D(tau) * omega^i / (n (tau - omega^i))
  //   rho_i     = g^(D(tau) / (tau - omega^i))
  //   mu_i      = g^((L_i(tau) - 1) / (tau - omega^i))
  const FieldScalar vanishing = tau.pow(n) - FieldScalar::one();
  std::vector<FieldScalar> diffs(n);
  for (size_t i = 0; i < n; ++i) diffs[i] = tau - pp.domain.element(i);
  const auto inv_diffs = algebra::batch_inverse(diffs);
  for (size_t i = 0; i < n; ++i) {
    const FieldScalar rho = vanishing * inv_diffs[i];
    const FieldScalar lagrange = rho * pp.domain.element(i) * pp.domain.size_inv();
    const FieldScalar mu = (lagrange - FieldScalar::one()) * inv_diffs[i];
    pp.lagrange_g1.push_back(g1 * lagrange);
    pp.update_rho.push_back(g1 * rho);
    pp.update_mu.push_back(g1 * mu);
  }
  pp.domain_g2 = domain_table(pp.domain);
  return pp;
}

}  // namespace detail

PublicParameters setup(size_t n, Drbg& rng) {
  FieldScalar tau = FieldScalar::random(rng);
  PublicParameters pp = detail::setup_from_secret(n, tau);
  sodium_memzero(&tau, sizeof(tau));
  return pp;
}

Commitment commit(const PublicParameters& pp, const Polynomial& poly) {
  return Commitment{commit_coeffs_g1(pp, poly)};
}

Commitment commit_evaluations(const PublicParameters& pp, std::span<const FieldScalar> evals) {
  if (evals.size() != pp.n) {
    throw Error(ErrorCode::kWrongEvaluationCount, std::to_string(evals.size()));
  }
  return Commitment{curve::msm(pp.lagrange_g1, evals)};
}

SingleOpening prove_single(const PublicParameters& pp, const Polynomial& poly, size_t i) {
  check_index(pp, i);
  if (poly.degree() >= static_cast<std::ptrdiff_t>(pp.n)) {
    throw Error(ErrorCode::kDegreeTooLarge, std::to_string(poly.degree()));
  }
  // Synthetic division by (X - omega^i): the remainder is Psi(omega^i).
  auto [quotient, value] = poly.divide_by_linear(pp.domain.element(i));
  return SingleOpening{value, EvaluationProof{commit_coeffs_g1(pp, quotient)}};
}

std::vector<EvaluationProof> prove_all(const PublicParameters& pp, const Polynomial& poly) {
  std::vector<EvaluationProof> out;
  out.reserve(pp.n);
  for (size_t i = 0; i < pp.n; ++i) out.push_back(prove_single(pp, poly, i).proof);
  return out;
}

bool verify_single(const PublicParameters& pp, const Commitment& c, const FieldScalar& x,
                   const FieldScalar& y, const EvaluationProof& proof) {
  const G1Point lhs = c.element - G1Point::generator() * y;
  const G2Point rhs = pp.g2_tau() - G2Point::generator() * x;
  return curve::pairings_equal(lhs, G2Point::generator(), proof.element, rhs);
}

MultiOpening prove_multi(const PublicParameters& pp, const Polynomial& poly,
                         std::span<const size_t> indices) {
  const Polynomial vanishing = algebra::vanishing_poly(indices, pp.domain);
  std::vector<std::pair<FieldScalar, FieldScalar>> points;
  MultiOpening out;
  for (size_t i : indices) {
    const FieldScalar& x = pp.domain.element(i);
    FieldScalar y = poly.evaluate(x);
    points.emplace_back(x, y);
    out.evals.emplace(i, y);
  }
  const Polynomial remainder_poly = algebra::interpolate(points);
  auto [quotient, rem] = algebra::poly_divide(poly - remainder_poly, vanishing);
  if (!rem.is_zero()) throw std::logic_error("interpolant does not match evaluations");
  out.proof = EvaluationProof{commit_coeffs_g1(pp, quotient)};
  return out;
}

EvaluationProof aggregate_proofs(const PublicParameters& pp, std::span<const ProofItem> items) {
  IndexSet indices;
  std::set<size_t> seen;
  for (const auto& item : items) {
    check_index(pp, item.index);
    if (!seen.insert(item.index).second) {
      throw Error(ErrorCode::kDuplicateIndex, std::to_string(item.index));
    }
    indices.push_back(item.index);
  }
  const auto coeffs = algebra::partial_fraction_coeffs(indices, pp.domain);
  std::vector<G1Point> proofs;
  std::vector<FieldScalar> scalars;
  for (const auto& item : items) {
    proofs.push_back(item.proof.element);
    scalars.push_back(coeffs.at(item.index));
  }
  return EvaluationProof{curve::msm(proofs, scalars)};
}

bool verify_multi(const PublicParameters& pp, const Commitment& c,
                  const std::map<size_t, FieldScalar>& evals, const EvaluationProof& proof) {
  if (evals.empty()) throw Error(ErrorCode::kEmptyIndexSet);
  IndexSet indices;
  std::vector<std::pair<FieldScalar, FieldScalar>> points;
  for (const auto& [i, y] : evals) {
    check_index(pp, i);
    indices.push_back(i);
    points.emplace_back(pp.domain.element(i), y);
  }
  const G1Point remainder_commit = commit_coeffs_g1(pp, algebra::interpolate(points));
  const G2Point vanishing_commit = commit_coeffs_g2(pp, algebra::vanishing_poly(indices, pp.domain));
  return curve::pairings_equal(c.element - remainder_commit, G2Point::generator(), proof.element,
                               vanishing_commit);
}

Commitment update_commitment(const PublicParameters& pp, const Commitment& c, size_t i,
                             const FieldScalar& delta) {
  check_index(pp, i);
  if (delta.is_zero()) return c;
  return Commitment{c.element + pp.lagrange_g1[i] * delta};
}

EvaluationProof update_proof_local(const EvaluationProof& proof, const UpdateKey& key,
                                   const FieldScalar& delta) {
  if (delta.is_zero()) return proof;
  return EvaluationProof{proof.element + key.mu * delta};
}

namespace {

// Exponents (e_j, e_i) such that p_{i,j} = rho_j^e_j * rho_i^e_i:
//   1 / ((X - w^j)(X - w^i)) = d1 / (X - w^j) + d2 / (X - w^i),
//   d1 = 1 / (w^j - w^i), d2 = -d1, scaled by 1 / D'(w^j) = w^j / n.
std::pair<FieldScalar, FieldScalar> cross_exponents(const UpdateKey& key_i, const UpdateKey& key_j,
                                                    size_t n) {
  if (key_i.index == key_j.index || key_i.omega_i == key_j.omega_i) {
    throw Error(ErrorCode::kSameIndex, std::to_string(key_i.index));
  }
  const FieldScalar d1 = (key_j.omega_i - key_i.omega_i).inverse();
  const FieldScalar d2 = -d1;
  const FieldScalar inv_derivative = key_j.omega_i / FieldScalar(n);
  return {d1 * inv_derivative, d2 * inv_derivative};
}

}  // namespace

G1Point cross_update_element(const UpdateKey& key_i, const UpdateKey& key_j, size_t n) {
  auto [e_j, e_i] = cross_exponents(key_i, key_j, n);
  return key_j.rho * e_j + key_i.rho * e_i;
}

EvaluationProof update_proof_other(const EvaluationProof& proof_i, const UpdateKey& key_i,
                                   const UpdateKey& key_j, const FieldScalar& delta, size_t n) {
  auto [e_j, e_i] = cross_exponents(key_i, key_j, n);
  if (delta.is_zero()) return proof_i;
  // pi * p_{i,j}^delta with the delta folded into the two exponents.
  return EvaluationProof{proof_i.element + key_j.rho * (e_j * delta) + key_i.rho * (e_i * delta)};
}

}  // namespace pbag::kzg
