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

#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "pbag/counters.hpp"
#include "pbag/error.hpp"
#include "pbag/kzg.hpp"

namespace pbag::kzg {
namespace {

using pbag::testing::g1_at_tau;
using pbag::testing::setup_with_trapdoor;
using pbag::testing::single_quotient;

template <typename Fn>
void expect_error(ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

std::vector<FieldScalar> random_evals(size_t n, Drbg& rng) {
  std::vector<FieldScalar> u(n);
  for (auto& x : u) x = FieldScalar::random(rng);
  return u;
}

IndexSet random_subset(size_t n, size_t k, Drbg& rng) {
  std::set<size_t> s;
  while (s.size() < k) s.insert(rng.uniform(n));
  return IndexSet(s.begin(), s.end());
}

TEST(SetupTest, SingleSlotDomain) {
  auto [pp, td] = setup_with_trapdoor(1, 1);
  ASSERT_EQ(pp.powers_g1.size(), 1u);
  EXPECT_EQ(pp.powers_g1[0], G1Point::generator());
  EXPECT_EQ(pp.powers_g2[0], G2Point::generator());
  EXPECT_EQ(pp.lagrange_g1[0], G1Point::generator());
  EXPECT_EQ(pp.update_rho[0], G1Point::generator());
  EXPECT_TRUE(pp.update_mu[0].is_identity());
}

TEST(SetupTest, PowersMatchTrapdoor) {
  auto [pp, td] = setup_with_trapdoor(4, 2);
  EXPECT_EQ(pp.powers_g1[2], G1Point::generator() * (td.tau * td.tau));
  EXPECT_EQ(pp.powers_g2.size(), 5u);
  EXPECT_EQ(pp.powers_g2[4], G2Point::generator() * td.tau.pow(4));
}

TEST(SetupTest, MirrorConsistencyAndLagrangeSum) {
  auto [pp, td] = setup_with_trapdoor(8, 3);
  for (size_t i = 0; i < 8; ++i) {
    EXPECT_TRUE(curve::pairings_equal(pp.powers_g1[i], G2Point::generator(), G1Point::generator(),
                                      pp.powers_g2[i]))
        << i;
  }
  G1Point sum;
  for (const auto& l : pp.lagrange_g1) sum += l;
  EXPECT_EQ(sum, G1Point::generator());
}

TEST(SetupTest, UpdateKeysEqualCommittedQuotients) {
  for (size_t n : {4u, 16u}) {
    auto [pp, td] = setup_with_trapdoor(n, 4);
    const auto vanishing = Polynomial::monomial(n) - Polynomial::constant(FieldScalar::one());
    for (size_t i = 0; i < n; ++i) {
      const auto root = Polynomial::linear_root(pp.domain.element(i));
      auto [rho_q, rho_r] = algebra::poly_divide(vanishing, root);
      ASSERT_TRUE(rho_r.is_zero());
      const auto li = pp.domain.lagrange_basis(i);
      auto [mu_q, mu_r] =
          algebra::poly_divide(li - Polynomial::constant(FieldScalar::one()), root);
      ASSERT_TRUE(mu_r.is_zero());
      EXPECT_EQ(pp.update_rho[i], commit(pp, rho_q).element);
      EXPECT_EQ(pp.update_mu[i], commit(pp, mu_q).element);
      EXPECT_EQ(pp.lagrange_g1[i], commit(pp, li).element);
    }
  }
}

TEST(SetupTest, RejectsUnsupportedSizes) {
  Drbg rng(1);
  expect_error(ErrorCode::kUnsupportedDomainSize, [&] { setup(3, rng); });
  expect_error(ErrorCode::kUnsupportedDomainSize, [&] { setup(0, rng); });
}

TEST(SrsSerializationTest, ByteExactRoundTrip) {
  Drbg rng(9);
  auto pp = setup(16, rng);
  auto bytes = pp.serialize();
  EXPECT_EQ(bytes.size(), 4 + 2 + 4 + 16 * 48 + 17 * 96 + 3 * 16 * 48);
  auto back = PublicParameters::deserialize(bytes);
  EXPECT_EQ(back.serialize(), bytes);
  EXPECT_EQ(back.domain.omega(), pp.domain.omega());
  EXPECT_EQ(back.update_key(5), pp.update_key(5));
}

TEST(SrsSerializationTest, RejectsCorruption) {
  Drbg rng(9);
  auto bytes = setup(4, rng).serialize();
  auto bad_version = bytes;
  bad_version[5] ^= 1;
  expect_error(ErrorCode::kVersionMismatch, [&] { PublicParameters::deserialize(bad_version); });
  auto truncated = Bytes(bytes.begin(), bytes.end() - 1);
  expect_error(ErrorCode::kMalformedInput, [&] { PublicParameters::deserialize(truncated); });
  auto bad_point = bytes;
  bad_point[10 + 47] ^= 0x01;  // low byte of powers_g1[0]
  expect_error(ErrorCode::kInvalidGroupElement, [&] { PublicParameters::deserialize(bad_point); });
}

TEST(CommitTest, ZeroAndConstant) {
  auto [pp, td] = setup_with_trapdoor(8, 5);
  EXPECT_TRUE(commit(pp, Polynomial()).element.is_identity());
  FieldScalar c(42);
  EXPECT_EQ(commit(pp, Polynomial::constant(c)).element, G1Point::generator() * c);
}

TEST(CommitTest, EvaluationAndCoefficientPathsAgree) {
  auto [pp, td] = setup_with_trapdoor(8, 6);
  Drbg rng(60);
  for (int trial = 0; trial < 10; ++trial) {
    auto u = random_evals(8, rng);
    auto psi = pp.domain.ifft(u);
    EXPECT_EQ(commit_evaluations(pp, u), commit(pp, psi));
    EXPECT_EQ(commit(pp, psi).element, g1_at_tau(psi, td));
  }
}

TEST(CommitTest, Errors) {
  auto [pp, td] = setup_with_trapdoor(4, 7);
  Drbg rng(70);
  expect_error(ErrorCode::kDegreeTooLarge, [&] { commit(pp, Polynomial::random(4, rng)); });
  std::vector<FieldScalar> three(3);
  expect_error(ErrorCode::kWrongEvaluationCount, [&] { commit_evaluations(pp, three); });
}

TEST(CommitTest, Homomorphism) {
  auto [pp, td] = setup_with_trapdoor(16, 8);
  Drbg rng(80);
  auto a = Polynomial::random(15, rng), b = Polynomial::random(9, rng);
  EXPECT_EQ(commit(pp, a).element + commit(pp, b).element, commit(pp, a + b).element);
}

TEST(ProveSingleTest, ConstantHasIdentityProof) {
  auto [pp, td] = setup_with_trapdoor(8, 9);
  FieldScalar c(7);
  auto open = prove_single(pp, Polynomial::constant(c), 5);
  EXPECT_EQ(open.value, c);
  EXPECT_TRUE(open.proof.element.is_identity());
}

TEST(ProveSingleTest, IdentityPolynomialAtOne) {
  auto [pp, td] = setup_with_trapdoor(8, 10);
  auto open = prove_single(pp, Polynomial::monomial(1), 0);
  EXPECT_EQ(open.value, FieldScalar::one());
  EXPECT_EQ(open.proof.element, G1Point::generator());
}

TEST(ProveSingleTest, MatchesTrapdoorQuotient) {
  auto [pp, td] = setup_with_trapdoor(8, 11);
  Drbg rng(110);
  auto psi = Polynomial::random(7, rng);
  auto open = prove_single(pp, psi, 3);
  EXPECT_EQ(open.value, psi.evaluate(pp.domain.element(3)));
  EXPECT_EQ(open.proof.element, g1_at_tau(single_quotient(psi, pp.domain.element(3)), td));
  expect_error(ErrorCode::kIndexOutOfDomain, [&] { prove_single(pp, psi, 8); });
}

TEST(ProveAllTest, ConstantAndSmallDomain) {
  auto [pp, td] = setup_with_trapdoor(4, 12);
  for (const auto& p : prove_all(pp, Polynomial::constant(FieldScalar(3)))) {
    EXPECT_TRUE(p.element.is_identity());
  }
  Drbg rng(120);
  auto psi = Polynomial::random(3, rng);
  auto all = prove_all(pp, psi);
  ASSERT_EQ(all.size(), 4u);
  for (size_t i = 0; i < 4; ++i) EXPECT_EQ(all[i], prove_single(pp, psi, i).proof);
}

TEST(ProveAllTest, LargeDomainSpotCheck) {
  auto [pp, td] = setup_with_trapdoor(256, 13);
  Drbg rng(130);
  auto psi = Polynomial::random(255, rng);
  auto all = prove_all(pp, psi);
  for (int k = 0; k < 8; ++k) {
    size_t i = rng.uniform(256);
    EXPECT_EQ(all[i].element, g1_at_tau(single_quotient(psi, pp.domain.element(i)), td));
  }
}

TEST(VerifySingleTest, CompletenessTamperAndPairingBudget) {
  auto [pp, td] = setup_with_trapdoor(16, 14);
  Drbg rng(140);
  auto psi = Polynomial::random(15, rng);
  auto c = commit(pp, psi);
  auto open = prove_single(pp, psi, 6);
  const auto& x = pp.domain.element(6);
  CounterScope scope;
  EXPECT_TRUE(verify_single(pp, c, x, open.value, open.proof));
  EXPECT_EQ(scope.delta().pairings, 2u);
  EXPECT_FALSE(verify_single(pp, c, x, open.value + FieldScalar::one(), open.proof));
  EXPECT_FALSE(verify_single(pp, c, pp.domain.element(7), open.value, open.proof));
}

TEST(VerifySingleTest, RandomForgeriesRejected) {
  auto [pp, td] = setup_with_trapdoor(16, 15);
  Drbg rng(150);
  auto psi = Polynomial::random(15, rng);
  auto c = commit(pp, psi);
  auto open = prove_single(pp, psi, 2);
  int accepts = 0;
  for (int trial = 0; trial < 100; ++trial) {
    EvaluationProof forged{G1Point::from_scalar(FieldScalar::random(rng))};
    accepts += verify_single(pp, c, pp.domain.element(2), open.value, forged);
  }
  EXPECT_EQ(accepts, 0);
}

TEST(VerifySingleTest, CompletenessAcrossSizes) {
  Drbg rng(160);
  for (size_t n : {4u, 16u, 64u}) {
    auto [pp, td] = setup_with_trapdoor(n, n);
    for (int trial = 0; trial < 5; ++trial) {
      auto psi = Polynomial::random(n - 1, rng);
      size_t i = rng.uniform(n);
      auto open = prove_single(pp, psi, i);
      EXPECT_TRUE(verify_single(pp, commit(pp, psi), pp.domain.element(i), open.value, open.proof));
    }
  }
}

TEST(ProveMultiTest, SingletonEqualsSingleProof) {
  auto [pp, td] = setup_with_trapdoor(8, 17);
  Drbg rng(170);
  auto psi = Polynomial::random(7, rng);
  IndexSet one{4};
  auto multi = prove_multi(pp, psi, one);
  EXPECT_EQ(multi.proof, prove_single(pp, psi, 4).proof);
  EXPECT_EQ(multi.evals.at(4), psi.evaluate(pp.domain.element(4)));
}

TEST(ProveMultiTest, FullDomainHasIdentityProof) {
  auto [pp, td] = setup_with_trapdoor(8, 18);
  Drbg rng(180);
  auto psi = Polynomial::random(7, rng);
  IndexSet all{0, 1, 2, 3, 4, 5, 6, 7};
  auto multi = prove_multi(pp, psi, all);
  EXPECT_TRUE(multi.proof.element.is_identity());
  EXPECT_TRUE(verify_multi(pp, commit(pp, psi), multi.evals, multi.proof));
}

TEST(ProveMultiTest, MatchesTrapdoorQuotient) {
  auto [pp, td] = setup_with_trapdoor(8, 19);
  Drbg rng(190);
  auto psi = Polynomial::random(7, rng);
  IndexSet idx{1, 4, 6};
  auto multi = prove_multi(pp, psi, idx);
  std::vector<std::pair<FieldScalar, FieldScalar>> pts;
  for (size_t i : idx) pts.emplace_back(pp.domain.element(i), psi.evaluate(pp.domain.element(i)));
  auto [q, r] = algebra::poly_divide(psi - algebra::interpolate(pts),
                                     algebra::vanishing_poly(idx, pp.domain));
  ASSERT_TRUE(r.is_zero());
  EXPECT_EQ(multi.proof.element, g1_at_tau(q, td));
  EXPECT_TRUE(verify_multi(pp, commit(pp, psi), multi.evals, multi.proof));
  IndexSet empty;
  expect_error(ErrorCode::kEmptyIndexSet, [&] { prove_multi(pp, psi, empty); });
  IndexSet outside{9};
  expect_error(ErrorCode::kIndexOutOfDomain, [&] { prove_multi(pp, psi, outside); });
}

TEST(AggregateTest, SingleItemUnchanged) {
  auto [pp, td] = setup_with_trapdoor(8, 20);
  Drbg rng(200);
  auto psi = Polynomial::random(7, rng);
  auto open = prove_single(pp, psi, 3);
  std::vector<ProofItem> items{{3, open.value, open.proof}};
  EXPECT_EQ(aggregate_proofs(pp, items), open.proof);
}

TEST(AggregateTest, TwoPointDomain) {
  auto [pp, td] = setup_with_trapdoor(2, 21);
  Drbg rng(210);
  auto psi = Polynomial::random(1, rng);
  auto a = prove_single(pp, psi, 0), b = prove_single(pp, psi, 1);
  std::vector<ProofItem> items{{0, a.value, a.proof}, {1, b.value, b.proof}};
  auto half = FieldScalar(2).inverse();
  EXPECT_EQ(aggregate_proofs(pp, items).element, a.proof.element * half - b.proof.element * half);
  IndexSet both{0, 1};
  EXPECT_EQ(aggregate_proofs(pp, items), prove_multi(pp, psi, both).proof);
}

TEST(AggregateTest, EqualsDivisionProof) {
  auto [pp, td] = setup_with_trapdoor(16, 22);
  Drbg rng(220);
  for (int trial = 0; trial < 5; ++trial) {
    auto psi = Polynomial::random(15, rng);
    auto idx = random_subset(16, 5, rng);
    std::vector<ProofItem> items;
    for (size_t i : idx) {
      auto o = prove_single(pp, psi, i);
      items.push_back({i, o.value, o.proof});
    }
    EXPECT_EQ(aggregate_proofs(pp, items), prove_multi(pp, psi, idx).proof);
  }
}

TEST(AggregateTest, DuplicateIndex) {
  auto [pp, td] = setup_with_trapdoor(4, 23);
  std::vector<ProofItem> items{{1, FieldScalar(), {}}, {1, FieldScalar(), {}}};
  expect_error(ErrorCode::kDuplicateIndex, [&] { aggregate_proofs(pp, items); });
}

TEST(VerifyMultiTest, BatchOfOneAgreesWithSingle) {
  auto [pp, td] = setup_with_trapdoor(8, 24);
  Drbg rng(240);
  auto psi = Polynomial::random(7, rng);
  auto c = commit(pp, psi);
  auto o = prove_single(pp, psi, 2);
  std::map<size_t, FieldScalar> evals{{2, o.value}};
  EXPECT_TRUE(verify_multi(pp, c, evals, o.proof));
  evals[2] += FieldScalar::one();
  EXPECT_FALSE(verify_multi(pp, c, evals, o.proof));
}

TEST(VerifyMultiTest, FiftyEvaluationsTwoPairings) {
  auto [pp, td] = setup_with_trapdoor(64, 25);
  Drbg rng(250);
  auto psi = Polynomial::random(63, rng);
  auto c = commit(pp, psi);
  auto idx = random_subset(64, 50, rng);
  std::vector<ProofItem> items;
  std::map<size_t, FieldScalar> evals;
  for (size_t i : idx) {
    auto o = prove_single(pp, psi, i);
    items.push_back({i, o.value, o.proof});
    evals.emplace(i, o.value);
  }
  auto agg = aggregate_proofs(pp, items);
  CounterScope scope;
  EXPECT_TRUE(verify_multi(pp, c, evals, agg));
  EXPECT_EQ(scope.delta().pairings, 2u);

  int accepts = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto tampered = evals;
    auto it = std::next(tampered.begin(), static_cast<long>(rng.uniform(tampered.size())));
    it->second += FieldScalar::random(rng);
    accepts += verify_multi(pp, c, tampered, agg);
  }
  EXPECT_EQ(accepts, 0);
}

TEST(UpdateCommitmentTest, ZeroDeltaAndUnitVector) {
  auto [pp, td] = setup_with_trapdoor(8, 26);
  Commitment zero{};
  EXPECT_EQ(update_commitment(pp, zero, 3, FieldScalar()), zero);
  EXPECT_EQ(update_commitment(pp, zero, 3, FieldScalar::one()).element, pp.lagrange_g1[3]);
  expect_error(ErrorCode::kIndexOutOfDomain,
               [&] { update_commitment(pp, zero, 8, FieldScalar::one()); });
}

TEST(UpdateCommitmentTest, MatchesRecompute) {
  auto [pp, td] = setup_with_trapdoor(16, 27);
  Drbg rng(270);
  auto u = random_evals(16, rng);
  auto c = commit_evaluations(pp, u);
  for (int step = 0; step < 20; ++step) {
    size_t i = rng.uniform(16);
    auto delta = FieldScalar::random(rng);
    c = update_commitment(pp, c, i, delta);
    u[i] += delta;
    ASSERT_EQ(c, commit_evaluations(pp, u));
    // Psi' = Psi + delta * L_i pointwise on the domain.
    ASSERT_EQ(c, commit(pp, pp.domain.ifft(u)));
  }
}

TEST(UpdateProofLocalTest, ZeroDeltaAndRecompute) {
  auto [pp, td] = setup_with_trapdoor(4, 28);
  Drbg rng(280);
  auto u = random_evals(4, rng);
  auto psi = pp.domain.ifft(u);
  auto proof = prove_single(pp, psi, 1).proof;
  EXPECT_EQ(update_proof_local(proof, pp.update_key(1), FieldScalar()), proof);

  auto delta = FieldScalar::random(rng);
  auto updated = update_proof_local(proof, pp.update_key(1), delta);
  u[1] += delta;
  auto fresh = prove_single(pp, pp.domain.ifft(u), 1);
  EXPECT_EQ(updated, fresh.proof);
  auto c = commit_evaluations(pp, u);
  EXPECT_TRUE(verify_single(pp, c, pp.domain.element(1), u[1], updated));
}

TEST(UpdateProofLocalTest, Additivity) {
  auto [pp, td] = setup_with_trapdoor(8, 29);
  Drbg rng(290);
  auto proof = EvaluationProof{G1Point::from_scalar(FieldScalar::random(rng))};
  auto d1 = FieldScalar::random(rng), d2 = FieldScalar::random(rng);
  auto key = pp.update_key(5);
  EXPECT_EQ(update_proof_local(update_proof_local(proof, key, d1), key, d2),
            update_proof_local(proof, key, d1 + d2));
}

TEST(UpdateProofOtherTest, ZeroDeltaAndRecompute) {
  auto [pp, td] = setup_with_trapdoor(4, 30);
  Drbg rng(300);
  auto u = random_evals(4, rng);
  auto proof0 = prove_single(pp, pp.domain.ifft(u), 0).proof;
  EXPECT_EQ(update_proof_other(proof0, pp.update_key(0), pp.update_key(2), FieldScalar(), 4),
            proof0);

  auto delta = FieldScalar::random(rng);
  auto updated = update_proof_other(proof0, pp.update_key(0), pp.update_key(2), delta, 4);
  u[2] += delta;
  EXPECT_EQ(updated, prove_single(pp, pp.domain.ifft(u), 0).proof);
  EXPECT_TRUE(verify_single(pp, commit_evaluations(pp, u), pp.domain.element(0), u[0], updated));
}

TEST(UpdateProofOtherTest, TwoSuccessiveForeignUpdates) {
  auto [pp, td] = setup_with_trapdoor(16, 31);
  Drbg rng(310);
  auto u = random_evals(16, rng);
  auto proof = prove_single(pp, pp.domain.ifft(u), 5).proof;
  for (size_t j : {9u, 12u}) {
    auto delta = FieldScalar::random(rng);
    proof = update_proof_other(proof, pp.update_key(5), pp.update_key(j), delta, 16);
    u[j] += delta;
  }
  EXPECT_EQ(proof, prove_single(pp, pp.domain.ifft(u), 5).proof);
}

TEST(UpdateProofOtherTest, CorrectionElementIsLagrangeQuotient) {
  auto [pp, td] = setup_with_trapdoor(8, 32);
  for (auto [i, j] : {std::pair<size_t, size_t>{0, 3}, {6, 1}}) {
    auto lj = pp.domain.lagrange_basis(j);
    auto [q, r] = algebra::poly_divide(lj, Polynomial::linear_root(pp.domain.element(i)));
    // L_j vanishes at omega^i, so the division is exact.
    ASSERT_TRUE(r.is_zero());
    auto p = cross_update_element(pp.update_key(i), pp.update_key(j), 8);
    EXPECT_EQ(p, g1_at_tau(q, td));
    // With rho_i and rho_j exchanged the element comes out inverted.
    auto [e_first, e_second] = std::pair{(pp.domain.element(j) - pp.domain.element(i)).inverse(),
                                         (pp.domain.element(i) - pp.domain.element(j)).inverse()};
    auto inv_deriv = pp.domain.element(j) / FieldScalar(8);
    auto swapped = (pp.update_rho[i] * e_first + pp.update_rho[j] * e_second) * inv_deriv;
    EXPECT_EQ(swapped, -p);
  }
  expect_error(ErrorCode::kSameIndex,
               [&] { cross_update_element(pp.update_key(2), pp.update_key(2), 8); });
}

TEST(StalenessTest, OldProofFailsAfterUpdate) {
  auto [pp, td] = setup_with_trapdoor(8, 33);
  Drbg rng(330);
  auto u = random_evals(8, rng);
  auto c = commit_evaluations(pp, u);
  auto open = prove_single(pp, pp.domain.ifft(u), 4);
  auto delta = FieldScalar::random(rng);
  auto c2 = update_commitment(pp, c, 4, delta);
  EXPECT_FALSE(verify_single(pp, c2, pp.domain.element(4), u[4], open.proof));
  EXPECT_FALSE(verify_single(pp, c2, pp.domain.element(4), u[4] + delta, open.proof));
  // A foreign edit also invalidates the stale proof for the unchanged value.
  auto c3 = update_commitment(pp, c, 1, delta);
  EXPECT_FALSE(verify_single(pp, c3, pp.domain.element(4), u[4], open.proof));
}

}  // namespace
}  // namespace pbag::kzg
