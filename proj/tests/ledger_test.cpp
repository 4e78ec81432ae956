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

#include "fleet.hpp"
#include "pbag/error.hpp"
#include "pbag/ledger.hpp"

namespace pbag::ledger {
namespace {

using identity::derive_u;
using identity::ledger_key;
using pbag::testing::TestVehicle;
using pbag::testing::TestWorld;

template <typename Fn>
void expect_error(ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

bool holder_verifies(const TestWorld& w, const identity::ParameterSet& p) {
  return kzg::verify_single(*w.pp, w.ledger->commitment(), p.omega_i, p.u_i, p.proof);
}

// Evaluation vector rebuilt from the certificates alone.
kzg::Commitment commitment_from_state(const Ledger& l) {
  std::vector<FieldScalar> evals(l.capacity());
  for (const auto& [key, rec] : l.state()) {
    if (rec.status == Status::kCer) evals[rec.index] = derive_u(rec.cert->e_id, rec.cert->npk);
  }
  return kzg::commit(l.params(), l.params().domain.ifft(evals));
}

// Independent walk over the chain using only the entry encodings.
bool chain_walk(const std::vector<LogEntry>& log) {
  Digest prev{};
  for (size_t k = 0; k < log.size(); ++k) {
    if (log[k].height != k || log[k].prev_hash != prev) return false;
    if (log[k].payload_hash != sha256(log[k].payload)) return false;
    prev = sha256(log[k].serialize());
  }
  return true;
}

StatusRecord cer_record(const TestWorld& w, size_t index) {
  Certificate c;
  c.e_id = identity::encrypt_id(TestWorld::make_id(900 + index), w.ra.sk);
  c.npk = w.ra.pk;
  c.t_expired = 1;
  return {Status::kCer, c, index};
}

TEST(SearchTest, UnseenIsNull) {
  TestWorld w(8, 1);
  EXPECT_EQ(w.ledger->search(FieldScalar(5)), Status::kNull);
  EXPECT_FALSE(w.ledger->lookup(FieldScalar(5)));
}

TEST(IssueTest, FreshRequestVerifies) {
  TestWorld w(8, 2);
  auto& v = w.enroll();
  auto key = ledger_key(v.e_id);
  EXPECT_EQ(w.ledger->search(key), Status::kCer);
  auto rec = *w.ledger->lookup(key);
  EXPECT_EQ(rec.cert->npk, v.key.pk);
  EXPECT_EQ(rec.cert->op_tag, identity::OpTag::kIssue);
  EXPECT_TRUE(identity::check_sig(w.ra.pk, rec.cert->sigma, v.e_id.bytes));
  EXPECT_EQ(v.params.index, 0u);
  EXPECT_EQ(v.params.u_i, derive_u(v.e_id, v.key.pk));
  EXPECT_EQ(v.params.g_u, curve::G1Point::from_scalar(v.params.u_i));
  EXPECT_EQ(v.params.g_omega, curve::G2Point::from_scalar(v.params.omega_i));
  EXPECT_EQ(v.params.update_key, w.pp->update_key(0));
  EXPECT_TRUE(holder_verifies(w, v.params));
  EXPECT_EQ(w.ledger->commitment(), commitment_from_state(*w.ledger));
}

TEST(IssueTest, DuplicateLeavesStateUnchanged) {
  TestWorld w(8, 3);
  auto& v = w.enroll();
  auto before = w.ledger->export_state();
  auto other = identity::keygen(w.rng);
  auto req = make_issue_request(v.e_id, other.pk, v.t_expired, w.ra.sk);
  expect_error(ErrorCode::kAlreadyRegistered, [&] { w.ledger->issue_certificate(req, w.now); });
  EXPECT_EQ(w.ledger->export_state(), before);
}

TEST(IssueTest, BadSignatureMapsToPendThenPromotes) {
  TestWorld w(8, 4);
  auto forger = identity::keygen(w.rng);
  auto v = identity::keygen(w.rng);
  auto e_id = identity::encrypt_id(TestWorld::make_id(1), w.ra.sk);
  auto bad = make_issue_request(e_id, v.pk, w.now + 100, forger.sk);
  auto c0 = w.ledger->commitment();
  expect_error(ErrorCode::kInvalidRaSignature, [&] { w.ledger->issue_certificate(bad, w.now); });
  EXPECT_EQ(w.ledger->search(ledger_key(e_id)), Status::kPend);
  EXPECT_EQ(w.ledger->commitment(), c0);
  EXPECT_EQ(w.ledger->next_index(), 0u);
  expect_error(ErrorCode::kInvalidRaSignature, [&] { w.ledger->issue_certificate(bad, w.now); });

  auto good = make_issue_request(e_id, v.pk, w.now + 100, w.ra.sk);
  auto issued = w.ledger->issue_certificate(good, w.now);
  EXPECT_EQ(w.ledger->search(ledger_key(e_id)), Status::kCer);
  EXPECT_TRUE(holder_verifies(w, issued.params));
}

TEST(IssueTest, CapacityAndExpiry) {
  TestWorld w(4, 5);
  for (int k = 0; k < 4; ++k) w.enroll();
  auto before = w.ledger->export_state();
  auto v = identity::keygen(w.rng);
  auto e_id = identity::encrypt_id(TestWorld::make_id(77), w.ra.sk);
  auto req = make_issue_request(e_id, v.pk, w.now + 100, w.ra.sk);
  expect_error(ErrorCode::kCapacityExhausted, [&] { w.ledger->issue_certificate(req, w.now); });
  EXPECT_EQ(w.ledger->export_state(), before);

  TestWorld fresh(4, 6);
  auto expired = make_issue_request(e_id, v.pk, fresh.now, fresh.ra.sk);
  expect_error(ErrorCode::kMalformedInput,
               [&] { fresh.ledger->issue_certificate(expired, fresh.now); });
}

TEST(MappingTest, TransitionsAndChain) {
  TestWorld w(8, 7);
  w.ledger->mapping(FieldScalar(1), cer_record(w, 0));
  EXPECT_EQ(w.ledger->search(FieldScalar(1)), Status::kCer);
  w.ledger->mapping(FieldScalar(1), {Status::kRevoke, std::nullopt, 0});
  expect_error(ErrorCode::kIllegalTransition,
               [&] { w.ledger->mapping(FieldScalar(1), cer_record(w, 0)); });
  expect_error(ErrorCode::kIllegalTransition,
               [&] { w.ledger->mapping(FieldScalar(2), {Status::kRevoke, std::nullopt, 0}); });
  w.ledger->mapping(FieldScalar(3), {Status::kPend, std::nullopt, 0});
  expect_error(ErrorCode::kIllegalTransition,
               [&] { w.ledger->mapping(FieldScalar(3), {Status::kRevoke, std::nullopt, 0}); });
  EXPECT_EQ(w.ledger->log().size(), 3u);
}

TEST(MappingTest, HundredMappingsChainVerifies) {
  TestWorld w(8, 8);
  for (uint64_t k = 0; k < 100; ++k) {
    w.ledger->mapping(FieldScalar(k), k % 2 ? StatusRecord{Status::kPend, std::nullopt, 0}
                                            : cer_record(w, k % 8));
  }
  EXPECT_TRUE(w.ledger->verify_chain());
  EXPECT_TRUE(chain_walk(w.ledger->log()));
  auto tampered = w.ledger->log();
  tampered[40].payload[0] ^= 1;
  EXPECT_FALSE(chain_walk(tampered));
  tampered = w.ledger->log();
  tampered[40].prev_hash[0] ^= 1;
  EXPECT_FALSE(chain_walk(tampered));
}

TEST(UpdateTest, NewProofVerifiesOldFails) {
  TestWorld w(8, 9);
  auto& a = w.enroll();
  auto& b = w.enroll();
  w.sync_all();
  auto old = a.params;
  auto b_before = b.params;
  w.rekey(a);
  EXPECT_TRUE(holder_verifies(w, a.params));
  EXPECT_FALSE(holder_verifies(w, old));
  EXPECT_EQ(a.params.u_i, derive_u(a.e_id, a.key.pk));
  auto rec = *w.ledger->lookup(ledger_key(a.e_id));
  EXPECT_EQ(rec.cert->op_tag, identity::OpTag::kUpdate);
  EXPECT_TRUE(identity::check_sig(a.key.pk, rec.cert->sigma, a.e_id.bytes));

  // Third party refreshes from the published update reference.
  EXPECT_FALSE(holder_verifies(w, b_before));
  w.sync_all();
  EXPECT_TRUE(holder_verifies(w, b.params));
  EXPECT_EQ(w.ledger->commitment(), commitment_from_state(*w.ledger));
}

TEST(UpdateTest, OwnershipFailuresChangeNothing) {
  TestWorld w(8, 10);
  auto& a = w.enroll();
  auto before = w.ledger->export_state();
  auto next = identity::keygen(w.rng), thief = identity::keygen(w.rng);

  auto wrong_ver = make_update_request(a.e_id, thief, next, a.t_expired);
  wrong_ver.npk_current = a.key.pk;
  expect_error(ErrorCode::kOwnershipCheckFailed,
               [&] { w.ledger->update_certificate(wrong_ver, a.params); });

  auto wrong_owner = make_update_request(a.e_id, thief, next, a.t_expired);
  expect_error(ErrorCode::kOwnershipCheckFailed,
               [&] { w.ledger->update_certificate(wrong_owner, a.params); });

  auto wrong_nsk = make_update_request(a.e_id, a.key, next, a.t_expired);
  wrong_nsk.sigma_nsk = identity::sign(a.e_id.bytes, thief.sk);
  expect_error(ErrorCode::kOwnershipCheckFailed,
               [&] { w.ledger->update_certificate(wrong_nsk, a.params); });
  EXPECT_EQ(w.ledger->export_state(), before);
}

TEST(UpdateTest, StatusAndHolderGuards) {
  TestWorld w(8, 11);
  auto& a = w.enroll();
  auto& b = w.enroll();
  auto next = identity::keygen(w.rng);

  auto stray = identity::encrypt_id(TestWorld::make_id(50), w.ra.sk);
  auto unknown = make_update_request(stray, a.key, next, 0);
  expect_error(ErrorCode::kNotRegistered, [&] { w.ledger->update_certificate(unknown, a.params); });

  auto forger = identity::keygen(w.rng);
  auto pend_req = make_issue_request(stray, next.pk, w.now + 10, forger.sk);
  EXPECT_THROW(w.ledger->issue_certificate(pend_req, w.now), Error);
  expect_error(ErrorCode::kPendNeedsRaValidation,
               [&] { w.ledger->update_certificate(unknown, a.params); });

  // a's proof is stale once b's issuance moved the commitment.
  auto stale = make_update_request(a.e_id, a.key, next, a.t_expired);
  expect_error(ErrorCode::kInvalidHolderProof, [&] { w.ledger->update_certificate(stale, a.params); });
  expect_error(ErrorCode::kInvalidHolderProof, [&] { w.ledger->update_certificate(stale, b.params); });

  w.revoke(b);
  auto after_revoke = make_update_request(b.e_id, b.key, next, b.t_expired);
  expect_error(ErrorCode::kNotRegistered,
               [&] { w.ledger->update_certificate(after_revoke, b.params); });
}

TEST(RevokeTest, RevokedProofFailsOthersRefresh) {
  TestWorld w(8, 12);
  auto& a = w.enroll();
  auto& b = w.enroll();
  auto& c = w.enroll();
  w.sync_all();
  auto stale = b.params;
  w.revoke(b);
  EXPECT_EQ(w.ledger->search(ledger_key(b.e_id)), Status::kRevoke);
  EXPECT_TRUE(w.ledger->evaluations()[stale.index].is_zero());
  EXPECT_FALSE(holder_verifies(w, stale));
  w.sync_all();
  EXPECT_TRUE(holder_verifies(w, a.params));
  EXPECT_TRUE(holder_verifies(w, c.params));
  EXPECT_EQ(w.ledger->commitment(), commitment_from_state(*w.ledger));

  auto again = make_issue_request(b.e_id, b.key.pk, b.t_expired, w.ra.sk);
  expect_error(ErrorCode::kAlreadyRegistered, [&] { w.ledger->issue_certificate(again, w.now); });
  w.enroll();
  EXPECT_EQ(w.ledger->next_index(), 4u);
}

TEST(RevokeTest, OwnershipGuards) {
  TestWorld w(8, 13);
  auto& a = w.enroll();
  auto before = w.ledger->export_state();
  auto wrong_t = make_revoke_request(a.e_id, a.key, a.t_expired + 1, a.sigma_fsk);
  expect_error(ErrorCode::kOwnershipCheckFailed, [&] { w.ledger->revoke_certificate(wrong_t); });

  auto stale_sig = make_revoke_request(a.e_id, a.key, a.t_expired, a.sigma_fsk);
  stale_sig.sigma_revoke = make_revoke_request(a.e_id, a.key, a.t_expired - 5, a.sigma_fsk).sigma_revoke;
  expect_error(ErrorCode::kOwnershipCheckFailed, [&] { w.ledger->revoke_certificate(stale_sig); });

  auto thief = identity::keygen(w.rng);
  auto wrong_key = make_revoke_request(a.e_id, thief, a.t_expired, a.sigma_fsk);
  expect_error(ErrorCode::kOwnershipCheckFailed, [&] { w.ledger->revoke_certificate(wrong_key); });

  auto no_fsk = make_revoke_request(a.e_id, a.key, a.t_expired, identity::Signature{});
  expect_error(ErrorCode::kOwnershipCheckFailed, [&] { w.ledger->revoke_certificate(no_fsk); });
  EXPECT_EQ(w.ledger->export_state(), before);

  auto stray = identity::encrypt_id(TestWorld::make_id(60), w.ra.sk);
  auto unknown = make_revoke_request(stray, a.key, a.t_expired, a.sigma_fsk);
  expect_error(ErrorCode::kNotRegistered, [&] { w.ledger->revoke_certificate(unknown); });
}

TEST(LedgerPropertyTest, RandomInterleavingsStayConsistent) {
  for (uint64_t seed = 0; seed < 4; ++seed) {
    TestWorld w(16, 100 + seed);
    std::vector<identity::ParameterSet> revoked_stale;
    for (int step = 0; step < 30; ++step) {
      std::vector<TestVehicle*> active;
      for (auto& v : w.vehicles) {
        if (w.ledger->search(ledger_key(v->e_id)) == Status::kCer) active.push_back(v.get());
      }
      uint64_t roll = w.rng.uniform(3);
      if ((roll == 0 || active.empty()) && w.ledger->next_index() < w.ledger->capacity()) {
        w.enroll();
      } else if (!active.empty() && roll == 1) {
        w.rekey(*active[w.rng.uniform(active.size())]);
      } else if (!active.empty()) {
        auto* v = active[w.rng.uniform(active.size())];
        w.ledger->sync_holder(v->params, v->synced);
        revoked_stale.push_back(v->params);
        w.revoke(*v);
      }
      ASSERT_EQ(w.ledger->commitment(), kzg::commit_evaluations(*w.pp, w.ledger->evaluations()));
      ASSERT_EQ(w.ledger->commitment(), commitment_from_state(*w.ledger));
    }
    w.sync_all();
    for (auto& v : w.vehicles) {
      bool active = w.ledger->search(ledger_key(v->e_id)) == Status::kCer;
      if (active) EXPECT_TRUE(holder_verifies(w, v->params));
    }
    for (const auto& p : revoked_stale) EXPECT_FALSE(holder_verifies(w, p));
    EXPECT_TRUE(w.ledger->verify_chain());
  }
}

TEST(ReplayTest, ReproducesStateAndCommitment) {
  TestWorld w(16, 14);
  for (int k = 0; k < 6; ++k) w.enroll();
  w.rekey(*w.vehicles[1]);
  w.revoke(*w.vehicles[2]);
  auto forger = identity::keygen(w.rng);
  auto stray = identity::encrypt_id(TestWorld::make_id(70), w.ra.sk);
  EXPECT_THROW(w.ledger->issue_certificate(make_issue_request(stray, forger.pk, w.now + 5, forger.sk),
                                           w.now),
               Error);
  w.ledger->mapping(FieldScalar(99), {Status::kPend, std::nullopt, 0});

  auto replayed = Ledger::replay(w.pp, w.ra.pk, w.ledger->log());
  EXPECT_EQ(replayed.commitment(), w.ledger->commitment());
  EXPECT_EQ(replayed.state(), w.ledger->state());
  EXPECT_EQ(replayed.next_index(), w.ledger->next_index());
  EXPECT_EQ(replayed.export_state(), w.ledger->export_state());
}

TEST(ReplayTest, RejectsEditedLog) {
  TestWorld w(8, 15);
  for (int k = 0; k < 3; ++k) w.enroll();
  auto log = w.ledger->log();
  log[1].update_ref->delta += FieldScalar::one();
  expect_error(ErrorCode::kCorruptState, [&] { Ledger::replay(w.pp, w.ra.pk, log); });
  log = w.ledger->log();
  log[2].payload.back() ^= 1;
  expect_error(ErrorCode::kCorruptState, [&] { Ledger::replay(w.pp, w.ra.pk, log); });
}

TEST(ExportTest, ByteExactRoundTrip) {
  TestWorld w(8, 16);
  for (int k = 0; k < 4; ++k) w.enroll();
  w.rekey(*w.vehicles[0]);
  w.revoke(*w.vehicles[3]);
  auto bytes = w.ledger->export_state();
  auto back = Ledger::import_state(w.pp, bytes);
  EXPECT_EQ(back.export_state(), bytes);
  EXPECT_EQ(back.commitment(), w.ledger->commitment());

  TestWorld empty(8, 17);
  auto empty_bytes = empty.ledger->export_state();
  EXPECT_EQ(Ledger::import_state(empty.pp, empty_bytes).export_state(), empty_bytes);
}

TEST(ExportTest, RejectsVersionAndCorruption) {
  TestWorld w(8, 18);
  for (int k = 0; k < 3; ++k) w.enroll();
  auto bytes = w.ledger->export_state();

  auto bad_version = bytes;
  bad_version[5] = 2;
  expect_error(ErrorCode::kVersionMismatch, [&] { Ledger::import_state(w.pp, bad_version); });

  // next_index lives right after magic, version and n.
  auto bad_index = bytes;
  bad_index[13] ^= 1;
  expect_error(ErrorCode::kCorruptState, [&] { Ledger::import_state(w.pp, bad_index); });

  auto bad_log = bytes;
  bad_log[bad_log.size() - 40] ^= 1;
  expect_error(ErrorCode::kCorruptState, [&] { Ledger::import_state(w.pp, bad_log); });

  TestWorld other(16, 19);
  expect_error(ErrorCode::kCorruptState, [&] { Ledger::import_state(other.pp, bytes); });
}

TEST(SyncTest, HolderFollowsOwnRevocation) {
  TestWorld w(8, 20);
  auto& a = w.enroll();
  w.enroll();
  w.revoke(a);
  w.sync_all();
  EXPECT_TRUE(a.params.u_i.is_zero());
  EXPECT_TRUE(holder_verifies(w, a.params));  // opens the sentinel, which no tuple may claim
}

}  // namespace
}  // namespace pbag::ledger
