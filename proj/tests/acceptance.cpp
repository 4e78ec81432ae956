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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails. All thresholds are fixed below.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fleet.hpp"
#include "pbag/algebra/domain.hpp"
#include "pbag/auth.hpp"
#include "pbag/error.hpp"
#include "pbag/kzg.hpp"
#include "pbag/ledger.hpp"
#include "pbag/scenario.hpp"

namespace {

using namespace pbag;
using algebra::EvaluationDomain;
using algebra::FieldScalar;
using algebra::Polynomial;
using curve::G1Point;
using curve::G2Point;
using pbag::testing::TestVehicle;
using pbag::testing::TestWorld;

// ---- thresholds ----
constexpr double kKzgSuiteBudgetSeconds = 120.0;
constexpr size_t kPolysPerSize = 100;
constexpr size_t kForgeryTrials = 10'000;
constexpr size_t kIdentitySubsets = 50;
constexpr size_t kIdentityPointsPerSubset = 10;
constexpr size_t kUpdateSequences = 200;
constexpr size_t kMaxFleet = 64;
constexpr size_t kBatchSpeedupAt = 64;
constexpr double kBatchSpeedupFactor = 5.0;
constexpr size_t kBitFlipTrials = 1000;
constexpr size_t kTraceTrials = 1000;
constexpr size_t kReplayTrials = 200;
constexpr double kReferenceTupleBytes = 554.0;
constexpr double kSizeTolerance = 0.15;
constexpr size_t kReferenceMessageBytes = 200;
constexpr double kScenarioBudgetSeconds = 30.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && first_failure_.empty()) first_failure_ = what;
    pass_ = pass_ && ok;
  }
  Outcome done(std::string detail) const {
    if (!pass_) detail += "; first failure: " + first_failure_;
    return {pass_, std::move(detail)};
  }

 private:
  bool pass_ = true;
  std::string first_failure_;
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<size_t> random_subset(Drbg& rng, size_t n) {
  std::set<size_t> picked;
  size_t want = 1 + rng.uniform(n);
  while (picked.size() < want) picked.insert(rng.uniform(n));
  return {picked.begin(), picked.end()};
}

// ---- 1. KZG correctness ----

Outcome kzg_suite() {
  const auto start = std::chrono::steady_clock::now();
  Check check;
  Drbg rng(1001);
  size_t completeness = 0, attempts = 0, forgeries_accepted = 0, forgeries = 0, path_mismatch = 0;

  for (size_t n : {4, 16, 64, 256}) {
    Drbg setup_rng = rng.fork("setup");
    auto pp = kzg::setup(n, setup_rng);
    const size_t forgeries_here = kForgeryTrials / 4;
    for (size_t k = 0; k < kPolysPerSize; ++k) {
      auto poly = Polynomial::random(n - 1, rng);
      auto c = kzg::commit(pp, poly);
      if (!(c == kzg::commit_evaluations(pp, pp.domain.fft(poly.coeffs())))) ++path_mismatch;

      // Every slot for the small domains, four random slots otherwise.
      std::vector<size_t> slots;
      if (n <= 16) {
        for (size_t i = 0; i < n; ++i) slots.push_back(i);
      } else {
        for (int s = 0; s < 4; ++s) slots.push_back(rng.uniform(n));
      }
      for (size_t i : slots) {
        auto open = kzg::prove_single(pp, poly, i);
        ++attempts;
        if (kzg::verify_single(pp, c, pp.domain.element(i), open.value, open.proof)) ++completeness;
      }

      // Forgeries: wrong value, random proof element, or a valid proof moved to another slot.
      for (size_t f = 0; f < forgeries_here / kPolysPerSize; ++f) {
        size_t i = rng.uniform(n);
        auto open = kzg::prove_single(pp, poly, i);
        FieldScalar x = pp.domain.element(i), y = open.value;
        kzg::EvaluationProof proof = open.proof;
        switch (f % 3) {
          case 0: y = y + FieldScalar::random(rng); break;
          case 1: proof.element = G1Point::from_scalar(FieldScalar::random(rng)); break;
          default: x = pp.domain.element((i + 1 + rng.uniform(n - 1)) % n); break;
        }
        ++forgeries;
        if (kzg::verify_single(pp, c, x, y, proof)) ++forgeries_accepted;
      }
    }
  }
  const double elapsed = seconds_since(start);
  check.expect(completeness == attempts, "completeness");
  check.expect(forgeries == kForgeryTrials, "forgery count");
  check.expect(forgeries_accepted == 0, "forgery accepted");
  check.expect(path_mismatch == 0, "coefficient/evaluation commitment mismatch");
  check.expect(elapsed < kKzgSuiteBudgetSeconds, "runtime");
  return check.done(fmt("completeness %zu/%zu, forgeries accepted %zu/%zu, path mismatches %zu, %.1f s (< %.0f s)",
                        completeness, attempts, forgeries_accepted, forgeries, path_mismatch, elapsed,
                        kKzgSuiteBudgetSeconds));
}

// ---- 2. Algebraic identities ----

Outcome algebraic_identities() {
  Check check;
  Drbg rng(2002);
  size_t derivative_checks = 0, fraction_checks = 0, lagrange_checks = 0, aggregate_checks = 0;

  for (size_t n = 1; n <= 256; n *= 2) {
    auto domain = algebra::roots_of_unity(n);
    std::vector<size_t> all(n);
    for (size_t i = 0; i < n; ++i) all[i] = i;
    auto symbolic = algebra::vanishing_poly(all, domain).derivative();
    for (size_t i = 0; i < n; ++i) {
      FieldScalar expected = FieldScalar(n) * domain.omega_inv().pow(i);
      check.expect(algebra::derivative_at_root(all, i, domain) == expected, fmt("D'(w^%zu), n=%zu", i, n));
      check.expect(symbolic.evaluate(domain.element(i)) == expected, fmt("symbolic D'(w^%zu), n=%zu", i, n));
      ++derivative_checks;
    }
  }

  auto domain = algebra::roots_of_unity(64);
  for (size_t s = 0; s < kIdentitySubsets; ++s) {
    auto subset = random_subset(rng, 64);
    auto coeffs = algebra::partial_fraction_coeffs(subset, domain);
    auto d_i = algebra::vanishing_poly(subset, domain);
    for (size_t z = 0; z < kIdentityPointsPerSubset; ++z) {
      FieldScalar x = FieldScalar::random(rng);
      FieldScalar sum;
      for (const auto& [i, c] : coeffs) sum += c * d_i.evaluate(x) / (x - domain.element(i));
      check.expect(sum == FieldScalar::one(), "partial fractions");
      ++fraction_checks;
    }
  }

  Drbg setup_rng = rng.fork("setup");
  auto pp = kzg::setup(32, setup_rng);
  for (size_t s = 0; s < kIdentitySubsets; ++s) {
    auto psi = Polynomial::random(31, rng);
    size_t i = rng.uniform(32);
    FieldScalar delta = FieldScalar::random(rng);
    auto moved = psi + pp.domain.lagrange_basis(i) * delta;
    for (size_t j = 0; j < 32; ++j) {
      FieldScalar expected = psi.evaluate(pp.domain.element(j)) + (i == j ? delta : FieldScalar::zero());
      check.expect(moved.evaluate(pp.domain.element(j)) == expected, "slot edit pointwise");
      ++lagrange_checks;
    }
    check.expect(kzg::update_commitment(pp, kzg::commit(pp, psi), i, delta) == kzg::commit(pp, moved),
                 "slot edit commitment");

    auto subset = random_subset(rng, 32);
    std::vector<kzg::ProofItem> items;
    for (size_t k : subset) {
      auto open = kzg::prove_single(pp, psi, k);
      items.push_back({k, open.value, open.proof});
    }
    check.expect(kzg::aggregate_proofs(pp, items) == kzg::prove_multi(pp, psi, subset).proof, "aggregate");
    ++aggregate_checks;
  }
  return check.done(fmt("derivative %zu points (n<=256), partial fractions %zu, slot edits %zu points, "
                        "aggregates %zu, exact equality",
                        derivative_checks, fraction_checks, lagrange_checks, aggregate_checks));
}

// ---- 3. Update equivalence ----

struct Holder {
  identity::EncryptedId e_id;
  identity::KeyPair key;
  identity::Signature sigma_fsk{};
  identity::ParameterSet params;
  uint64_t synced = 0;
  uint64_t t_expired = 0;
  bool active = true;
};

Outcome update_equivalence() {
  Check check;
  Drbg rng(3003);
  std::map<size_t, std::shared_ptr<kzg::PublicParameters>> params;
  for (size_t n : {8, 16, 32, 64}) {
    Drbg setup_rng = rng.fork("setup");
    params[n] = std::make_shared<kzg::PublicParameters>(kzg::setup(n, setup_rng));
  }
  auto ra = identity::keygen(rng);
  constexpr uint64_t now = pbag::testing::kEpoch;
  size_t sequences_ok = 0, ops = 0, proofs_compared = 0, local_refreshes = 0;

  for (size_t seq = 0; seq < kUpdateSequences; ++seq) {
    const size_t n = size_t{8} << (seq % 4);
    auto pp = params[n];
    const size_t fleet = std::min(kMaxFleet, n);
    ledger::Ledger ledger(pp, ra.pk);
    std::vector<Holder> holders;
    bool seq_ok = true;
    const size_t steps = 10 + rng.uniform(3 * fleet);

    for (size_t step = 0; step < steps; ++step) {
      std::vector<size_t> active;
      for (size_t h = 0; h < holders.size(); ++h) {
        if (holders[h].active) active.push_back(h);
      }
      const uint64_t roll = rng.uniform(3);
      if ((roll == 0 || active.empty()) && holders.size() < fleet) {
        Holder h;
        h.e_id = identity::encrypt_id(TestWorld::make_id(seq * 1000 + holders.size()), ra.sk);
        h.key = identity::keygen(rng);
        h.t_expired = now + pbag::testing::kLifetime;
        auto req = ledger::make_issue_request(h.e_id, h.key.pk, h.t_expired, ra.sk);
        h.sigma_fsk = req.sigma_fsk;
        auto issued = ledger.issue_certificate(req, now);
        h.params = issued.params;
        h.synced = issued.height;
        holders.push_back(std::move(h));
      } else if (!active.empty() && roll == 1) {
        auto& h = holders[active[rng.uniform(active.size())]];
        h.synced = ledger.sync_holder(h.params, h.synced);
        auto next = identity::keygen(rng);
        auto updated =
            ledger.update_certificate(ledger::make_update_request(h.e_id, h.key, next, h.t_expired), h.params);
        h.key = next;
        h.params = updated.params;
        h.synced = updated.height;
      } else if (!active.empty()) {
        auto& h = holders[active[rng.uniform(active.size())]];
        ledger.revoke_certificate(ledger::make_revoke_request(h.e_id, h.key, h.t_expired, h.sigma_fsk));
        h.active = false;
        // The revoked holder follows its own slot edit through the local path.
        const size_t before = h.synced;
        h.synced = ledger.sync_holder(h.params, h.synced);
        if (h.synced > before) ++local_refreshes;
      } else {
        continue;
      }
      ++ops;
      // Lazy, random refresh cadence so proofs absorb runs of edits.
      for (auto& h : holders) {
        if (rng.uniform(4) == 0) h.synced = ledger.sync_holder(h.params, h.synced);
      }
      if (!(ledger.commitment() == kzg::commit_evaluations(*pp, ledger.evaluations()))) seq_ok = false;
    }

    auto psi = pp->domain.ifft(ledger.evaluations());
    if (!(kzg::commit(*pp, psi) == ledger.commitment())) seq_ok = false;
    for (auto& h : holders) {
      h.synced = ledger.sync_holder(h.params, h.synced);
      auto fresh = kzg::prove_single(*pp, psi, h.params.index);
      ++proofs_compared;
      if (!(fresh.proof == h.params.proof) || !(fresh.value == h.params.u_i)) seq_ok = false;
      if (!(G1Point::from_scalar(h.params.u_i) == h.params.g_u)) seq_ok = false;
    }
    check.expect(seq_ok, fmt("sequence %zu", seq));
    if (seq_ok) ++sequences_ok;
  }
  return check.done(fmt("%zu/%zu sequences exact (%zu edits, %zu holder proofs compared, %zu own-slot refreshes)",
                        sequences_ok, kUpdateSequences, ops, proofs_compared, local_refreshes));
}

// ---- 4. Pairing budget and batch speedup ----

Outcome pairing_budget() {
  Check check;
  cli::BenchOptions options;
  options.n = 128;
  options.batch_sizes = {1, 10, 50, kBatchSpeedupAt, 100};
  options.samples = 32;
  options.seed = 4004;
  auto report = cli::bench(options);

  check.expect(report.single_verify.pairings == 2, "single verify pairings");
  std::string pairings;
  double per_message_at = 0;
  for (const auto& row : report.batches) {
    check.expect(row.accepted, fmt("batch %zu accepted", row.size));
    check.expect(row.pairings == 2, fmt("batch %zu pairings", row.size));
    pairings += fmt("%s%zu:%llu", pairings.empty() ? "" : " ", row.size,
                    static_cast<unsigned long long>(row.pairings));
    if (row.size == kBatchSpeedupAt) per_message_at = row.per_message_us;
  }
  const double limit = report.single_verify_us / kBatchSpeedupFactor;
  check.expect(per_message_at < limit, "batch speedup");
  return check.done(fmt("single verify %llu pairings; batch pairings {%s}; batch-%zu %.1f us/msg vs single %.1f us "
                        "(limit %.1f)",
                        static_cast<unsigned long long>(report.single_verify.pairings), pairings.c_str(),
                        kBatchSpeedupAt, per_message_at, report.single_verify_us, limit));
}

// ---- 5. Security trials ----

Outcome security_trials() {
  Check check;
  TestWorld world(32, 5005);
  for (int k = 0; k < 24; ++k) world.enroll();
  world.sync_all();
  auto verifier = auth::Verifier::create(world.rng);
  const auto& pp = *world.pp;
  auto cred = [](const TestVehicle& v) { return auth::Credential{v.e_id, v.key, v.params}; };
  auto session = [&](const TestVehicle& v) {
    return auth::SessionContext::start(world.rng, v.key.pk, verifier.published);
  };
  auto message = [&] { return world.rng.bytes(1 + world.rng.uniform(200)); };
  auto pick = [&]() -> TestVehicle& { return *world.vehicles[world.rng.uniform(world.vehicles.size())]; };
  auth::VerifyClock clock{world.now, auth::kDefaultWindow};

  // Replay after the freshness window, both flows.
  size_t stale = 0;
  auth::VerifyClock later{world.now + auth::kDefaultWindow + 1, auth::kDefaultWindow};
  for (size_t k = 0; k < kReplayTrials; ++k) {
    auto& v = pick();
    auto s = session(v);
    auto m = message();
    auto t = auth::gen_auth_trusted(cred(v), s, world.ra.pk, m, world.now);
    auto b = auth::gen_auth_untrusted(cred(v), s, world.ra.pk, m, world.now);
    bool fresh_ok = static_cast<bool>(
        auth::verify_auth_trusted(pp, world.ledger->commitment(), t, verifier, s.published, clock));
    auto rt = auth::verify_auth_trusted(pp, world.ledger->commitment(), t, verifier, s.published, later);
    auto rb = auth::verify_auth_untrusted(pp, world.ledger->commitment(), b, verifier, s.published, later);
    if (fresh_ok && rt.verdict == auth::Verdict::kStale && rb.verdict == auth::Verdict::kStale) ++stale;
  }
  check.expect(stale == kReplayTrials, "replay");

  // Single-bit modifications anywhere in the serialized tuple.
  size_t flip_accepts = 0;
  for (size_t k = 0; k < kBitFlipTrials; ++k) {
    auto& v = pick();
    auto s = session(v);
    auto m = message();
    const bool blinded = k % 2 == 1;
    Bytes wire = blinded ? auth::gen_auth_untrusted(cred(v), s, world.ra.pk, m, world.now).serialize()
                         : auth::gen_auth_trusted(cred(v), s, world.ra.pk, m, world.now).serialize();
    size_t bit = world.rng.uniform(wire.size() * 8);
    wire[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    try {
      bool ok = blinded ? static_cast<bool>(auth::verify_auth_untrusted(
                              pp, world.ledger->commitment(), auth::AuthTupleBlinded::deserialize(wire), verifier,
                              s.published, clock))
                        : static_cast<bool>(auth::verify_auth_trusted(pp, world.ledger->commitment(),
                                                                      auth::AuthTuplePlain::deserialize(wire),
                                                                      verifier, s.published, clock));
      if (ok) ++flip_accepts;
    } catch (const Error&) {
      // Unparseable tuples count as rejected.
    }
  }
  check.expect(flip_accepts == 0, "bit flip accepted");

  // r = 1: the blinded pairing equation collapses to 1 == 1 for any claimed value.
  auto& victim = pick();
  auto s = session(victim);
  auto forged = auth::gen_auth_untrusted(cred(victim), s, world.ra.pk, message(), world.now);
  forged.pi_au = G1Point::identity();
  forged.g_r_minus_1 = G2Point::identity();
  forged.g_u_prime_au = G1Point::from_scalar(FieldScalar::random(world.rng));
  const bool collapses = curve::pairings_equal(world.ledger->commitment().element - forged.g_u_prime_au,
                                               forged.g_r_minus_1, forged.pi_au,
                                               pp.g2_tau() - forged.g_omega_au);
  const auto forged_verdict =
      auth::verify_auth_untrusted(pp, world.ledger->commitment(), forged, verifier, s.published, clock).verdict;
  bool r1_refused = false;
  try {
    auth::gen_auth_untrusted(cred(victim), auth::SessionContext::with_blinder(identity::Scalar(1), victim.key.pk,
                                                                               verifier.published),
                             world.ra.pk, message(), world.now);
  } catch (const Error& e) {
    r1_refused = e.code() == ErrorCode::kDegenerateBlinder;
  }
  check.expect(collapses && forged_verdict == auth::Verdict::kDegenerate && r1_refused, "r = 1");

  // Revoked holders presenting their retained credential, both flows.
  size_t revoked = 0, revoked_rejected = 0;
  std::vector<std::pair<auth::AuthTuplePlain, auth::AuthTupleBlinded>> retained;
  std::vector<auth::SessionContext> retained_sessions;
  for (size_t k = 0; k < 8; ++k) {
    auto& v = *world.vehicles[k * 3];
    auto vs = session(v);
    auto m = message();
    retained.emplace_back(auth::gen_auth_trusted(cred(v), vs, world.ra.pk, m, world.now),
                          auth::gen_auth_untrusted(cred(v), vs, world.ra.pk, m, world.now));
    retained_sessions.push_back(vs);
    world.revoke(v);
    ++revoked;
    // Every earlier revoked tuple stays rejected as the ledger moves on.
    for (size_t j = 0; j < retained.size(); ++j) {
      const auto& c = world.ledger->commitment();
      const auto& pub = retained_sessions[j].published;
      if (!auth::verify_auth_trusted(pp, c, retained[j].first, verifier, pub, clock) &&
          !auth::verify_auth_untrusted(pp, c, retained[j].second, verifier, pub, clock)) {
        if (j + 1 == retained.size()) ++revoked_rejected;
      } else {
        check.expect(false, fmt("revoked tuple %zu accepted", j));
      }
    }
  }
  // Same check over every bundled scenario: each revoke is followed by rejected attempts.
  size_t scenario_revokes = 0;
  for (const char* name : {"revocation.json", "fleet16.json"}) {
    std::ifstream in(std::string(PBAG_SCENARIO_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    auto report = cli::run_scenario(cli::ScenarioConfig::from_json(ss.str())).report;
    check.expect(report.ok(), fmt("scenario %s", name));
    std::set<std::string> gone;
    for (const auto& line : report.transcript) {
      if (line.action == "revoke" && line.outcome) {
        gone.insert(line.vehicle);
        ++scenario_revokes;
      } else if (gone.count(line.vehicle) && line.action.rfind("auth_", 0) == 0) {
        check.expect(!line.outcome, fmt("%s: revoked %s accepted", name, line.vehicle.c_str()));
      }
    }
  }
  world.sync_all();

  // Trace round trip.
  size_t traced = 0;
  for (size_t k = 0; k < kTraceTrials; ++k) {
    auto& v = *world.vehicles[1 + 3 * world.rng.uniform(7) + world.rng.uniform(2)];
    auto vs = session(v);
    const uint64_t t = world.now + world.rng.uniform(1000);
    auto tuple = auth::gen_auth_trusted(cred(v), vs, world.ra.pk, message(), t);
    auto got = auth::trace(tuple.e_a, vs.published, world.ra.sk);
    if (got.e_id_clip == identity::ledger_key(v.e_id) && got.timestamp == t) ++traced;
  }
  check.expect(traced == kTraceTrials, "trace");

  return check.done(fmt("replay rejected %zu/%zu; bit flips accepted %zu/%zu; r=1 forgery %s; revoked tuples "
                        "rejected %zu/%zu (+%zu scenario revocations); trace exact %zu/%zu",
                        stale, kReplayTrials, flip_accepts, kBitFlipTrials,
                        std::string(auth::to_string(forged_verdict)).c_str(), revoked_rejected, revoked,
                        scenario_revokes, traced, kTraceTrials));
}

// ---- 6. Message size ----

Outcome message_size() {
  Check check;
  TestWorld world(16, 6006);
  auto& v = world.enroll();
  auto verifier = auth::Verifier::create(world.rng);
  auto s = auth::SessionContext::start(world.rng, v.key.pk, verifier.published);
  const Bytes m(kReferenceMessageBytes, 'x');
  const size_t plain =
      auth::gen_auth_trusted({v.e_id, v.key, v.params}, s, world.ra.pk, m, world.now).serialize().size();
  const size_t blinded =
      auth::gen_auth_untrusted({v.e_id, v.key, v.params}, s, world.ra.pk, m, world.now).serialize().size();
  const double lo = kReferenceTupleBytes * (1 - kSizeTolerance), hi = kReferenceTupleBytes * (1 + kSizeTolerance);
  check.expect(plain == 532, "exact plain size");
  check.expect(blinded == 564, "exact blinded size");
  check.expect(plain >= lo && plain <= hi, "tolerance band");
  return check.done(fmt("plain %zu bytes for a %zu-byte message (band %.1f..%.1f), %+.1f%% vs %.0f; blinded %zu",
                        plain, kReferenceMessageBytes, lo, hi,
                        100.0 * (static_cast<double>(plain) - kReferenceTupleBytes) / kReferenceTupleBytes,
                        kReferenceTupleBytes, blinded));
}

// ---- 7. End-to-end fixture ----

Outcome end_to_end() {
  Check check;
  std::ifstream in(std::string(PBAG_SCENARIO_DIR) + "/fleet16.json");
  std::stringstream ss;
  ss << in.rdbuf();
  auto config = cli::ScenarioConfig::from_json(ss.str());
  const auto start = std::chrono::steady_clock::now();
  auto outcome = cli::run_scenario(config);
  const double elapsed = seconds_since(start);
  const auto& r = outcome.report;

  auto lines = [&](const std::string& action, const std::string& vehicle) {
    std::vector<const cli::TranscriptLine*> out;
    for (const auto& l : r.transcript) {
      if (l.action == action && l.vehicle == vehicle) out.push_back(&l);
    }
    return out;
  };
  size_t first_round = 0;
  for (size_t k = 1; k <= 16; ++k) {
    const std::string v = "v" + std::to_string(k);
    auto trusted = lines("auth_trusted", v), untrusted = lines("auth_untrusted", v);
    if (!trusted.empty() && !untrusted.empty() && trusted[0]->outcome && untrusted[0]->outcome) ++first_round;
  }
  check.expect(config.fleet.size() == 16 && first_round == 16, "all 16 authenticate");
  auto v3 = lines("auth_trusted", "v3");
  check.expect(v3.size() == 3 && v3[1]->outcome == false && v3[2]->outcome, "update of v3");
  auto v7 = lines("auth_trusted", "v7");
  check.expect(v7.size() == 3 && !v7[1]->outcome && v7[2]->outcome, "refresh of v7");
  auto v5 = lines("auth_trusted", "v5");
  check.expect(v5.size() >= 2 && !v5.back()->outcome && !lines("auth_untrusted", "v5").back()->outcome,
               "revocation of v5");
  auto batch = lines("batch", "");
  check.expect(batch.size() == 1 && batch[0]->outcome && batch[0]->detail == "size=15 pairings=2", "batch");
  auto io = lines("export_import", "");
  check.expect(io.size() == 1 && io[0]->outcome, "export/import");
  check.expect(outcome.ledger->export_state() ==
                   ledger::Ledger::import_state(std::make_shared<kzg::PublicParameters>(outcome.ledger->params()),
                                                outcome.ledger->export_state())
                       .export_state(),
               "final round trip");
  check.expect(r.ok(), "scripted expectations");
  check.expect(elapsed < kScenarioBudgetSeconds, "runtime");
  return check.done(fmt("%zu steps, %zu/%zu expectations met, batch '%s', %.2f s (< %.0f s)", r.transcript.size(),
                        r.transcript.size() - r.mismatches, r.transcript.size(),
                        batch.empty() ? "-" : batch[0]->detail.c_str(), elapsed, kScenarioBudgetSeconds));
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"kzg-correctness", kzg_suite},        {"algebraic-identities", algebraic_identities},
      {"update-equivalence", update_equivalence}, {"pairing-budget", pairing_budget},
      {"security-trials", security_trials},  {"message-size", message_size},
      {"end-to-end-scenario", end_to_end},
  };
  int failures = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s [%zu] %-21s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].name, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
