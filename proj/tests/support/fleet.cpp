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

#include "fleet.hpp"

namespace pbag::testing {

TestWorld::TestWorld(size_t n, uint64_t seed) : rng(seed) {
  Drbg setup_rng = rng.fork("setup");
  pp = std::make_shared<kzg::PublicParameters>(kzg::setup(n, setup_rng));
  ra = identity::keygen(rng);
  ledger = std::make_unique<ledger::Ledger>(pp, ra.pk);
}

std::string TestWorld::make_id(size_t k) {
  std::string id = "PLT" + std::to_string(100000 + k) + "VIN";
  id.resize(identity::kIdLength, '0');
  return id;
}

TestVehicle& TestWorld::enroll() {
  auto v = std::make_unique<TestVehicle>();
  v->id = make_id(vehicles.size());
  v->e_id = identity::encrypt_id(v->id, ra.sk);
  v->key = identity::keygen(rng);
  v->t_expired = now + kLifetime;
  auto req = ledger::make_issue_request(v->e_id, v->key.pk, v->t_expired, ra.sk);
  v->sigma_fsk = req.sigma_fsk;
  auto issued = ledger->issue_certificate(req, now);
  v->params = issued.params;
  v->synced = issued.height;
  vehicles.push_back(std::move(v));
  return *vehicles.back();
}

void TestWorld::rekey(TestVehicle& v) {
  ledger->sync_holder(v.params, v.synced);
  auto next = identity::keygen(rng);
  auto req = ledger::make_update_request(v.e_id, v.key, next, v.t_expired);
  auto updated = ledger->update_certificate(req, v.params);
  v.key = next;
  v.params = updated.params;
  v.synced = updated.height;
}

void TestWorld::revoke(TestVehicle& v) {
  ledger->revoke_certificate(ledger::make_revoke_request(v.e_id, v.key, v.t_expired, v.sigma_fsk));
}

void TestWorld::sync_all() {
  for (auto& v : vehicles) v->synced = ledger->sync_holder(v->params, v->synced);
}

}  // namespace pbag::testing
