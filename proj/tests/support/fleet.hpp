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

// Small vehicle fleet wired to a ledger, shared by the ledger, auth and
// acceptance tests.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pbag/identity.hpp"
#include "pbag/kzg.hpp"
#include "pbag/ledger.hpp"

namespace pbag::testing {

inline constexpr uint64_t kEpoch = 1'700'000'000;
inline constexpr uint64_t kLifetime = 365ull * 24 * 3600;

struct TestVehicle {
  std::string id;
  identity::EncryptedId e_id;
  identity::KeyPair key;
  identity::Signature sigma_fsk{};
  identity::ParameterSet params;
  uint64_t synced = 0;
  uint64_t t_expired = 0;
};

class TestWorld {
 public:
  TestWorld(size_t n, uint64_t seed);

  /// Issues a fresh vehicle into the next slot.
  TestVehicle& enroll();
  /// Rotates the vehicle's online key through an update request.
  void rekey(TestVehicle& v);
  void revoke(TestVehicle& v);
  /// Brings every vehicle's proof up to the current ledger height.
  void sync_all();

  static std::string make_id(size_t k);

  Drbg rng;
  std::shared_ptr<kzg::PublicParameters> pp;
  identity::KeyPair ra;
  std::unique_ptr<ledger::Ledger> ledger;
  std::vector<std::unique_ptr<TestVehicle>> vehicles;
  uint64_t now = kEpoch;
};

}  // namespace pbag::testing
