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

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "pbag/bytes.hpp"

namespace pbag {

/// Deterministic byte stream keyed by a 32-byte seed (ChaCha20 via libsodium).
/// Every protocol actor draws its randomness from one of these so that scenario
/// runs are reproducible from a single integer seed.
class Drbg {
 public:
  explicit Drbg(uint64_t seed);
  explicit Drbg(const std::array<uint8_t, 32>& seed) : seed_(seed) {}

  /// Independent child stream; `label` separates roles drawing from one parent.
  Drbg fork(std::string_view label);

  void fill(std::span<uint8_t> out);
  Bytes bytes(size_t n);
  uint64_t next_u64();
  /// Uniform in [0, bound).
  uint64_t uniform(uint64_t bound);

  /// Fresh stream seeded from the OS entropy pool.
  static Drbg from_entropy();

 private:
  std::array<uint8_t, 32> seed_{};
  uint64_t counter_ = 0;
};

}  // namespace pbag
