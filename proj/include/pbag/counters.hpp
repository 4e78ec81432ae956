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

#include <atomic>
#include <cstdint>

namespace pbag {

/// Plain snapshot of the operation counters.
struct OpCounts {
  uint64_t pairings = 0;   // Miller loops evaluated
  uint64_t g1_mults = 0;   // single-base scalar multiplications in G1
  uint64_t g2_mults = 0;   // ... in G2
  uint64_t ec_mults = 0;   // ... on the signature curve
  uint64_t msms = 0;       // multi-scalar multiplications (any group)
  uint64_t hashes = 0;     // protocol hash H invocations

  uint64_t exponentiations() const { return g1_mults + g2_mults + ec_mults; }

  OpCounts operator-(const OpCounts& o) const {
    return {pairings - o.pairings, g1_mults - o.g1_mults, g2_mults - o.g2_mults,
            ec_mults - o.ec_mults, msms - o.msms,         hashes - o.hashes};
  }
  bool operator==(const OpCounts&) const = default;
};

/// Process-wide instrumentation. Counts are only meaningful in
/// single-threaded measurements.
class OpCounters {
 public:
  static OpCounters& global();

  void add_pairings(uint64_t n) { pairings_.fetch_add(n, std::memory_order_relaxed); }
  void add_g1_mult() { g1_.fetch_add(1, std::memory_order_relaxed); }
  void add_g2_mult() { g2_.fetch_add(1, std::memory_order_relaxed); }
  void add_ec_mult() { ec_.fetch_add(1, std::memory_order_relaxed); }
  void add_msm() { msm_.fetch_add(1, std::memory_order_relaxed); }
  void add_hash() { hash_.fetch_add(1, std::memory_order_relaxed); }

  OpCounts snapshot() const;
  void reset();

 private:
  std::atomic<uint64_t> pairings_{0}, g1_{0}, g2_{0}, ec_{0}, msm_{0}, hash_{0};
};

/// Measures the counter delta over its lifetime.
class CounterScope {
 public:
  CounterScope() : start_(OpCounters::global().snapshot()) {}
  OpCounts delta() const { return OpCounters::global().snapshot() - start_; }

 private:
  OpCounts start_;
};

}  // namespace pbag
