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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pbag/counters.hpp"
#include "pbag/ledger.hpp"

/// Declarative, seed-deterministic scenarios and the benchmark harness behind
/// the `pbag` command-line tool.
namespace pbag::cli {

inline constexpr uint64_t kScenarioEpoch = 1'700'000'000;

/// One scripted action. `vehicles` holds labels; an empty list means every
/// currently certified vehicle for batch and sync, and is an error elsewhere.
struct ScriptStep {
  std::string action;
  std::vector<std::string> vehicles;
  bool expect = true;
  uint64_t seconds = 0;        // advance_time
  std::string message = "status";
  bool sync = true;            // auth actions refresh the holder first
  bool previous_proof = false; // auth actions present the pre-update parameters
};

struct ScenarioConfig {
  size_t n = 16;
  std::vector<std::string> fleet;  // vehicle labels
  uint64_t seed = 1;
  uint64_t freshness_window = 300;
  bool record_timings = false;
  std::vector<ScriptStep> script;

  /// Accepts `fleet` (labels) or `fleet_size` (labels v1..vN). Throws
  /// kMalformedInput or kScriptReferenceError.
  static ScenarioConfig from_json(const std::string& text);
  std::string to_json() const;
};

struct TranscriptLine {
  size_t step = 0;
  std::string action;
  std::string vehicle;
  bool outcome = false;
  std::string detail;
  bool expected = true;
  bool matches() const { return outcome == expected; }
};

struct ScenarioReport {
  std::vector<TranscriptLine> transcript;
  OpCounts counters;
  size_t plain_tuple_bytes = 0;
  size_t blinded_tuple_bytes = 0;
  size_t accepted = 0;
  size_t rejected = 0;
  size_t mismatches = 0;
  std::string final_commitment;  // hex
  uint64_t ledger_height = 0;
  std::optional<double> wall_ms;  // only when timings were requested

  bool ok() const { return mismatches == 0; }
  std::string to_text() const;
  std::string to_json() const;
};

struct ScenarioOutcome {
  std::unique_ptr<ledger::Ledger> ledger;
  ScenarioReport report;
};

/// Runs the script. Expectation mismatches are reported, not thrown; malformed
/// scripts throw kScriptReferenceError naming the step.
ScenarioOutcome run_scenario(const ScenarioConfig& config);

struct BatchRow {
  size_t size = 0;
  uint64_t pairings = 0;
  bool accepted = false;
  double total_us = 0;
  double per_message_us = 0;
};

struct BenchReport {
  size_t n = 0;
  size_t message_bytes = 0;
  OpCounts generation;  // per message
  double generation_us = 0;
  OpCounts single_verify;  // per message
  double single_verify_us = 0;
  std::vector<BatchRow> batches;
  size_t plain_tuple_bytes = 0;
  size_t blinded_tuple_bytes = 0;
  size_t accepted = 0;
  size_t rejected = 0;

  std::string to_text() const;
  std::string to_json() const;
};

struct BenchOptions {
  size_t n = 128;
  std::vector<size_t> batch_sizes = {1, 10, 50, 100};
  size_t samples = 20;
  size_t message_bytes = 200;
  uint64_t seed = 1;
};

/// Wall times are measured but only counters are contractual.
BenchReport bench(const BenchOptions& options);

}  // namespace pbag::cli
