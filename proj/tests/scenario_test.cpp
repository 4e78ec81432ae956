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

#include <fstream>
#include <sstream>

#include "pbag/error.hpp"
#include "pbag/scenario.hpp"

namespace pbag::cli {
namespace {

template <typename Fn>
ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kMalformedInput;
}

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(PBAG_SCENARIO_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioReport run(const std::string& text) { return run_scenario(ScenarioConfig::from_json(text)).report; }

TEST(ScenarioTest, MinimalHappyPath) {
  auto report = run(R"({"n": 4, "fleet": ["A"], "script": [
      {"action": "issue", "vehicle": "A"},
      {"action": "auth_trusted", "vehicle": "A"}]})");
  ASSERT_EQ(report.transcript.size(), 2u);
  EXPECT_TRUE(report.transcript[1].outcome);
  EXPECT_EQ(report.transcript[1].detail, "accept");
  EXPECT_TRUE(report.ok());
}

TEST(ScenarioTest, RevocationPath) {
  auto report = run(R"({"n": 4, "fleet": ["A"], "script": [
      {"action": "issue", "vehicle": "A"},
      {"action": "revoke", "vehicle": "A"},
      {"action": "auth_trusted", "vehicle": "A", "expect": false}]})");
  ASSERT_EQ(report.transcript.size(), 3u);
  EXPECT_FALSE(report.transcript[2].outcome);
  EXPECT_EQ(report.mismatches, 0u);
}

TEST(ScenarioTest, MismatchedExpectationIsCounted) {
  auto report = run(R"({"n": 4, "fleet": ["A"], "script": [
      {"action": "issue", "vehicle": "A"},
      {"action": "auth_trusted", "vehicle": "A", "expect": false}]})");
  EXPECT_EQ(report.mismatches, 1u);
  EXPECT_FALSE(report.ok());
  EXPECT_NE(report.to_text().find("MISMATCH"), std::string::npos);
}

TEST(ScenarioTest, SameConfigGivesIdenticalReports) {
  const std::string text = slurp("revocation.json");
  auto a = run(text);
  auto b = run(text);
  EXPECT_EQ(a.to_text(), b.to_text());
  EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(ScenarioTest, SeedChangesTheRun) {
  auto config = ScenarioConfig::from_json(slurp("minimal.json"));
  auto a = run_scenario(config).report;
  config.seed += 1;
  auto b = run_scenario(config).report;
  EXPECT_NE(a.final_commitment, b.final_commitment);
}

TEST(ScenarioTest, ConfigSurvivesJsonRoundTrip) {
  auto config = ScenarioConfig::from_json(slurp("fleet16.json"));
  auto again = ScenarioConfig::from_json(config.to_json());
  EXPECT_EQ(again.to_json(), config.to_json());
  EXPECT_EQ(again.fleet.size(), 16u);
  EXPECT_EQ(run_scenario(again).report.to_json(), run_scenario(config).report.to_json());
}

TEST(ScenarioTest, BundledScenariosMeetExpectations) {
  for (const char* name : {"minimal.json", "revocation.json", "fleet16.json"}) {
    auto report = run(slurp(name));
    EXPECT_TRUE(report.ok()) << name << "\n" << report.to_text();
  }
}

TEST(ScenarioTest, FleetFixtureShape) {
  auto report = run(slurp("fleet16.json"));
  size_t batches = 0;
  for (const auto& line : report.transcript) {
    if (line.action != "batch") continue;
    ++batches;
    EXPECT_EQ(line.detail, "size=15 pairings=2");
    EXPECT_TRUE(line.outcome);
  }
  EXPECT_EQ(batches, 1u);
  EXPECT_EQ(report.plain_tuple_bytes, 332u + 6);
  EXPECT_EQ(report.blinded_tuple_bytes, 364u + 6);
}

TEST(ScenarioTest, ReferenceErrors) {
  EXPECT_EQ(error_of([] { run(R"({"n": 4, "fleet": ["A"], "script": [{"action": "issue", "vehicle": "B"}]})"); }),
            ErrorCode::kScriptReferenceError);
  EXPECT_EQ(error_of([] { run(R"({"n": 4, "fleet": ["A"], "script": [{"action": "fly", "vehicle": "A"}]})"); }),
            ErrorCode::kScriptReferenceError);
  EXPECT_EQ(error_of([] { run(R"({"n": 4, "fleet": ["A"], "script": [{"action": "issue"}]})"); }),
            ErrorCode::kScriptReferenceError);
  EXPECT_EQ(error_of([] { run(R"({"n": 4, "fleet": ["A"], "script": [{"action": "replay", "vehicle": "A"}]})"); }),
            ErrorCode::kScriptReferenceError);
  EXPECT_EQ(error_of([] { run(R"({"n": 2, "fleet_size": 3, "script": []})"); }), ErrorCode::kMalformedInput);
  EXPECT_EQ(error_of([] { run("{not json"); }), ErrorCode::kMalformedInput);
  EXPECT_EQ(error_of([] { run(R"({"n": 4, "fleet": ["A"], "script": [{"vehicle": "A"}]})"); }),
            ErrorCode::kMalformedInput);
}

TEST(ScenarioTest, FailedOperationsAreRecordedNotThrown) {
  auto report = run(R"({"n": 2, "fleet": ["A", "B"], "script": [
      {"action": "update", "vehicle": "A", "expect": false},
      {"action": "issue", "vehicles": ["A", "B"]},
      {"action": "issue", "vehicle": "B", "expect": false},
      {"action": "revoke", "vehicle": "A"},
      {"action": "revoke", "vehicle": "A", "expect": false}]})");
  EXPECT_TRUE(report.ok()) << report.to_text();
  EXPECT_EQ(report.transcript[0].detail, "NotRegistered");
  EXPECT_EQ(report.transcript[3].detail, "AlreadyRegistered");
}

class StateFileTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    outcome = new ScenarioOutcome(run_scenario(ScenarioConfig::from_json(slurp("revocation.json"))));
  }
  static void TearDownTestSuite() { delete outcome; }
  static ScenarioOutcome* outcome;
};
ScenarioOutcome* StateFileTest::outcome = nullptr;

TEST_F(StateFileTest, RoundTripIsByteExact) {
  const auto& l = *outcome->ledger;
  Bytes image = l.export_state();
  auto back = ledger::Ledger::import_state(std::make_shared<kzg::PublicParameters>(l.params()), image);
  EXPECT_EQ(back.export_state(), image);
  EXPECT_EQ(back.commitment(), l.commitment());
}

TEST_F(StateFileTest, EveryFlippedByteIsRefused) {
  const auto& l = *outcome->ledger;
  auto pp = std::make_shared<kzg::PublicParameters>(l.params());
  const Bytes image = l.export_state();
  size_t refused = 0;
  for (size_t pos = 0; pos < image.size(); ++pos) {
    Bytes bad = image;
    bad[pos] ^= 0x01;
    try {
      auto got = ledger::Ledger::import_state(pp, bad);
      ADD_FAILURE() << "accepted flip at byte " << pos;
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::kCorruptState || e.code() == ErrorCode::kVersionMismatch)
          << e.what();
      ++refused;
    }
  }
  EXPECT_EQ(refused, image.size());
}

TEST_F(StateFileTest, EmptyAndTruncatedFilesAreRefused) {
  auto pp = std::make_shared<kzg::PublicParameters>(outcome->ledger->params());
  const Bytes image = outcome->ledger->export_state();
  EXPECT_EQ(error_of([&] { ledger::Ledger::import_state(pp, Bytes{}); }), ErrorCode::kCorruptState);
  for (size_t len : {size_t{1}, size_t{4}, size_t{6}, image.size() / 2, image.size() - 1}) {
    EXPECT_EQ(error_of([&] { ledger::Ledger::import_state(pp, ByteSpan(image.data(), len)); }),
              ErrorCode::kCorruptState)
        << len;
  }
}

TEST(BenchTest, CountersMatchTheAnalyticalBudget) {
  BenchOptions options;
  options.n = 128;
  options.samples = 5;
  options.batch_sizes = {1, 10, 50, 100};
  auto report = bench(options);
  EXPECT_EQ(report.generation.exponentiations(), 3u);
  EXPECT_EQ(report.generation.hashes, 1u);
  EXPECT_EQ(report.generation.pairings, 0u);
  EXPECT_EQ(report.single_verify.pairings, 2u);
  ASSERT_EQ(report.batches.size(), 4u);
  for (const auto& row : report.batches) {
    EXPECT_EQ(row.pairings, 2u) << row.size;
    EXPECT_TRUE(row.accepted) << row.size;
  }
  EXPECT_EQ(report.rejected, 0u);
  EXPECT_EQ(report.plain_tuple_bytes, 532u);
  EXPECT_EQ(report.blinded_tuple_bytes, 564u);
  EXPECT_NE(report.to_text().find("pairings"), std::string::npos);
  EXPECT_NE(report.to_json().find("\"batches\""), std::string::npos);
}

TEST(BenchTest, OversizedBatchIsRefused) {
  BenchOptions options;
  options.n = 8;
  options.batch_sizes = {16};
  EXPECT_EQ(error_of([&] { bench(options); }), ErrorCode::kMalformedInput);
}

}  // namespace
}  // namespace pbag::cli
