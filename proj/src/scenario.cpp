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

#include "pbag/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>

#include "json.hpp"
#include "pbag/auth.hpp"
#include "pbag/error.hpp"
#include "pbag/identity.hpp"

namespace pbag::cli {

using nlohmann::json;

namespace {

constexpr uint64_t kLifetime = 365ull * 24 * 3600;

const std::vector<std::string>& known_actions() {
  static const std::vector<std::string> actions = {
      "issue",  "update", "revoke",       "auth_trusted", "auth_untrusted", "batch",  "trace",
      "replay", "tamper", "advance_time", "sync",         "export_import"};
  return actions;
}

bool takes_no_vehicles(const std::string& action) {
  return action == "advance_time" || action == "export_import";
}

bool empty_means_all(const std::string& action) { return action == "batch" || action == "sync"; }

Error script_error(size_t step, const std::string& what) {
  return Error(ErrorCode::kScriptReferenceError, "step " + std::to_string(step) + ": " + what);
}

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

struct LastTuple {
  bool blinded = false;
  Bytes wire;
  identity::Point published;
};

struct SimVehicle {
  std::string label;
  std::string id;
  identity::EncryptedId e_id;
  identity::KeyPair key;
  identity::Signature sigma_fsk{};
  identity::ParameterSet params;
  std::optional<identity::ParameterSet> previous;
  uint64_t synced = 0;
  uint64_t t_expired = 0;
  bool issued = false;
  std::optional<LastTuple> last;
};

class World {
 public:
  World(size_t n, uint64_t seed, uint64_t window) : rng_(seed), window_(window) {
    Drbg setup_rng = rng_.fork("setup");
    pp_ = std::make_shared<kzg::PublicParameters>(kzg::setup(n, setup_rng));
    Drbg ra_rng = rng_.fork("authority");
    ra_ = identity::keygen(ra_rng);
    Drbg verifier_rng = rng_.fork("verifier");
    verifier_ = auth::Verifier::create(verifier_rng);
    ledger_ = std::make_unique<ledger::Ledger>(pp_, ra_.pk);
  }

  SimVehicle& add_vehicle(const std::string& label) {
    SimVehicle v;
    v.label = label;
    v.id = "PB" + std::to_string(1000000 + vehicles_.size()) + "WVWZZZ1K";
    v.id.resize(identity::kIdLength, '0');
    v.e_id = identity::encrypt_id(v.id, ra_.sk);
    v.key = identity::keygen(rng_);
    vehicles_.push_back(std::move(v));
    by_label_[label] = vehicles_.size() - 1;
    return vehicles_.back();
  }

  SimVehicle* find(const std::string& label) {
    auto it = by_label_.find(label);
    return it == by_label_.end() ? nullptr : &vehicles_[it->second];
  }

  void issue(SimVehicle& v) {
    const uint64_t t_expired = now + kLifetime;
    auto key = v.issued ? identity::keygen(rng_) : v.key;
    auto req = ledger::make_issue_request(v.e_id, key.pk, t_expired, ra_.sk);
    auto issued = ledger_->issue_certificate(req, now);
    v.key = key;
    v.sigma_fsk = req.sigma_fsk;
    v.t_expired = t_expired;
    v.params = issued.params;
    v.synced = issued.height;
    v.issued = true;
  }

  void update(SimVehicle& v) {
    if (v.issued) v.synced = ledger_->sync_holder(v.params, v.synced);
    auto next = identity::keygen(rng_);
    auto req = ledger::make_update_request(v.e_id, v.key, next, v.t_expired);
    auto updated = ledger_->update_certificate(req, v.params);
    v.previous = v.params;
    v.key = next;
    v.params = updated.params;
    v.synced = updated.height;
  }

  void revoke(SimVehicle& v) {
    ledger_->revoke_certificate(
        ledger::make_revoke_request(v.e_id, v.key, v.t_expired, v.sigma_fsk));
    v.previous = v.params;
  }

  void sync(SimVehicle& v) {
    if (v.issued) v.synced = ledger_->sync_holder(v.params, v.synced);
  }

  auth::Credential credential(const SimVehicle& v, bool previous) const {
    return {v.e_id, v.key, previous ? *v.previous : v.params};
  }

  auth::SessionContext session(const SimVehicle& v) {
    return auth::SessionContext::start(rng_, v.key.pk, verifier_.published);
  }

  auth::VerifyClock clock() const { return {now, window_}; }

  auth::VerifyResult verify(const LastTuple& t) const {
    if (t.blinded) {
      return auth::verify_auth_untrusted(*pp_, ledger_->commitment(),
                                         auth::AuthTupleBlinded::deserialize(t.wire), verifier_,
                                         t.published, clock());
    }
    return auth::verify_auth_trusted(*pp_, ledger_->commitment(),
                                     auth::AuthTuplePlain::deserialize(t.wire), verifier_,
                                     t.published, clock());
  }

  Drbg& rng() { return rng_; }
  const identity::KeyPair& ra() const { return ra_; }
  const auth::Verifier& verifier() const { return verifier_; }
  const kzg::PublicParameters& pp() const { return *pp_; }
  std::shared_ptr<const kzg::PublicParameters> pp_ptr() const { return pp_; }
  ledger::Ledger& ledger() { return *ledger_; }
  std::unique_ptr<ledger::Ledger>& ledger_ptr() { return ledger_; }
  std::vector<SimVehicle>& vehicles() { return vehicles_; }

  uint64_t now = kScenarioEpoch;

 private:
  Drbg rng_;
  uint64_t window_;
  std::shared_ptr<kzg::PublicParameters> pp_;
  identity::KeyPair ra_;
  auth::Verifier verifier_;
  std::unique_ptr<ledger::Ledger> ledger_;
  std::vector<SimVehicle> vehicles_;
  std::map<std::string, size_t> by_label_;
};

std::string error_detail(const Error& e) { return std::string(to_string(e.code())); }

}  // namespace

// ---- config ----

ScenarioConfig ScenarioConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, e.what());
  }
  ScenarioConfig c;
  try {
    c.n = j.value("n", c.n);
    c.seed = j.value("seed", c.seed);
    c.freshness_window = j.value("freshness_window", c.freshness_window);
    c.record_timings = j.value("record_timings", false);
    if (j.contains("fleet")) {
      c.fleet = j.at("fleet").get<std::vector<std::string>>();
    } else {
      size_t size = j.value("fleet_size", size_t{0});
      for (size_t k = 1; k <= size; ++k) c.fleet.push_back("v" + std::to_string(k));
    }
    for (const auto& s : j.value("script", json::array())) {
      ScriptStep step;
      step.action = s.at("action").get<std::string>();
      if (s.contains("vehicles")) step.vehicles = s.at("vehicles").get<std::vector<std::string>>();
      if (s.contains("vehicle")) step.vehicles.push_back(s.at("vehicle").get<std::string>());
      step.expect = s.value("expect", true);
      step.seconds = s.value("seconds", uint64_t{0});
      step.message = s.value("message", step.message);
      step.sync = s.value("sync", true);
      step.previous_proof = s.value("proof", std::string("current")) == "previous";
      c.script.push_back(std::move(step));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, e.what());
  }
  if (c.fleet.size() > c.n) throw Error(ErrorCode::kMalformedInput, "fleet larger than domain");
  for (size_t k = 0; k < c.script.size(); ++k) {
    const auto& step = c.script[k];
    const auto& actions = known_actions();
    if (std::find(actions.begin(), actions.end(), step.action) == actions.end()) {
      throw script_error(k, "unknown action '" + step.action + "'");
    }
    for (const auto& label : step.vehicles) {
      if (std::find(c.fleet.begin(), c.fleet.end(), label) == c.fleet.end()) {
        throw script_error(k, "unknown vehicle '" + label + "'");
      }
    }
    if (step.vehicles.empty() && !takes_no_vehicles(step.action) &&
        !empty_means_all(step.action)) {
      throw script_error(k, step.action + " needs at least one vehicle");
    }
  }
  return c;
}

std::string ScenarioConfig::to_json() const {
  json j;
  j["n"] = n;
  j["seed"] = seed;
  j["freshness_window"] = freshness_window;
  j["record_timings"] = record_timings;
  j["fleet"] = fleet;
  j["script"] = json::array();
  for (const auto& s : script) {
    json step = {{"action", s.action}, {"vehicles", s.vehicles}, {"expect", s.expect}};
    if (s.action == "advance_time") step["seconds"] = s.seconds;
    if (!s.sync) step["sync"] = false;
    if (s.previous_proof) step["proof"] = "previous";
    if (s.message != "status") step["message"] = s.message;
    j["script"].push_back(std::move(step));
  }
  return j.dump(2);
}

// ---- run ----

ScenarioOutcome run_scenario(const ScenarioConfig& config) {
  const auto started = Clock::now();
  CounterScope counters;
  World world(config.n, config.seed, config.freshness_window);
  for (const auto& label : config.fleet) world.add_vehicle(label);
  ScenarioReport report;

  auto record = [&](size_t step, const ScriptStep& s, const std::string& vehicle, bool outcome,
                    std::string detail) {
    TranscriptLine line{step, s.action, vehicle, outcome, std::move(detail), s.expect};
    (outcome ? report.accepted : report.rejected)++;
    if (!line.matches()) report.mismatches++;
    report.transcript.push_back(std::move(line));
  };

  auto targets = [&](size_t k, const ScriptStep& s) {
    std::vector<SimVehicle*> out;
    for (const auto& label : s.vehicles) {
      SimVehicle* v = world.find(label);
      if (!v) throw script_error(k, "unknown vehicle '" + label + "'");
      out.push_back(v);
    }
    if (out.empty() && empty_means_all(s.action)) {
      for (auto& v : world.vehicles()) {
        if (v.issued && world.ledger().search(identity::ledger_key(v.e_id)) ==
                            ledger::Status::kCer) {
          out.push_back(&v);
        }
      }
    }
    return out;
  };

  auto make_tuple = [&](SimVehicle& v, const ScriptStep& s, bool blinded, size_t k) {
    if (s.previous_proof && !v.previous) throw script_error(k, v.label + " has no previous proof");
    if (s.sync && !s.previous_proof) world.sync(v);
    auto session = world.session(v);
    auto cred = world.credential(v, s.previous_proof);
    LastTuple t{blinded, {}, session.published};
    if (blinded) {
      t.wire = auth::gen_auth_untrusted(cred, session, world.ra().pk, as_bytes(s.message),
                                        world.now)
                   .serialize();
      report.blinded_tuple_bytes = t.wire.size();
    } else {
      t.wire =
          auth::gen_auth_trusted(cred, session, world.ra().pk, as_bytes(s.message), world.now)
              .serialize();
      report.plain_tuple_bytes = t.wire.size();
    }
    return t;
  };

  for (size_t k = 0; k < config.script.size(); ++k) {
    const ScriptStep& s = config.script[k];
    const auto vs = targets(k, s);

    if (s.action == "advance_time") {
      world.now += s.seconds;
      record(k, s, "", true, "now=" + std::to_string(world.now));
    } else if (s.action == "export_import") {
      Bytes image = world.ledger().export_state();
      try {
        auto imported = ledger::Ledger::import_state(world.pp_ptr(), image);
        bool same = imported.export_state() == image;
        world.ledger_ptr() = std::make_unique<ledger::Ledger>(std::move(imported));
        record(k, s, "", same, std::to_string(image.size()) + " bytes");
      } catch (const Error& e) {
        record(k, s, "", false, error_detail(e));
      }
    } else if (s.action == "batch") {
      std::vector<auth::BatchItem> items;
      for (SimVehicle* v : vs) {
        LastTuple t = make_tuple(*v, s, false, k);
        items.push_back({auth::AuthTuplePlain::deserialize(t.wire), t.published});
        v->last = std::move(t);
      }
      Drbg batch_rng = world.rng().fork("batch");
      CounterScope scope;
      try {
        auto res = auth::batch_verify_trusted(world.pp(), world.ledger().commitment(), items,
                                              world.verifier(), world.clock(), &batch_rng);
        std::ostringstream detail;
        detail << "size=" << items.size() << " pairings=" << scope.delta().pairings;
        if (!res.ok) {
          detail << " offenders=";
          for (size_t p = 0; p < res.offenders.size(); ++p) {
            detail << (p ? "," : "") << vs[res.offenders[p]]->label;
          }
        }
        record(k, s, "", res.ok, detail.str());
      } catch (const Error& e) {
        record(k, s, "", false, error_detail(e));
      }
    } else {
      for (SimVehicle* v : vs) {
        try {
          if (s.action == "issue") {
            world.issue(*v);
            record(k, s, v->label, true, "slot " + std::to_string(v->params.index));
          } else if (s.action == "update") {
            world.update(*v);
            record(k, s, v->label, true, "slot " + std::to_string(v->params.index));
          } else if (s.action == "revoke") {
            world.revoke(*v);
            record(k, s, v->label, true, "slot " + std::to_string(v->params.index));
          } else if (s.action == "sync") {
            world.sync(*v);
            record(k, s, v->label, true, "height " + std::to_string(v->synced));
          } else if (s.action == "auth_trusted" || s.action == "auth_untrusted") {
            LastTuple t = make_tuple(*v, s, s.action == "auth_untrusted", k);
            auto verdict = world.verify(t);
            v->last = std::move(t);
            record(k, s, v->label, static_cast<bool>(verdict),
                   std::string(auth::to_string(verdict.verdict)));
          } else if (s.action == "replay" || s.action == "tamper") {
            if (!v->last) throw script_error(k, v->label + " has not authenticated yet");
            LastTuple t = *v->last;
            if (s.action == "tamper") {
              size_t bit = world.rng().uniform(t.wire.size() * 8);
              t.wire[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
            }
            auto verdict = world.verify(t);
            record(k, s, v->label, static_cast<bool>(verdict),
                   std::string(auth::to_string(verdict.verdict)));
          } else if (s.action == "trace") {
            LastTuple t = make_tuple(*v, s, false, k);
            auto tuple = auth::AuthTuplePlain::deserialize(t.wire);
            auto got = auth::trace(tuple.e_a, t.published, world.ra().sk);
            auto rec = world.ledger().lookup(got.e_id_clip);
            bool found = rec && rec->cert && rec->cert->e_id == v->e_id &&
                         got.timestamp == tuple.timestamp;
            std::string detail = "not found";
            if (found) detail = "id " + identity::decrypt_id(rec->cert->e_id, world.ra().sk);
            record(k, s, v->label, found, detail);
          }
        } catch (const Error& e) {
          if (e.code() == ErrorCode::kScriptReferenceError) throw;
          record(k, s, v->label, false, error_detail(e));
        }
      }
    }
  }

  report.counters = counters.delta();
  report.final_commitment = to_hex(world.ledger().commitment().element.to_bytes());
  report.ledger_height = world.ledger().height();
  if (config.record_timings) report.wall_ms = micros_since(started) / 1000.0;
  return {std::move(world.ledger_ptr()), std::move(report)};
}

// ---- reports ----

namespace {

json counts_json(const OpCounts& c) {
  return {{"pairings", c.pairings}, {"g1_mults", c.g1_mults}, {"g2_mults", c.g2_mults},
          {"ec_mults", c.ec_mults}, {"msms", c.msms},         {"hashes", c.hashes},
          {"exponentiations", c.exponentiations()}};
}

std::string counts_text(const OpCounts& c) {
  std::ostringstream os;
  os << "pairings=" << c.pairings << " g1=" << c.g1_mults << " g2=" << c.g2_mults
     << " ec=" << c.ec_mults << " msm=" << c.msms << " hash=" << c.hashes;
  return os.str();
}

OpCounts divide(const OpCounts& c, uint64_t d) {
  return {c.pairings / d, c.g1_mults / d, c.g2_mults / d, c.ec_mults / d, c.msms / d, c.hashes / d};
}

}  // namespace

std::string ScenarioReport::to_text() const {
  std::ostringstream os;
  os << "step  action          vehicle   result  expect  detail\n";
  for (const auto& l : transcript) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-5zu %-15s %-9s %-7s %-7s %s%s\n", l.step, l.action.c_str(),
                  l.vehicle.c_str(), l.outcome ? "ok" : "reject", l.expected ? "ok" : "reject",
                  l.detail.c_str(), l.matches() ? "" : "  <-- MISMATCH");
    os << buf;
  }
  os << "\naccepted " << accepted << ", rejected " << rejected << ", mismatches " << mismatches
     << "\n";
  os << "counters: " << counts_text(counters) << "\n";
  os << "plain tuple " << plain_tuple_bytes << " bytes, blinded tuple " << blinded_tuple_bytes
     << " bytes\n";
  os << "ledger height " << ledger_height << ", commitment " << final_commitment << "\n";
  if (wall_ms) os << "wall time " << *wall_ms << " ms\n";
  return os.str();
}

std::string ScenarioReport::to_json() const {
  json j;
  j["transcript"] = json::array();
  for (const auto& l : transcript) {
    j["transcript"].push_back({{"step", l.step},
                               {"action", l.action},
                               {"vehicle", l.vehicle},
                               {"outcome", l.outcome},
                               {"expected", l.expected},
                               {"detail", l.detail}});
  }
  j["accepted"] = accepted;
  j["rejected"] = rejected;
  j["mismatches"] = mismatches;
  j["counters"] = counts_json(counters);
  j["plain_tuple_bytes"] = plain_tuple_bytes;
  j["blinded_tuple_bytes"] = blinded_tuple_bytes;
  j["ledger_height"] = ledger_height;
  j["final_commitment"] = final_commitment;
  if (wall_ms) j["wall_ms"] = *wall_ms;
  return j.dump(2);
}

std::string BenchReport::to_text() const {
  std::ostringstream os;
  char buf[200];
  os << "domain n=" << n << ", message " << message_bytes << " bytes\n";
  std::snprintf(buf, sizeof buf, "%-14s %10s  %s\n", "operation", "us/msg", "counters per message");
  os << buf;
  std::snprintf(buf, sizeof buf, "%-14s %10.1f  %s (exp=%llu)\n", "generate", generation_us,
                counts_text(generation).c_str(),
                static_cast<unsigned long long>(generation.exponentiations()));
  os << buf;
  std::snprintf(buf, sizeof buf, "%-14s %10.1f  %s\n", "verify", single_verify_us,
                counts_text(single_verify).c_str());
  os << buf;
  std::snprintf(buf, sizeof buf, "\n%-8s %9s %12s %10s %s\n", "batch", "pairings", "total_us",
                "us/msg", "result");
  os << buf;
  for (const auto& b : batches) {
    std::snprintf(buf, sizeof buf, "%-8zu %9llu %12.1f %10.1f %s\n", b.size,
                  static_cast<unsigned long long>(b.pairings), b.total_us, b.per_message_us,
                  b.accepted ? "accept" : "reject");
    os << buf;
  }
  os << "\nplain tuple " << plain_tuple_bytes << " bytes, blinded tuple " << blinded_tuple_bytes
     << " bytes; accepted " << accepted << ", rejected " << rejected << "\n";
  return os.str();
}

std::string BenchReport::to_json() const {
  json j;
  j["n"] = n;
  j["message_bytes"] = message_bytes;
  j["generation"] = {{"counters", counts_json(generation)}, {"us_per_message", generation_us}};
  j["single_verify"] = {{"counters", counts_json(single_verify)},
                        {"us_per_message", single_verify_us}};
  j["batches"] = json::array();
  for (const auto& b : batches) {
    j["batches"].push_back({{"size", b.size},
                            {"pairings", b.pairings},
                            {"accepted", b.accepted},
                            {"total_us", b.total_us},
                            {"us_per_message", b.per_message_us}});
  }
  j["plain_tuple_bytes"] = plain_tuple_bytes;
  j["blinded_tuple_bytes"] = blinded_tuple_bytes;
  j["accepted"] = accepted;
  j["rejected"] = rejected;
  return j.dump(2);
}

// ---- bench ----

BenchReport bench(const BenchOptions& options) {
  size_t fleet = options.samples;
  for (size_t b : options.batch_sizes) fleet = std::max(fleet, b);
  if (fleet > options.n) throw Error(ErrorCode::kMalformedInput, "batch larger than domain");

  World world(options.n, options.seed, 300);
  for (size_t k = 0; k < fleet; ++k) world.issue(world.add_vehicle("v" + std::to_string(k + 1)));
  for (auto& v : world.vehicles()) world.sync(v);
  // Window tables are a one-off verifier cost; build them outside the timings.
  world.pp().g1_table();
  world.pp().g2_table();

  BenchReport report;
  report.n = options.n;
  report.message_bytes = options.message_bytes;
  const Bytes message(options.message_bytes, 'm');

  struct Generated {
    auth::AuthTuplePlain tuple;
    identity::Point published;
  };
  auto generate = [&](SimVehicle& v) {
    auto session = world.session(v);
    return Generated{
        auth::gen_auth_trusted(world.credential(v, false), session, world.ra().pk, message,
                               world.now),
        session.published};
  };

  std::vector<Generated> singles;
  {
    CounterScope scope;
    auto start = Clock::now();
    for (size_t k = 0; k < options.samples; ++k) singles.push_back(generate(world.vehicles()[k]));
    report.generation_us = micros_since(start) / options.samples;
    report.generation = divide(scope.delta(), options.samples);
  }
  {
    CounterScope scope;
    auto start = Clock::now();
    for (const auto& g : singles) {
      bool ok = static_cast<bool>(auth::verify_auth_trusted(
          world.pp(), world.ledger().commitment(), g.tuple, world.verifier(), g.published,
          world.clock()));
      (ok ? report.accepted : report.rejected)++;
    }
    report.single_verify_us = micros_since(start) / options.samples;
    report.single_verify = divide(scope.delta(), options.samples);
  }

  for (size_t size : options.batch_sizes) {
    std::vector<auth::BatchItem> items;
    for (size_t k = 0; k < size; ++k) {
      auto g = generate(world.vehicles()[k]);
      items.push_back({std::move(g.tuple), g.published});
    }
    Drbg batch_rng = world.rng().fork("batch");
    CounterScope scope;
    auto start = Clock::now();
    auto res = auth::batch_verify_trusted(world.pp(), world.ledger().commitment(), items,
                                          world.verifier(), world.clock(), &batch_rng);
    BatchRow row;
    row.size = size;
    row.total_us = micros_since(start);
    row.per_message_us = row.total_us / static_cast<double>(size);
    row.pairings = scope.delta().pairings;
    row.accepted = res.ok;
    (res.ok ? report.accepted : report.rejected)++;
    report.batches.push_back(row);
  }

  report.plain_tuple_bytes = singles.front().tuple.serialize().size();
  auto& v = world.vehicles().front();
  auto session = world.session(v);
  report.blinded_tuple_bytes =
      auth::gen_auth_untrusted(world.credential(v, false), session, world.ra().pk, message,
                               world.now)
          .serialize()
          .size();
  return report;
}

}  // namespace pbag::cli
