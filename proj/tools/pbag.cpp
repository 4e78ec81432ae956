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

// pbag: workspace-based command line front end.
//
// A workspace directory holds the public parameters, the authority keys, the
// ledger image and one JSON file per vehicle and verifier. Authentication
// tuples travel as small JSON envelopes.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pbag/auth.hpp"
#include "pbag/error.hpp"
#include "pbag/identity.hpp"
#include "pbag/ledger.hpp"
#include "pbag/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pbag;

namespace {

Bytes read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMalformedInput, "cannot read " + p.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& p, ByteSpan data) {
  fs::create_directories(p.parent_path().empty() ? "." : p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::kMalformedInput, "cannot write " + p.string());
  }
  fs::rename(tmp, p);
}

json read_json(const fs::path& p) {
  Bytes raw = read_file(p);
  try {
    return json::parse(raw.begin(), raw.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, p.string() + ": " + e.what());
  }
}

void write_json(const fs::path& p, const json& j) {
  std::string text = j.dump(2) + "\n";
  write_file(p, as_bytes(text));
}

std::string hex(ByteSpan b) { return to_hex(b); }
template <size_t N>
std::string hex(const std::array<uint8_t, N>& a) {
  return to_hex(ByteSpan(a.data(), a.size()));
}

identity::Scalar scalar_hex(const json& j) { return identity::Scalar::from_bytes(from_hex(j.get<std::string>())); }
identity::Point point_hex(const json& j) { return identity::Point::from_bytes(from_hex(j.get<std::string>())); }

json key_json(const identity::KeyPair& k) { return {{"sk", hex(k.sk.bytes())}, {"pk", hex(k.pk.bytes())}}; }
identity::KeyPair key_from(const json& j) { return {scalar_hex(j.at("sk")), point_hex(j.at("pk"))}; }

class Workspace {
 public:
  explicit Workspace(fs::path root) : root_(std::move(root)) {}

  fs::path params_path() const { return root_ / "params.srs"; }
  fs::path ra_path() const { return root_ / "ra.json"; }
  fs::path ledger_path() const { return root_ / "ledger.bin"; }
  fs::path vehicle_path(const std::string& label) const { return root_ / "vehicles" / (label + ".json"); }
  fs::path verifier_path(const std::string& label) const { return root_ / "verifiers" / (label + ".json"); }

  std::shared_ptr<const kzg::PublicParameters> params() {
    if (!pp_) {
      pp_ = std::make_shared<kzg::PublicParameters>(
          kzg::PublicParameters::deserialize(read_file(params_path())));
    }
    return pp_;
  }

  identity::KeyPair authority() { return key_from(read_json(ra_path())); }

  ledger::Ledger load_ledger() { return ledger::Ledger::import_state(params(), read_file(ledger_path())); }
  void save_ledger(const ledger::Ledger& l) { write_file(ledger_path(), l.export_state()); }

  auth::Verifier verifier(const std::string& label, Drbg& rng) {
    fs::path p = verifier_path(label);
    if (!fs::exists(p)) {
      auto v = auth::Verifier::create(rng);
      write_json(p, {{"key", key_json(v.key)}, {"r", hex(v.r.bytes())}, {"published", hex(v.published.bytes())}});
      return v;
    }
    json j = read_json(p);
    return {key_from(j.at("key")), scalar_hex(j.at("r")), point_hex(j.at("published"))};
  }

 private:
  fs::path root_;
  std::shared_ptr<const kzg::PublicParameters> pp_;
};

struct VehicleFile {
  std::string id;
  identity::EncryptedId e_id;
  identity::KeyPair key;
  identity::Signature sigma_fsk{};
  identity::ParameterSet params;
  uint64_t synced = 0;
  uint64_t t_expired = 0;

  json to_json() const {
    return {{"id", id},
            {"e_id", hex(e_id.bytes)},
            {"key", key_json(key)},
            {"sigma_fsk", hex(sigma_fsk)},
            {"params", hex(params.serialize())},
            {"synced", synced},
            {"t_expired", t_expired}};
  }

  static VehicleFile from_json(const json& j) {
    VehicleFile v;
    v.id = j.at("id").get<std::string>();
    v.e_id.bytes = from_hex(j.at("e_id").get<std::string>());
    v.key = key_from(j.at("key"));
    Bytes sig = from_hex(j.at("sigma_fsk").get<std::string>());
    if (sig.size() != v.sigma_fsk.size()) throw Error(ErrorCode::kMalformedInput, "bad sigma_fsk");
    std::copy(sig.begin(), sig.end(), v.sigma_fsk.begin());
    v.params = identity::ParameterSet::deserialize(from_hex(j.at("params").get<std::string>()));
    v.synced = j.at("synced").get<uint64_t>();
    v.t_expired = j.at("t_expired").get<uint64_t>();
    return v;
  }
};

struct Envelope {
  bool blinded = false;
  Bytes tuple;
  identity::Point sender_published;

  json to_json() const {
    return {{"kind", blinded ? "blinded" : "plain"},
            {"tuple", hex(tuple)},
            {"sender_published", hex(sender_published.bytes())}};
  }
  static Envelope from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind != "plain" && kind != "blinded") throw Error(ErrorCode::kMalformedInput, "unknown tuple kind " + kind);
    return {kind == "blinded", from_hex(j.at("tuple").get<std::string>()), point_hex(j.at("sender_published"))};
  }
};

struct Globals {
  std::string workspace = "pbag-workspace";
  std::optional<uint64_t> seed;
  std::optional<uint64_t> now;
  uint64_t window = auth::kDefaultWindow;

  Drbg rng(std::string_view role) const {
    if (!seed) return Drbg::from_entropy();
    return Drbg(*seed).fork(role);
  }
  uint64_t clock() const {
    if (now) return *now;
    return static_cast<uint64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
            .count());
  }
};

VehicleFile load_vehicle(Workspace& ws, const std::string& label) {
  fs::path p = ws.vehicle_path(label);
  if (!fs::exists(p)) throw Error(ErrorCode::kScriptReferenceError, "unknown vehicle " + label);
  return VehicleFile::from_json(read_json(p));
}

void sync_vehicle(const ledger::Ledger& l, VehicleFile& v) { v.synced = l.sync_holder(v.params, v.synced); }

// ---- commands ----

void cmd_setup(const Globals& g, size_t n, bool force) {
  Workspace ws(g.workspace);
  if (fs::exists(ws.params_path()) && !force) {
    throw Error(ErrorCode::kMalformedInput, "workspace already initialised; pass --force to overwrite");
  }
  Drbg setup_rng = g.rng("setup");
  auto pp = std::make_shared<kzg::PublicParameters>(kzg::setup(n, setup_rng));
  write_file(ws.params_path(), pp->serialize());
  Drbg ra_rng = g.rng("authority");
  auto ra = identity::keygen(ra_rng);
  write_json(ws.ra_path(), key_json(ra));
  ledger::Ledger l(pp, ra.pk);
  ws.save_ledger(l);
  std::cout << "workspace " << g.workspace << ": n=" << n << ", authority " << hex(ra.pk.bytes()) << "\n";
}

void cmd_issue(const Globals& g, const std::string& label, const std::string& id, uint64_t lifetime) {
  Workspace ws(g.workspace);
  if (fs::exists(ws.vehicle_path(label))) throw Error(ErrorCode::kAlreadyRegistered, "vehicle " + label + " exists");
  auto ra = ws.authority();
  auto l = ws.load_ledger();
  Drbg rng = g.rng("vehicle:" + label);
  VehicleFile v;
  v.id = id;
  v.e_id = identity::encrypt_id(id, ra.sk);
  v.key = identity::keygen(rng);
  const uint64_t now = g.clock();
  v.t_expired = now + lifetime;
  auto req = ledger::make_issue_request(v.e_id, v.key.pk, v.t_expired, ra.sk);
  v.sigma_fsk = req.sigma_fsk;
  auto issued = l.issue_certificate(req, now);
  v.params = issued.params;
  v.synced = issued.height;
  ws.save_ledger(l);
  write_json(ws.vehicle_path(label), v.to_json());
  std::cout << label << ": issued at slot " << v.params.index << ", height " << issued.height << "\n";
}

void cmd_update(const Globals& g, const std::string& label) {
  Workspace ws(g.workspace);
  auto l = ws.load_ledger();
  auto v = load_vehicle(ws, label);
  sync_vehicle(l, v);
  Drbg rng = g.rng("update:" + label + ":" + std::to_string(l.height()));
  auto next = identity::keygen(rng);
  auto updated = l.update_certificate(ledger::make_update_request(v.e_id, v.key, next, v.t_expired), v.params);
  v.key = next;
  v.params = updated.params;
  v.synced = updated.height;
  ws.save_ledger(l);
  write_json(ws.vehicle_path(label), v.to_json());
  std::cout << label << ": updated, slot " << v.params.index << ", height " << updated.height << "\n";
}

void cmd_revoke(const Globals& g, const std::string& label) {
  Workspace ws(g.workspace);
  auto l = ws.load_ledger();
  auto v = load_vehicle(ws, label);
  l.revoke_certificate(ledger::make_revoke_request(v.e_id, v.key, v.t_expired, v.sigma_fsk));
  ws.save_ledger(l);
  std::cout << label << ": revoked, height " << l.height() << "\n";
}

void cmd_auth_gen(const Globals& g, const std::string& label, const std::string& verifier_label,
                  const std::string& message, bool blinded, const std::string& out) {
  Workspace ws(g.workspace);
  auto l = ws.load_ledger();
  auto v = load_vehicle(ws, label);
  sync_vehicle(l, v);
  write_json(ws.vehicle_path(label), v.to_json());
  Drbg verifier_rng = g.rng("verifier:" + verifier_label);
  auto verifier = ws.verifier(verifier_label, verifier_rng);
  Drbg rng = g.rng("session:" + label);
  auto session = auth::SessionContext::start(rng, v.key.pk, verifier.published);
  auth::Credential cred{v.e_id, v.key, v.params};
  auto ra_pk = ws.authority().pk;
  Envelope env{blinded, {}, session.published};
  if (blinded) {
    env.tuple = auth::gen_auth_untrusted(cred, session, ra_pk, as_bytes(message), g.clock()).serialize();
  } else {
    env.tuple = auth::gen_auth_trusted(cred, session, ra_pk, as_bytes(message), g.clock()).serialize();
  }
  if (out.empty() || out == "-") {
    std::cout << env.to_json().dump(2) << "\n";
  } else {
    write_json(out, env.to_json());
    std::cout << out << ": " << (blinded ? "blinded" : "plain") << " tuple, " << env.tuple.size() << " bytes\n";
  }
}

int cmd_auth_verify(const Globals& g, const std::string& verifier_label, const std::vector<std::string>& files) {
  Workspace ws(g.workspace);
  auto l = ws.load_ledger();
  Drbg verifier_rng = g.rng("verifier:" + verifier_label);
  auto verifier = ws.verifier(verifier_label, verifier_rng);
  auth::VerifyClock clock{g.clock(), g.window};
  int failures = 0;
  for (const auto& f : files) {
    auto env = Envelope::from_json(read_json(f));
    auth::VerifyResult r;
    try {
      if (env.blinded) {
        r = auth::verify_auth_untrusted(*ws.params(), l.commitment(), auth::AuthTupleBlinded::deserialize(env.tuple),
                                        verifier, env.sender_published, clock);
      } else {
        r = auth::verify_auth_trusted(*ws.params(), l.commitment(), auth::AuthTuplePlain::deserialize(env.tuple),
                                      verifier, env.sender_published, clock);
      }
      std::cout << f << ": " << auth::to_string(r.verdict) << "\n";
    } catch (const Error& e) {
      std::cout << f << ": " << to_string(e.code()) << "\n";
      r.verdict = auth::Verdict::kDegenerate;
    }
    if (!r) ++failures;
  }
  return failures ? 1 : 0;
}

int cmd_batch_verify(const Globals& g, const std::string& verifier_label, const std::vector<std::string>& files) {
  Workspace ws(g.workspace);
  auto l = ws.load_ledger();
  Drbg verifier_rng = g.rng("verifier:" + verifier_label);
  auto verifier = ws.verifier(verifier_label, verifier_rng);
  std::vector<auth::BatchItem> items;
  for (const auto& f : files) {
    auto env = Envelope::from_json(read_json(f));
    if (env.blinded) throw Error(ErrorCode::kMalformedInput, f + ": batches take plain tuples only");
    items.push_back({auth::AuthTuplePlain::deserialize(env.tuple), env.sender_published});
  }
  Drbg rng = g.rng("batch");
  CounterScope scope;
  auto res = auth::batch_verify_trusted(*ws.params(), l.commitment(), items, verifier, {g.clock(), g.window}, &rng);
  std::cout << (res.ok ? "accept" : "reject") << ": " << items.size() << " tuples, " << scope.delta().pairings
            << " pairings\n";
  for (size_t i : res.offenders) std::cout << "  offender " << files[i] << "\n";
  return res.ok ? 0 : 1;
}

int cmd_trace(const Globals& g, const std::string& file) {
  Workspace ws(g.workspace);
  auto l = ws.load_ledger();
  auto ra = ws.authority();
  auto env = Envelope::from_json(read_json(file));
  Bytes e_a = env.blinded ? auth::AuthTupleBlinded::deserialize(env.tuple).e_a
                          : auth::AuthTuplePlain::deserialize(env.tuple).e_a;
  auto res = auth::trace(e_a, env.sender_published, ra.sk);
  auto rec = l.lookup(res.e_id_clip);
  if (!rec || !rec->cert) {
    std::cout << "no ledger record matches\n";
    return 1;
  }
  std::cout << "id " << identity::decrypt_id(rec->cert->e_id, ra.sk) << ", status " << ledger::to_string(rec->status)
            << ", sent at " << res.timestamp << "\n";
  return 0;
}

int cmd_scenario(const std::string& file, bool as_json, bool timings) {
  Bytes raw = read_file(file);
  auto config = cli::ScenarioConfig::from_json(std::string(raw.begin(), raw.end()));
  if (timings) config.record_timings = true;
  auto outcome = cli::run_scenario(config);
  std::cout << (as_json ? outcome.report.to_json() + "\n" : outcome.report.to_text());
  return outcome.report.ok() ? 0 : 1;
}

void cmd_bench(const cli::BenchOptions& options, bool as_json) {
  auto report = cli::bench(options);
  std::cout << (as_json ? report.to_json() + "\n" : report.to_text());
}

void cmd_export(const Globals& g, const std::string& out) {
  Workspace ws(g.workspace);
  auto l = ws.load_ledger();
  Bytes image = l.export_state();
  write_file(out, image);
  std::cout << out << ": " << image.size() << " bytes, height " << l.height() << "\n";
}

void cmd_import(const Globals& g, const std::string& in) {
  Workspace ws(g.workspace);
  auto l = ledger::Ledger::import_state(ws.params(), read_file(in));
  ws.save_ledger(l);
  std::cout << "imported height " << l.height() << ", commitment " << hex(l.commitment().element.to_bytes()) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairing-based anonymous vehicle authentication"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("-w,--workspace", g.workspace, "Workspace directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Deterministic randomness seed");
  app.add_option("--now", g.now, "Override the clock (unix seconds)");
  app.add_option("--window", g.window, "Freshness window in seconds")->capture_default_str();

  size_t setup_n = 64;
  bool force = false;
  auto* setup = app.add_subcommand("setup", "Generate parameters, authority keys and an empty ledger");
  setup->add_option("-n,--size", setup_n, "Domain size (power of two)")->capture_default_str();
  setup->add_flag("--force", force, "Overwrite an existing workspace");

  std::string label, id, verifier = "rsu", message = "status", out;
  uint64_t lifetime = 365ull * 24 * 3600;
  bool blinded = false;
  std::vector<std::string> files;

  auto* issue = app.add_subcommand("issue", "Register a vehicle and certify it");
  issue->add_option("vehicle", label, "Vehicle label")->required();
  issue->add_option("--id", id, "Plate and VIN composite (18 characters)")->required();
  issue->add_option("--lifetime", lifetime, "Certificate lifetime in seconds")->capture_default_str();

  auto* update = app.add_subcommand("update", "Rotate a vehicle's online key");
  update->add_option("vehicle", label)->required();

  auto* revoke = app.add_subcommand("revoke", "Revoke a vehicle's certificate");
  revoke->add_option("vehicle", label)->required();

  auto* auth_gen = app.add_subcommand("auth-gen", "Produce an authentication tuple");
  auth_gen->add_option("vehicle", label)->required();
  auth_gen->add_option("--verifier", verifier, "Receiving verifier label")->capture_default_str();
  auth_gen->add_option("-m,--message", message)->capture_default_str();
  auth_gen->add_flag("--blinded", blinded, "Blind the proof for an untrusted verifier");
  auth_gen->add_option("-o,--out", out, "Envelope file (stdout when omitted)");

  auto* auth_verify = app.add_subcommand("auth-verify", "Verify tuple envelopes one by one");
  auth_verify->add_option("--verifier", verifier)->capture_default_str();
  auth_verify->add_option("files", files)->required();

  auto* batch = app.add_subcommand("batch-verify", "Verify plain tuple envelopes as one batch");
  batch->add_option("--verifier", verifier)->capture_default_str();
  batch->add_option("files", files)->required();

  auto* trace = app.add_subcommand("trace", "Recover the sender of a tuple (authority only)");
  trace->add_option("file", out)->required();

  std::string scenario_file;
  bool as_json = false, timings = false;
  auto* scenario = app.add_subcommand("scenario", "Scripted scenarios");
  scenario->require_subcommand(1);
  auto* scenario_run = scenario->add_subcommand("run", "Run a scenario file");
  scenario_run->add_option("file", scenario_file)->required()->check(CLI::ExistingFile);
  scenario_run->add_flag("--json", as_json, "Machine-readable report");
  scenario_run->add_flag("--timings", timings, "Include wall time");

  cli::BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "Operation counts and timings");
  bench->add_option("-n,--size", bench_opts.n, "Domain size")->capture_default_str();
  bench->add_option("--batch-sizes", bench_opts.batch_sizes, "Comma-separated batch sizes")->delimiter(',');
  bench->add_option("--samples", bench_opts.samples, "Single-message samples")->capture_default_str();
  bench->add_option("--message-bytes", bench_opts.message_bytes, "Payload length")->capture_default_str();
  bench->add_option("--bench-seed", bench_opts.seed)->capture_default_str();
  bench->add_flag("--json", as_json, "Machine-readable report");

  auto* state = app.add_subcommand("state", "Ledger state files");
  state->require_subcommand(1);
  auto* state_export = state->add_subcommand("export", "Write the ledger image");
  state_export->add_option("file", out)->required();
  auto* state_import = state->add_subcommand("import", "Replay-verify and adopt a ledger image");
  state_import->add_option("file", out)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (setup->parsed()) cmd_setup(g, setup_n, force);
    else if (issue->parsed()) cmd_issue(g, label, id, lifetime);
    else if (update->parsed()) cmd_update(g, label);
    else if (revoke->parsed()) cmd_revoke(g, label);
    else if (auth_gen->parsed()) cmd_auth_gen(g, label, verifier, message, blinded, out);
    else if (auth_verify->parsed()) return cmd_auth_verify(g, verifier, files);
    else if (batch->parsed()) return cmd_batch_verify(g, verifier, files);
    else if (trace->parsed()) return cmd_trace(g, out);
    else if (scenario_run->parsed()) return cmd_scenario(scenario_file, as_json, timings);
    else if (bench->parsed()) cmd_bench(bench_opts, as_json);
    else if (state_export->parsed()) cmd_export(g, out);
    else if (state_import->parsed()) cmd_import(g, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
