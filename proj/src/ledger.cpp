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

#include "pbag/ledger.hpp"

#include "pbag/error.hpp"

namespace pbag::ledger {

using identity::check_sig;
using identity::derive_u;
using identity::ledger_key;
using identity::OpTag;

namespace {

constexpr std::array<uint8_t, 4> kMagic = {'P', 'B', 'L', 'G'};

EncryptedId read_eid(ByteReader& r) {
  EncryptedId e{r.var(EncryptedId::kBytes)};
  if (e.bytes.size() != EncryptedId::kBytes) {
    throw Error(ErrorCode::kMalformedInput, "encrypted id length");
  }
  return e;
}

Point read_point(ByteReader& r) { return Point::from_bytes(r.var(Point::kBytes)); }

Signature read_sig(ByteReader& r) {
  Bytes b = r.var(64);
  if (b.size() != 64) throw Error(ErrorCode::kMalformedInput, "signature length");
  Signature s{};
  std::copy(b.begin(), b.end(), s.begin());
  return s;
}

Bytes update_ver_message(const EncryptedId& e_id, const Point& npk_next) {
  return concat({e_id.bytes, npk_next.bytes()});
}

Bytes revoke_message(const EncryptedId& e_id, uint64_t t_expired) {
  ByteWriter w;
  w.raw(e_id.bytes);
  w.u64(t_expired);
  return std::move(w).take();
}

}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::kNull: return "null";
    case Status::kPend: return "pend";
    case Status::kCer: return "Cer";
    case Status::kRevoke: return "revoke";
  }
  return "unknown";
}

// ---- records and requests ----

Bytes StatusRecord::serialize() const {
  ByteWriter w;
  w.u8(static_cast<uint8_t>(status));
  if (status == Status::kCer) {
    w.u32(static_cast<uint32_t>(index));
    w.var(cert.value().serialize());
  } else if (status == Status::kRevoke) {
    w.u32(static_cast<uint32_t>(index));
  }
  return std::move(w).take();
}

StatusRecord StatusRecord::deserialize(ByteSpan data) {
  ByteReader r(data);
  StatusRecord rec;
  uint8_t s = r.u8();
  if (s == 0 || s > static_cast<uint8_t>(Status::kRevoke)) {
    throw Error(ErrorCode::kMalformedInput, "status tag");
  }
  rec.status = static_cast<Status>(s);
  if (rec.status == Status::kCer) {
    rec.index = r.u32();
    rec.cert = Certificate::deserialize(r.var());
  } else if (rec.status == Status::kRevoke) {
    rec.index = r.u32();
  }
  r.expect_done();
  return rec;
}

Bytes IssueRequest::serialize() const {
  ByteWriter w;
  w.var(e_id.bytes);
  w.var(npk.bytes());
  w.u64(t_expired);
  w.var(sigma_fsk);
  return std::move(w).take();
}

IssueRequest IssueRequest::deserialize(ByteSpan data) {
  ByteReader r(data);
  IssueRequest q;
  q.e_id = read_eid(r);
  q.npk = read_point(r);
  q.t_expired = r.u64();
  q.sigma_fsk = read_sig(r);
  r.expect_done();
  return q;
}

Bytes UpdateRequest::serialize() const {
  ByteWriter w;
  w.var(e_id.bytes);
  w.var(npk_current.bytes());
  w.var(npk_next.bytes());
  w.u64(t_expired);
  w.var(sigma_ver);
  w.var(sigma_nsk);
  return std::move(w).take();
}

UpdateRequest UpdateRequest::deserialize(ByteSpan data) {
  ByteReader r(data);
  UpdateRequest q;
  q.e_id = read_eid(r);
  q.npk_current = read_point(r);
  q.npk_next = read_point(r);
  q.t_expired = r.u64();
  q.sigma_ver = read_sig(r);
  q.sigma_nsk = read_sig(r);
  r.expect_done();
  return q;
}

Bytes RevokeRequest::serialize() const {
  ByteWriter w;
  w.var(e_id.bytes);
  w.var(npk_current.bytes());
  w.u64(t_expired);
  w.var(sigma_revoke);
  w.var(sigma_fsk);
  return std::move(w).take();
}

RevokeRequest RevokeRequest::deserialize(ByteSpan data) {
  ByteReader r(data);
  RevokeRequest q;
  q.e_id = read_eid(r);
  q.npk_current = read_point(r);
  q.t_expired = r.u64();
  q.sigma_revoke = read_sig(r);
  q.sigma_fsk = read_sig(r);
  r.expect_done();
  return q;
}

IssueRequest make_issue_request(const EncryptedId& e_id, const Point& npk, uint64_t t_expired,
                                const identity::Scalar& fsk) {
  return {e_id, npk, t_expired, identity::sign(e_id.bytes, fsk)};
}

UpdateRequest make_update_request(const EncryptedId& e_id, const identity::KeyPair& current,
                                  const identity::KeyPair& next, uint64_t t_expired) {
  UpdateRequest q;
  q.e_id = e_id;
  q.npk_current = current.pk;
  q.npk_next = next.pk;
  q.t_expired = t_expired;
  q.sigma_ver = identity::sign(update_ver_message(e_id, next.pk), current.sk);
  q.sigma_nsk = identity::sign(e_id.bytes, next.sk);
  return q;
}

RevokeRequest make_revoke_request(const EncryptedId& e_id, const identity::KeyPair& current,
                                  uint64_t t_expired, const Signature& sigma_fsk) {
  RevokeRequest q;
  q.e_id = e_id;
  q.npk_current = current.pk;
  q.t_expired = t_expired;
  q.sigma_revoke = identity::sign(revoke_message(e_id, t_expired), current.sk);
  q.sigma_fsk = sigma_fsk;
  return q;
}

// ---- log ----

Bytes LogEntry::serialize() const {
  ByteWriter w;
  w.u64(height);
  w.u8(static_cast<uint8_t>(op));
  w.var(payload);
  w.raw(payload_hash);
  w.u8(update_ref ? 1 : 0);
  if (update_ref) {
    w.u32(static_cast<uint32_t>(update_ref->index));
    w.raw(update_ref->delta.to_bytes());
  }
  w.raw(prev_hash);
  return std::move(w).take();
}

LogEntry LogEntry::deserialize(ByteSpan data) {
  ByteReader r(data);
  LogEntry e;
  e.height = r.u64();
  uint8_t op = r.u8();
  if (op > static_cast<uint8_t>(LogOp::kMapping)) throw Error(ErrorCode::kMalformedInput, "log op");
  e.op = static_cast<LogOp>(op);
  e.payload = r.var();
  e.payload_hash = r.fixed<32>();
  uint8_t has_ref = r.u8();
  if (has_ref > 1) throw Error(ErrorCode::kMalformedInput, "update ref flag");
  if (has_ref) {
    UpdateRef ref;
    ref.index = r.u32();
    ref.delta = FieldScalar::from_bytes(r.raw(32));
    e.update_ref = ref;
  }
  e.prev_hash = r.fixed<32>();
  r.expect_done();
  return e;
}

// ---- ledger ----

Ledger::Ledger(std::shared_ptr<const kzg::PublicParameters> pp, const Point& fpk)
    : pp_(std::move(pp)), fpk_(fpk), evals_(pp_->n) {}

Status Ledger::search(const FieldScalar& key) const {
  auto it = state_.find(key.to_bytes());
  return it == state_.end() ? Status::kNull : it->second.status;
}

std::optional<StatusRecord> Ledger::lookup(const FieldScalar& key) const {
  auto it = state_.find(key.to_bytes());
  if (it == state_.end()) return std::nullopt;
  return it->second;
}

void Ledger::check_transition(Status from, Status to) const {
  bool ok = false;
  switch (from) {
    case Status::kNull: ok = to == Status::kPend || to == Status::kCer; break;
    case Status::kPend: ok = to == Status::kPend || to == Status::kCer; break;
    case Status::kCer: ok = to == Status::kCer || to == Status::kRevoke; break;
    case Status::kRevoke: ok = false; break;
  }
  if (!ok) {
    throw Error(ErrorCode::kIllegalTransition,
                std::string(to_string(from)) + " -> " + std::string(to_string(to)));
  }
}

void Ledger::set_status(const FieldScalar& key, StatusRecord rec) {
  check_transition(search(key), rec.status);
  state_[key.to_bytes()] = std::move(rec);
}

void Ledger::append(LogOp op, Bytes payload, std::optional<UpdateRef> ref) {
  LogEntry e;
  e.height = log_.size();
  e.op = op;
  e.payload_hash = sha256(payload);
  e.payload = std::move(payload);
  e.update_ref = ref;
  if (!log_.empty()) e.prev_hash = log_.back().hash();
  log_.push_back(std::move(e));
}

FieldScalar Ledger::move_slot(size_t index, const FieldScalar& value) {
  FieldScalar delta = value - evals_[index];
  evals_[index] = value;
  commitment_ = kzg::update_commitment(*pp_, commitment_, index, delta);
  return delta;
}

void Ledger::mapping(const FieldScalar& key, const StatusRecord& value) {
  apply_mapping(key, value);
}

void Ledger::apply_mapping(const FieldScalar& key, const StatusRecord& value) {
  if (value.status == Status::kNull) throw Error(ErrorCode::kIllegalTransition, "-> null");
  if (value.status == Status::kCer && !value.cert) {
    throw Error(ErrorCode::kMalformedInput, "Cer record without certificate");
  }
  set_status(key, value);
  append(LogOp::kMapping, concat({key.to_bytes(), value.serialize()}), std::nullopt);
}

size_t Ledger::apply_issue(const IssueRequest& req) {
  const FieldScalar key = ledger_key(req.e_id);
  const Status st = search(key);
  if (st == Status::kCer || st == Status::kRevoke) {
    throw Error(ErrorCode::kAlreadyRegistered, std::string(to_string(st)));
  }
  if (!check_sig(fpk_, req.sigma_fsk, req.e_id.bytes)) {
    set_status(key, StatusRecord{Status::kPend, std::nullopt, 0});
    append(LogOp::kIssue, req.serialize(), std::nullopt);
    throw Error(ErrorCode::kInvalidRaSignature);
  }
  if (next_index_ >= pp_->n) throw Error(ErrorCode::kCapacityExhausted);
  const FieldScalar u = derive_u(req.e_id, req.npk);
  if (u.is_zero()) throw Error(ErrorCode::kMalformedInput, "derived value equals the sentinel");

  const size_t i = next_index_++;
  const FieldScalar delta = move_slot(i, u);
  Certificate cert{req.e_id, OpTag::kIssue, req.npk, req.t_expired, req.sigma_fsk};
  set_status(key, StatusRecord{Status::kCer, std::move(cert), i});
  append(LogOp::kIssue, req.serialize(), UpdateRef{i, delta});
  return i;
}

const StatusRecord& Ledger::authorize_update(const UpdateRequest& req) const {
  auto it = state_.find(ledger_key(req.e_id).to_bytes());
  if (it == state_.end()) throw Error(ErrorCode::kNotRegistered);
  const StatusRecord& rec = it->second;
  if (rec.status == Status::kPend) throw Error(ErrorCode::kPendNeedsRaValidation);
  if (rec.status != Status::kCer) throw Error(ErrorCode::kNotRegistered, "revoked");
  if (!(req.npk_current == rec.cert->npk) ||
      !check_sig(req.npk_current, req.sigma_ver, update_ver_message(req.e_id, req.npk_next)) ||
      !check_sig(req.npk_next, req.sigma_nsk, req.e_id.bytes)) {
    throw Error(ErrorCode::kOwnershipCheckFailed);
  }
  return rec;
}

size_t Ledger::commit_update(const UpdateRequest& req, const StatusRecord& rec) {
  const FieldScalar u = derive_u(req.e_id, req.npk_next);
  if (u.is_zero()) throw Error(ErrorCode::kMalformedInput, "derived value equals the sentinel");
  const size_t i = rec.index;
  const FieldScalar delta = move_slot(i, u);
  Certificate cert{req.e_id, OpTag::kUpdate, req.npk_next, req.t_expired, req.sigma_nsk};
  set_status(ledger_key(req.e_id), StatusRecord{Status::kCer, std::move(cert), i});
  append(LogOp::kUpdate, req.serialize(), UpdateRef{i, delta});
  return i;
}

size_t Ledger::apply_update(const UpdateRequest& req) {
  return commit_update(req, authorize_update(req));
}

void Ledger::apply_revoke(const RevokeRequest& req) {
  const FieldScalar key = ledger_key(req.e_id);
  auto it = state_.find(key.to_bytes());
  if (it == state_.end() || it->second.status != Status::kCer) {
    throw Error(ErrorCode::kNotRegistered);
  }
  const StatusRecord& rec = it->second;
  if (!check_sig(fpk_, req.sigma_fsk, req.e_id.bytes) || !(req.npk_current == rec.cert->npk) ||
      req.t_expired != rec.cert->t_expired ||
      !check_sig(req.npk_current, req.sigma_revoke, revoke_message(req.e_id, req.t_expired))) {
    throw Error(ErrorCode::kOwnershipCheckFailed);
  }
  const size_t i = rec.index;
  const FieldScalar delta = move_slot(i, FieldScalar::zero());
  set_status(key, StatusRecord{Status::kRevoke, std::nullopt, i});
  append(LogOp::kRevoke, req.serialize(), UpdateRef{i, delta});
}

ParameterSet Ledger::make_parameter_set(size_t index) const {
  ParameterSet p;
  p.index = index;
  p.omega_i = pp_->domain.element(index);
  p.u_i = evals_[index];
  p.g_omega = curve::G2Point::from_scalar(p.omega_i);
  p.g_u = curve::G1Point::from_scalar(p.u_i);
  p.proof = kzg::prove_single(*pp_, pp_->domain.ifft(evals_), index).proof;
  p.update_key = pp_->update_key(index);
  return p;
}

Issued Ledger::issue_certificate(const IssueRequest& req, uint64_t now) {
  if (req.t_expired <= now) throw Error(ErrorCode::kMalformedInput, "certificate already expired");
  const size_t i = apply_issue(req);
  return {*state_.at(ledger_key(req.e_id).to_bytes()).cert, make_parameter_set(i), height()};
}

Issued Ledger::update_certificate(const UpdateRequest& req, const ParameterSet& current) {
  const StatusRecord& rec = authorize_update(req);
  if (current.index != rec.index || !(current.u_i == evals_[rec.index]) ||
      !kzg::verify_single(*pp_, commitment_, current.omega_i, current.u_i, current.proof)) {
    throw Error(ErrorCode::kInvalidHolderProof);
  }
  const size_t i = commit_update(req, rec);
  const FieldScalar delta = log_.back().update_ref->delta;
  ParameterSet next = current;
  next.u_i = evals_[i];
  next.g_u = curve::G1Point::from_scalar(next.u_i);
  next.proof = kzg::update_proof_local(current.proof, current.update_key, delta);
  return {*state_.at(ledger_key(req.e_id).to_bytes()).cert, std::move(next), height()};
}

void Ledger::revoke_certificate(const RevokeRequest& req) { apply_revoke(req); }

uint64_t Ledger::sync_holder(ParameterSet& params, uint64_t from_height) const {
  for (uint64_t h = from_height; h < log_.size(); ++h) {
    const auto& ref = log_[h].update_ref;
    if (!ref) continue;
    if (ref->index == params.index) {
      params.proof = kzg::update_proof_local(params.proof, params.update_key, ref->delta);
      params.u_i += ref->delta;
      params.g_u = curve::G1Point::from_scalar(params.u_i);
    } else {
      params.proof = kzg::update_proof_other(params.proof, params.update_key,
                                             pp_->update_key(ref->index), ref->delta, pp_->n);
    }
  }
  return log_.size();
}

bool Ledger::verify_chain() const {
  Digest prev{};
  for (size_t k = 0; k < log_.size(); ++k) {
    const LogEntry& e = log_[k];
    if (e.height != k || e.prev_hash != prev || e.payload_hash != sha256(e.payload)) return false;
    prev = e.hash();
  }
  return true;
}

Ledger Ledger::replay(std::shared_ptr<const kzg::PublicParameters> pp, const Point& fpk,
                      std::span<const LogEntry> log) {
  Ledger l(std::move(pp), fpk);
  for (const LogEntry& e : log) {
    try {
      switch (e.op) {
        case LogOp::kIssue:
          try {
            l.apply_issue(IssueRequest::deserialize(e.payload));
          } catch (const Error& err) {
            if (err.code() != ErrorCode::kInvalidRaSignature) throw;
          }
          break;
        case LogOp::kUpdate: l.apply_update(UpdateRequest::deserialize(e.payload)); break;
        case LogOp::kRevoke: l.apply_revoke(RevokeRequest::deserialize(e.payload)); break;
        case LogOp::kMapping: {
          if (e.payload.size() < 32) throw Error(ErrorCode::kMalformedInput, "mapping payload");
          ByteSpan p(e.payload);
          l.apply_mapping(FieldScalar::from_bytes(p.first(32)),
                          StatusRecord::deserialize(p.subspan(32)));
          break;
        }
      }
    } catch (const Error& err) {
      throw Error(ErrorCode::kCorruptState,
                  "replay failed at height " + std::to_string(e.height) + ": " + err.what());
    }
    if (l.log_.size() != e.height + 1 || !(l.log_.back() == e)) {
      throw Error(ErrorCode::kCorruptState,
                  "log entry " + std::to_string(e.height) + " does not reproduce");
    }
  }
  return l;
}

Bytes Ledger::export_state() const {
  ByteWriter w;
  w.raw(kMagic);
  w.u16(kFormatVersion);
  w.u32(static_cast<uint32_t>(pp_->n));
  w.u32(static_cast<uint32_t>(next_index_));
  w.raw(commitment_.element.to_bytes());
  w.raw(fpk_.bytes());
  w.u32(static_cast<uint32_t>(state_.size()));
  for (const auto& [key, rec] : state_) {
    w.raw(key);
    w.var(rec.serialize());
  }
  w.u32(static_cast<uint32_t>(log_.size()));
  for (const auto& e : log_) w.var(e.serialize());
  return std::move(w).take();
}

Ledger Ledger::import_state(std::shared_ptr<const kzg::PublicParameters> pp, ByteSpan data) {
  try {
    return parse_and_replay(std::move(pp), data);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kVersionMismatch || e.code() == ErrorCode::kCorruptState) throw;
    throw Error(ErrorCode::kCorruptState, e.what());
  }
}

Ledger Ledger::parse_and_replay(std::shared_ptr<const kzg::PublicParameters> pp, ByteSpan data) {
  ByteReader r(data);
  if (r.fixed<4>() != kMagic) throw Error(ErrorCode::kCorruptState, "not a ledger file");
  const uint16_t version = r.u16();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch, "ledger format " + std::to_string(version));
  }
  if (r.u32() != pp->n) throw Error(ErrorCode::kCorruptState, "domain size differs");
  const size_t next_index = r.u32();
  const auto c = curve::G1Point::from_bytes(r.raw(curve::G1Point::kCompressedBytes));
  const Point fpk = Point::from_bytes(r.raw(Point::kBytes));

  std::map<std::array<uint8_t, 32>, StatusRecord> state;
  const uint32_t n_state = r.u32();
  for (uint32_t k = 0; k < n_state; ++k) {
    auto key = r.fixed<32>();
    state.emplace(key, StatusRecord::deserialize(r.var()));
  }
  std::vector<LogEntry> log;
  const uint32_t n_log = r.u32();
  for (uint32_t k = 0; k < n_log; ++k) log.push_back(LogEntry::deserialize(r.var()));
  r.expect_done();

  Ledger l = replay(std::move(pp), fpk, log);
  if (l.next_index_ != next_index || !(l.commitment_.element == c) || l.state_ != state) {
    throw Error(ErrorCode::kCorruptState, "state does not match its log");
  }
  return l;
}

}  // namespace pbag::ledger
