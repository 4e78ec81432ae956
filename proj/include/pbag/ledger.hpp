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
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "pbag/bytes.hpp"
#include "pbag/identity.hpp"
#include "pbag/kzg.hpp"

/// In-memory certificate ledger: status map keyed by the clipped encrypted id,
/// the global commitment over all slots, and a hash-chained operation log.
namespace pbag::ledger {

using algebra::FieldScalar;
using identity::Certificate;
using identity::EncryptedId;
using identity::ParameterSet;
using identity::Point;
using identity::Signature;

enum class Status : uint8_t { kNull = 0, kPend = 1, kCer = 2, kRevoke = 3 };

std::string_view to_string(Status s);

struct StatusRecord {
  Status status = Status::kNull;
  std::optional<Certificate> cert;  // kCer only
  size_t index = 0;                 // kCer and kRevoke

  Bytes serialize() const;
  static StatusRecord deserialize(ByteSpan data);
  bool operator==(const StatusRecord&) const = default;
};

/// (E_id, issue, npk_t, T_expired, sigma_fsk).
struct IssueRequest {
  EncryptedId e_id;
  Point npk;
  uint64_t t_expired = 0;
  Signature sigma_fsk{};

  Bytes serialize() const;
  static IssueRequest deserialize(ByteSpan data);
};

/// (E_id, update, npk_t, npk_t+1, T_expired, sigma_ver, sigma_nsk).
struct UpdateRequest {
  EncryptedId e_id;
  Point npk_current;
  Point npk_next;
  uint64_t t_expired = 0;
  Signature sigma_ver{};  // by nsk_t over E_id || npk_t+1
  Signature sigma_nsk{};  // by nsk_t+1 over E_id

  Bytes serialize() const;
  static UpdateRequest deserialize(ByteSpan data);
};

/// (E_id, npk_t, revoke, sigma_revoke, T_expired) plus the issuance signature
/// sigma_fsk, which the stored certificate no longer carries after an update.
struct RevokeRequest {
  EncryptedId e_id;
  Point npk_current;
  uint64_t t_expired = 0;
  Signature sigma_revoke{};  // by nsk_t over E_id || T_expired
  Signature sigma_fsk{};

  Bytes serialize() const;
  static RevokeRequest deserialize(ByteSpan data);
};

IssueRequest make_issue_request(const EncryptedId& e_id, const Point& npk, uint64_t t_expired,
                                const identity::Scalar& fsk);
UpdateRequest make_update_request(const EncryptedId& e_id, const identity::KeyPair& current,
                                  const identity::KeyPair& next, uint64_t t_expired);
RevokeRequest make_revoke_request(const EncryptedId& e_id, const identity::KeyPair& current,
                                  uint64_t t_expired, const Signature& sigma_fsk);

enum class LogOp : uint8_t { kIssue = 0, kUpdate = 1, kRevoke = 2, kMapping = 3 };

/// Slot edit published for proof holders: slot `index` moved by `delta`.
struct UpdateRef {
  size_t index = 0;
  FieldScalar delta;
  bool operator==(const UpdateRef&) const = default;
};

struct LogEntry {
  uint64_t height = 0;
  LogOp op = LogOp::kIssue;
  Bytes payload;
  Digest payload_hash{};
  std::optional<UpdateRef> update_ref;
  Digest prev_hash{};

  Bytes serialize() const;
  static LogEntry deserialize(ByteSpan data);
  Digest hash() const { return sha256(serialize()); }
  bool operator==(const LogEntry&) const = default;
};

struct Issued {
  Certificate cert;
  ParameterSet params;
  uint64_t height = 0;  // log length after the operation
};

/// Single-writer ledger. Not thread-safe; callers serialize mutations.
class Ledger {
 public:
  static constexpr uint16_t kFormatVersion = 1;

  Ledger(std::shared_ptr<const kzg::PublicParameters> pp, const Point& fpk);

  const kzg::PublicParameters& params() const { return *pp_; }
  const Point& authority_key() const { return fpk_; }
  const kzg::Commitment& commitment() const { return commitment_; }
  size_t next_index() const { return next_index_; }
  size_t capacity() const { return pp_->n; }
  const std::vector<FieldScalar>& evaluations() const { return evals_; }
  const std::vector<LogEntry>& log() const { return log_; }
  uint64_t height() const { return log_.size(); }
  const std::map<std::array<uint8_t, 32>, StatusRecord>& state() const { return state_; }

  Status search(const FieldScalar& key) const;
  /// Full record, or nullopt when the key was never seen.
  std::optional<StatusRecord> lookup(const FieldScalar& key) const;

  /// Direct status write with transition checking. Throws kIllegalTransition.
  void mapping(const FieldScalar& key, const StatusRecord& value);

  /// Throws kAlreadyRegistered, kInvalidRaSignature (after mapping to pend),
  /// kCapacityExhausted, kMalformedInput (t_expired not after now).
  Issued issue_certificate(const IssueRequest& req, uint64_t now);

  /// `current` is the holder's parameter set, checked against the commitment.
  /// Throws kNotRegistered, kPendNeedsRaValidation, kOwnershipCheckFailed,
  /// kInvalidHolderProof.
  Issued update_certificate(const UpdateRequest& req, const ParameterSet& current);

  /// Throws kNotRegistered, kOwnershipCheckFailed.
  void revoke_certificate(const RevokeRequest& req);

  /// Applies every published slot edit at heights >= from_height to a holder's
  /// parameters. Returns the new height.
  uint64_t sync_holder(ParameterSet& params, uint64_t from_height) const;

  /// True when every entry links to its predecessor and heights are consecutive.
  bool verify_chain() const;

  /// Rebuilds a ledger by re-executing a log from empty. Throws kCorruptState
  /// when the regenerated log differs.
  static Ledger replay(std::shared_ptr<const kzg::PublicParameters> pp, const Point& fpk,
                       std::span<const LogEntry> log);

  Bytes export_state() const;
  /// Throws kVersionMismatch or kCorruptState; never returns a partial state.
  static Ledger import_state(std::shared_ptr<const kzg::PublicParameters> pp, ByteSpan data);

 private:
  static Ledger parse_and_replay(std::shared_ptr<const kzg::PublicParameters> pp, ByteSpan data);
  void check_transition(Status from, Status to) const;
  void set_status(const FieldScalar& key, StatusRecord rec);
  void append(LogOp op, Bytes payload, std::optional<UpdateRef> ref);
  /// Sets slot `index` to `value`, moves the commitment, returns the delta.
  FieldScalar move_slot(size_t index, const FieldScalar& value);

  // State transitions shared by the public entry points and replay.
  size_t apply_issue(const IssueRequest& req);
  size_t apply_update(const UpdateRequest& req);
  const StatusRecord& authorize_update(const UpdateRequest& req) const;
  size_t commit_update(const UpdateRequest& req, const StatusRecord& rec);
  void apply_revoke(const RevokeRequest& req);
  void apply_mapping(const FieldScalar& key, const StatusRecord& value);

  ParameterSet make_parameter_set(size_t index) const;

  std::shared_ptr<const kzg::PublicParameters> pp_;
  Point fpk_;
  kzg::Commitment commitment_;
  std::vector<FieldScalar> evals_;
  size_t next_index_ = 0;
  std::map<std::array<uint8_t, 32>, StatusRecord> state_;
  std::vector<LogEntry> log_;
};

}  // namespace pbag::ledger
