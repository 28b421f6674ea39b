// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef CLAUTH_PROTOCOL_HPP
#define CLAUTH_PROTOCOL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecc.hpp"

namespace clauth::proto {

using Timestamp = std::uint32_t;  // milliseconds

struct PublicParams {
  ecc::Point pk_ta;
  std::uint32_t n_subcarriers = 64;    // N
  std::uint32_t q_epoch = 100;         // Q, messages per pseudo-identity epoch
  Timestamp t_delta_ms = 59000;        // timestamp expiration period
  std::uint32_t n1_bits = 160;         // H1 / identity width
};

struct Certificate {
  ecc::Point pk;
  Timestamp t_r = 0;  // validity deadline
  ecc::Signature sigma_ta;

  Bytes serialize() const;  // pk(40) || t_r(4) || sigma(40) = 84 bytes
  static Certificate parse(const std::uint8_t* p);
  // Byte payload signed by the TA.
  Bytes signed_payload() const;
};

bool verify_certificate(const PublicParams& params, const Certificate& cert);

struct CrlStore {
  std::set<Bytes> revoked;
  bool contains(const Certificate& cert) const { return revoked.count(cert.serialize()) > 0; }
  std::size_t size() const { return revoked.size(); }
};

// Typed rejections for message processing, checked cheapest-first.
enum class Reject {
  StaleTimestamp,
  Revoked,
  BadCert,
  BadSignature,
  UnknownIdentity,
};

const char* reject_name(Reject r);

template <class T>
class Outcome {
 public:
  Outcome(T v) : value_(std::move(v)) {}
  Outcome(Reject e) : error_(e) {}
  bool ok() const { return value_.has_value(); }
  const T& value() const { return *value_; }
  T& value() { return *value_; }
  Reject error() const { return *error_; }

 private:
  std::optional<T> value_;
  std::optional<Reject> error_;
};

// Handshake message <TID, T, Cert, sigma>; same layout for request and
// response (148 bytes on the wire).
struct AuthMessage {
  Bytes tid;  // 20 bytes
  Timestamp t = 0;
  Certificate cert;
  ecc::Signature sigma;

  Bytes serialize() const;
  static AuthMessage parse(const Bytes& wire);
  Bytes signed_payload() const;  // tid || t || cert
};

struct SessionEntry {
  Certificate peer_cert;
  Bytes tid;                // vehicle's temporary identity
  ecc::Point shared_key;    // SK_{i-k}
  std::uint32_t messages_in_epoch = 0;
  ecc::BigInt epoch_scalar;  // a_1 (sender side only)
  ecc::Point epoch_point;    // A_1
  Bytes pid;                 // current pseudo-identity
  // receiver-side epoch tracking: superseded A_1 values are retired so a
  // stale (pid, A_1) pair no longer resolves
  std::set<Bytes> retired_epochs;
};

struct TaState {
  PublicParams params;
  ecc::BigInt master_key;  // beta
  CrlStore crl;
  std::map<Bytes, Bytes> issued;  // cert serialization -> real identity
  std::set<Bytes> registered_ids;
};

struct Terminal {
  PublicParams params;
  ecc::BigInt sk;
  Certificate cert;
  Bytes tid;  // current temporary identity (20 bytes)
  // RSU: sessions keyed by vehicle TID; vehicle: single session under its
  // own TID.
  std::map<Bytes, SessionEntry> sessions;
};

// --- TA phase --------------------------------------------------------------
TaState ta_initialize(std::uint64_t seed);

// Issues <sk, cert> and records real_id <-> cert for traceability.
// Throws std::invalid_argument on duplicate real_id.
std::pair<ecc::BigInt, Certificate> register_terminal(TaState& ta, const Bytes& real_id,
                                                      Timestamp t_r);
// Appends an issued certificate to the CRL. Throws on unknown certificate.
const CrlStore& revoke(TaState& ta, const Certificate& cert);
// Maps an issued certificate back to the registered real identity.
const Bytes& trace_certificate(const TaState& ta, const Certificate& cert);

// --- initial authentication --------------------------------------------------
AuthMessage build_auth_request(Terminal& term, Timestamp now, std::uint64_t seed);
// RSU side: freshness -> CRL -> cert -> signature, then stores the session.
Outcome<const SessionEntry*> process_auth_request(Terminal& rsu, const AuthMessage& req,
                                                  Timestamp t_receive, const CrlStore& crl);
AuthMessage build_auth_response(Terminal& rsu, Timestamp now, std::uint64_t seed);
// Vehicle side mirror; on success creates the vehicle's session (first
// pseudo-identity epoch included).
Outcome<const SessionEntry*> process_auth_response(Terminal& vehicle, const AuthMessage& resp,
                                                   Timestamp t_receive, const CrlStore& crl,
                                                   std::uint64_t epoch_seed);

// --- pseudo-identity management ----------------------------------------------
// Fresh a_1, A_1 = a_1 * G, pid = tid XOR H1(a_1 * pk_peer); resets counter.
void next_pseudo_identity(SessionEntry& session, const ecc::Point& pk_peer, std::uint64_t seed);
// Receiver: pid XOR H1(A_1 * sk_own) -> tid lookup. Stale epochs are
// rejected as UnknownIdentity.
Outcome<SessionEntry*> resolve_pseudo_identity(Terminal& rsu, const Bytes& pid,
                                               const ecc::Point& a1_point);
// Sender bookkeeping: counts a sent message, rotating the epoch after the
// Q-th so the counter stays below Q.
void note_message_sent(SessionEntry& session, const ecc::Point& pk_peer, std::uint32_t q_epoch,
                       std::uint64_t seed);

// --- re-authentication wire format ---------------------------------------------
// pid(20) || A1(40) || t3(4) || sigma_phy(48) = 112 bytes + payload m.
struct ReauthHeader {
  Bytes pid;
  ecc::Point a1;
  Timestamp t3 = 0;
  Bytes sigma_phy;  // fixed 48-byte accounting block

  Bytes serialize() const;
  static ReauthHeader parse(const Bytes& wire);
};

// Packs two Gray-coded phase vectors at 2 bits/symbol into the fixed
// 48-byte wire block (exact fit at N = 128).
Bytes pack_sigma_phy(const std::vector<double>& phi_a, const std::vector<double>& phi_b);

bool timestamp_fresh(Timestamp sent, Timestamp received, Timestamp t_delta);

constexpr std::size_t kAuthMessageSize = 148;
constexpr std::size_t kCertificateSize = 84;
constexpr std::size_t kReauthHeaderSize = 112;
constexpr std::size_t kSigmaPhySize = 48;

}  // namespace clauth::proto

#endif
