// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "protocol.hpp"

#include <algorithm>

#include "rng.hpp"

namespace clauth::proto {

const char* reject_name(Reject r) {
  switch (r) {
    case Reject::StaleTimestamp: return "STALE_TIMESTAMP";
    case Reject::Revoked: return "REVOKED";
    case Reject::BadCert: return "BAD_CERT";
    case Reject::BadSignature: return "BAD_SIGNATURE";
    case Reject::UnknownIdentity: return "UNKNOWN_IDENTITY";
  }
  return "?";
}

Bytes Certificate::signed_payload() const {
  Bytes out = ecc::point_xy(pk);
  put_u32be(out, t_r);
  return out;
}

Bytes Certificate::serialize() const {
  Bytes out = ecc::point_xy(pk);
  put_u32be(out, t_r);
  append(out, ecc::serialize_signature(sigma_ta));
  return out;
}

Certificate Certificate::parse(const std::uint8_t* p) {
  Certificate c;
  c.pk.infinity = false;
  c.pk.x = ecc::scalar_from_bytes(p, 20);
  c.pk.y = ecc::scalar_from_bytes(p + 20, 20);
  c.t_r = get_u32be(p + 40);
  c.sigma_ta = ecc::deserialize_signature(p + 44);
  return c;
}

bool verify_certificate(const PublicParams& params, const Certificate& cert) {
  if (cert.pk.infinity || !ecc::secp160k1().is_on_curve(cert.pk)) return false;
  return ecc::verify(params.pk_ta, cert.signed_payload(), cert.sigma_ta);
}

Bytes AuthMessage::signed_payload() const {
  Bytes out = tid;
  put_u32be(out, t);
  append(out, cert.serialize());
  return out;
}

Bytes AuthMessage::serialize() const {
  Bytes out = signed_payload();
  append(out, ecc::serialize_signature(sigma));
  return out;
}

AuthMessage AuthMessage::parse(const Bytes& wire) {
  if (wire.size() != kAuthMessageSize) throw std::invalid_argument("bad auth message size");
  AuthMessage m;
  m.tid.assign(wire.begin(), wire.begin() + 20);
  m.t = get_u32be(wire.data() + 20);
  m.cert = Certificate::parse(wire.data() + 24);
  m.sigma = ecc::deserialize_signature(wire.data() + 24 + kCertificateSize);
  return m;
}

bool timestamp_fresh(Timestamp sent, Timestamp received, Timestamp t_delta) {
  // T_r - T_i <= T_delta, evaluated signed so a not-yet-due timestamp is
  // fresh as well.
  const std::int64_t diff = static_cast<std::int64_t>(received) - static_cast<std::int64_t>(sent);
  return diff <= static_cast<std::int64_t>(t_delta);
}

TaState ta_initialize(std::uint64_t seed) {
  TaState ta;
  Rng rng(seed);
  ta.master_key = ecc::random_scalar(rng);
  ta.params.pk_ta = ecc::scalar_mul(ta.master_key, ecc::secp160k1().generator);
  return ta;
}

std::pair<ecc::BigInt, Certificate> register_terminal(TaState& ta, const Bytes& real_id,
                                                      Timestamp t_r) {
  if (ta.registered_ids.count(real_id))
    throw std::invalid_argument("real identity already registered");
  // Per-registration key material derived from the master key and identity;
  // distinct identities get distinct secrets.
  Bytes seed_src = ecc::serialize_scalar(ta.master_key);
  append(seed_src, real_id);
  put_u32be(seed_src, t_r);
  const Bytes d = ecc::sha1(seed_src);
  std::uint64_t seed = 0;
  for (int i = 0; i < 8; ++i) seed = (seed << 8) | d[i];
  Rng rng(seed);
  const ecc::BigInt sk = ecc::random_scalar(rng);

  Certificate cert;
  cert.pk = ecc::scalar_mul(sk, ecc::secp160k1().generator);
  cert.t_r = t_r;
  cert.sigma_ta = ecc::sign(ta.master_key, cert.signed_payload());

  ta.registered_ids.insert(real_id);
  ta.issued[cert.serialize()] = real_id;
  return {sk, cert};
}

const CrlStore& revoke(TaState& ta, const Certificate& cert) {
  const Bytes key = cert.serialize();
  if (!ta.issued.count(key)) throw std::invalid_argument("revoke: certificate was not issued");
  ta.crl.revoked.insert(key);
  return ta.crl;
}

const Bytes& trace_certificate(const TaState& ta, const Certificate& cert) {
  auto it = ta.issued.find(cert.serialize());
  if (it == ta.issued.end()) throw std::invalid_argument("trace: certificate was not issued");
  return it->second;
}

static Bytes random_tid(Rng& rng, std::size_t n1_bits) {
  Bytes tid((n1_bits + 7) / 8);
  for (auto& b : tid) b = static_cast<std::uint8_t>(rng.next_u64() & 0xff);
  return tid;
}

AuthMessage build_auth_request(Terminal& term, Timestamp now, std::uint64_t seed) {
  Rng rng(seed);
  term.tid = random_tid(rng, term.params.n1_bits);
  AuthMessage m;
  m.tid = term.tid;
  m.t = now;
  m.cert = term.cert;
  m.sigma = ecc::sign(term.sk, m.signed_payload());
  return m;
}

AuthMessage build_auth_response(Terminal& rsu, Timestamp now, std::uint64_t seed) {
  // Same tuple shape <TID_Rk, T_2, Cert_Rk, sigma_Rk>.
  return build_auth_request(rsu, now, seed);
}

static std::optional<Reject> vet_message(const PublicParams& params, const AuthMessage& msg,
                                         Timestamp t_receive, const CrlStore& crl) {
  // Ordering: timestamp -> CRL -> certificate -> signature (cheapest first).
  if (!timestamp_fresh(msg.t, t_receive, params.t_delta_ms)) return Reject::StaleTimestamp;
  if (crl.contains(msg.cert)) return Reject::Revoked;
  if (!verify_certificate(params, msg.cert)) return Reject::BadCert;
  if (!ecc::verify(msg.cert.pk, msg.signed_payload(), msg.sigma)) return Reject::BadSignature;
  return std::nullopt;
}

Outcome<const SessionEntry*> process_auth_request(Terminal& rsu, const AuthMessage& req,
                                                  Timestamp t_receive, const CrlStore& crl) {
  if (auto rej = vet_message(rsu.params, req, t_receive, crl)) return *rej;
  SessionEntry entry;
  entry.peer_cert = req.cert;
  entry.tid = req.tid;
  entry.shared_key = ecc::ecdh(rsu.sk, req.cert.pk);
  auto [it, _] = rsu.sessions.insert_or_assign(req.tid, std::move(entry));
  return Outcome<const SessionEntry*>(&it->second);
}

Outcome<const SessionEntry*> process_auth_response(Terminal& vehicle, const AuthMessage& resp,
                                                   Timestamp t_receive, const CrlStore& crl,
                                                   std::uint64_t epoch_seed) {
  if (auto rej = vet_message(vehicle.params, resp, t_receive, crl)) return *rej;
  SessionEntry entry;
  entry.peer_cert = resp.cert;
  entry.tid = vehicle.tid;
  entry.shared_key = ecc::ecdh(vehicle.sk, resp.cert.pk);
  next_pseudo_identity(entry, resp.cert.pk, epoch_seed);
  auto [it, _] = vehicle.sessions.insert_or_assign(vehicle.tid, std::move(entry));
  return Outcome<const SessionEntry*>(&it->second);
}

static Bytes xor_bytes(const Bytes& a, const Bytes& b) {
  Bytes out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i % b.size()];
  return out;
}

void next_pseudo_identity(SessionEntry& session, const ecc::Point& pk_peer, std::uint64_t seed) {
  Rng rng(seed);
  session.epoch_scalar = ecc::random_scalar(rng);
  session.epoch_point = ecc::scalar_mul(session.epoch_scalar, ecc::secp160k1().generator);
  const ecc::Point mask_point = ecc::ecdh(session.epoch_scalar, pk_peer);
  session.pid = xor_bytes(session.tid, ecc::h1(ecc::serialize_point(mask_point), session.tid.size() * 8));
  session.messages_in_epoch = 0;
}

void note_message_sent(SessionEntry& session, const ecc::Point& pk_peer, std::uint32_t q_epoch,
                       std::uint64_t seed) {
  ++session.messages_in_epoch;
  // Rotate after the Q-th message so the counter never reaches Q between
  // sends.
  if (session.messages_in_epoch >= q_epoch) next_pseudo_identity(session, pk_peer, seed);
}

Outcome<SessionEntry*> resolve_pseudo_identity(Terminal& rsu, const Bytes& pid,
                                               const ecc::Point& a1_point) {
  ecc::Point mask_point;
  try {
    mask_point = ecc::ecdh(rsu.sk, a1_point);
  } catch (const std::invalid_argument&) {
    return Reject::UnknownIdentity;
  }
  const Bytes tid = xor_bytes(pid, ecc::h1(ecc::serialize_point(mask_point), pid.size() * 8));
  auto it = rsu.sessions.find(tid);
  if (it == rsu.sessions.end()) return Reject::UnknownIdentity;
  SessionEntry& entry = it->second;
  const Bytes a1_ser = ecc::serialize_point(a1_point);
  if (entry.retired_epochs.count(a1_ser)) return Reject::UnknownIdentity;  // stale epoch
  if (entry.pid.empty()) {
    // first message of a fresh epoch on the receiver side
    entry.pid = pid;
  } else if (entry.pid != pid) {
    // epoch rotation: retire the previous A_1
    if (!entry.epoch_point.infinity)
      entry.retired_epochs.insert(ecc::serialize_point(entry.epoch_point));
    entry.pid = pid;
    entry.messages_in_epoch = 0;
  }
  entry.epoch_point = a1_point;
  return Outcome<SessionEntry*>(&entry);
}

Bytes ReauthHeader::serialize() const {
  if (pid.size() != 20) throw std::invalid_argument("pid must be 20 bytes");
  if (sigma_phy.size() != kSigmaPhySize) throw std::invalid_argument("sigma_phy must be 48 bytes");
  Bytes out = pid;
  append(out, ecc::point_xy(a1));
  put_u32be(out, t3);
  append(out, sigma_phy);
  return out;
}

ReauthHeader ReauthHeader::parse(const Bytes& wire) {
  if (wire.size() != kReauthHeaderSize) throw std::invalid_argument("bad re-auth header size");
  ReauthHeader h;
  h.pid.assign(wire.begin(), wire.begin() + 20);
  h.a1.infinity = false;
  h.a1.x = ecc::scalar_from_bytes(wire.data() + 20, 20);
  h.a1.y = ecc::scalar_from_bytes(wire.data() + 40, 20);
  h.t3 = get_u32be(wire.data() + 60);
  h.sigma_phy.assign(wire.begin() + 64, wire.end());
  return h;
}

static unsigned gray_code_of(double phase) {
  // inverse of the 2-bit Gray mapping; phases are exact multiples of pi/2
  const int quadrant = static_cast<int>(std::lround(phase / (M_PI / 2))) & 3;
  switch (quadrant) {
    case 0: return 0b00;
    case 1: return 0b01;
    case 2: return 0b11;
    default: return 0b10;
  }
}

Bytes pack_sigma_phy(const std::vector<double>& phi_a, const std::vector<double>& phi_b) {
  Bytes out(kSigmaPhySize, 0);
  std::size_t bit = 0;
  auto push2 = [&](unsigned code) {
    if (bit + 2 > kSigmaPhySize * 8) return;
    for (int k = 1; k >= 0; --k) {
      if ((code >> k) & 1u) out[bit / 8] |= static_cast<std::uint8_t>(0x80u >> (bit % 8));
      ++bit;
    }
  };
  for (double ph : phi_a) push2(gray_code_of(ph));
  for (double ph : phi_b) push2(gray_code_of(ph));
  return out;
}

}  // namespace clauth::proto
