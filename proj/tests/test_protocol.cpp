// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <set>

#include "protocol.hpp"

using namespace clauth;
using proto::Reject;

namespace {

struct Network {
  proto::TaState ta;
  proto::Terminal vehicle;
  proto::Terminal rsu;

  explicit Network(std::uint64_t seed = 11) {
    ta = proto::ta_initialize(seed);
    auto [sk_v, cert_v] = proto::register_terminal(ta, from_string("VIN-0001"), 0xffffffffu);
    auto [sk_r, cert_r] = proto::register_terminal(ta, from_string("RSU-0001"), 0xffffffffu);
    vehicle = proto::Terminal{ta.params, sk_v, cert_v, {}, {}};
    rsu = proto::Terminal{ta.params, sk_r, cert_r, {}, {}};
  }

  // Runs the full handshake; returns the vehicle-side session.
  proto::SessionEntry* handshake(proto::Timestamp t0 = 1000) {
    const auto req = proto::build_auth_request(vehicle, t0, 101);
    auto r = proto::process_auth_request(rsu, req, t0 + 10, ta.crl);
    REQUIRE(r.ok());
    const auto resp = proto::build_auth_response(rsu, t0 + 20, 102);
    auto v = proto::process_auth_response(vehicle, resp, t0 + 30, ta.crl, 103);
    REQUIRE(v.ok());
    return &vehicle.sessions[vehicle.tid];
  }
};

}  // namespace

TEST_CASE("ta_initialize is deterministic and well-formed") {
  const auto ta1 = proto::ta_initialize(5);
  const auto ta2 = proto::ta_initialize(5);
  CHECK(ta1.master_key == ta2.master_key);
  CHECK(ta1.params.pk_ta == ta2.params.pk_ta);
  CHECK_FALSE(ta1.params.pk_ta.infinity);
  CHECK(ecc::secp160k1().is_on_curve(ta1.params.pk_ta));
  CHECK(ta1.params.pk_ta == ecc::scalar_mul(ta1.master_key, ecc::secp160k1().generator));
}

TEST_CASE("registration issues verifiable certificates and tracks identities") {
  auto ta = proto::ta_initialize(6);
  auto [sk, cert] = proto::register_terminal(ta, from_string("VIN-42"), 123456);
  CHECK(proto::verify_certificate(ta.params, cert));
  CHECK(cert.serialize().size() == proto::kCertificateSize);
  CHECK(proto::trace_certificate(ta, cert) == from_string("VIN-42"));

  proto::Certificate tampered = cert;
  tampered.pk = ecc::scalar_mul(9, ecc::secp160k1().generator);
  CHECK_FALSE(proto::verify_certificate(ta.params, tampered));
  CHECK_THROWS_AS(proto::trace_certificate(ta, tampered), std::invalid_argument);
  CHECK_THROWS_AS(proto::register_terminal(ta, from_string("VIN-42"), 1), std::invalid_argument);
}

TEST_CASE("registrations yield distinct secrets") {
  auto ta = proto::ta_initialize(7);
  std::set<ecc::BigInt> secrets;
  for (int i = 0; i < 1000; ++i) {
    Bytes id = from_string("V" + std::to_string(i));
    auto [sk, cert] = proto::register_terminal(ta, id, 99);
    secrets.insert(sk);
  }
  CHECK(secrets.size() == 1000);
}

TEST_CASE("handshake: honest parties derive the same shared key") {
  Network net;
  auto* vsession = net.handshake();
  auto& rsession = net.rsu.sessions[net.vehicle.tid];
  CHECK(vsession->shared_key == rsession.shared_key);
  CHECK_FALSE(vsession->shared_key.infinity);
  CHECK(rsession.tid == net.vehicle.tid);
}

TEST_CASE("auth request wire format is byte-exact") {
  Network net;
  const auto req = proto::build_auth_request(net.vehicle, 5000, 77);
  const Bytes wire = req.serialize();
  CHECK(wire.size() == proto::kAuthMessageSize);  // 20 + 4 + 84 + 40 = 148
  const auto parsed = proto::AuthMessage::parse(wire);
  CHECK(parsed.serialize() == wire);
  CHECK(parsed.tid == req.tid);
  CHECK(parsed.t == 5000);
  CHECK(ecc::verify(parsed.cert.pk, parsed.signed_payload(), parsed.sigma));
}

TEST_CASE("fresh TID per session") {
  Network net;
  std::set<Bytes> tids;
  for (int i = 0; i < 1000; ++i) {
    const auto req = proto::build_auth_request(net.vehicle, 1000 + i, 9000 + i);
    tids.insert(req.tid);
  }
  CHECK(tids.size() == 1000);
}

TEST_CASE("rejection ordering: timestamp, CRL, certificate, signature") {
  Network net;
  const proto::Timestamp t0 = 10000;
  auto req = proto::build_auth_request(net.vehicle, t0, 55);

  SUBCASE("stale timestamp") {
    const proto::Timestamp late = t0 + net.rsu.params.t_delta_ms + 1;
    auto r = proto::process_auth_request(net.rsu, req, late, net.ta.crl);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error() == Reject::StaleTimestamp);
  }
  SUBCASE("boundary timestamp is fresh") {
    const proto::Timestamp edge = t0 + net.rsu.params.t_delta_ms;
    CHECK(proto::process_auth_request(net.rsu, req, edge, net.ta.crl).ok());
  }
  SUBCASE("revoked certificate") {
    proto::revoke(net.ta, net.vehicle.cert);
    auto r = proto::process_auth_request(net.rsu, req, t0 + 1, net.ta.crl);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error() == Reject::Revoked);
  }
  SUBCASE("stale beats revoked (cheapest first)") {
    proto::revoke(net.ta, net.vehicle.cert);
    const proto::Timestamp late = t0 + net.rsu.params.t_delta_ms + 1;
    auto r = proto::process_auth_request(net.rsu, req, late, net.ta.crl);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error() == Reject::StaleTimestamp);
  }
  SUBCASE("tampered certificate") {
    req.cert.t_r ^= 1;
    req.sigma = ecc::sign(net.vehicle.sk, req.signed_payload());  // re-signed, cert still bad
    auto r = proto::process_auth_request(net.rsu, req, t0 + 1, net.ta.crl);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error() == Reject::BadCert);
  }
  SUBCASE("tampered tid breaks the signature") {
    req.tid[0] ^= 0x80;
    auto r = proto::process_auth_request(net.rsu, req, t0 + 1, net.ta.crl);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error() == Reject::BadSignature);
  }
  SUBCASE("impersonation without the secret key") {
    const auto [sk_eve, pk_eve] = ecc::keygen(666);
    req.sigma = ecc::sign(sk_eve, req.signed_payload());
    auto r = proto::process_auth_request(net.rsu, req, t0 + 1, net.ta.crl);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error() == Reject::BadSignature);
  }
}

TEST_CASE("revocation: CRL size and post-revocation behavior") {
  Network net;
  CHECK(net.ta.crl.size() == 0);
  proto::revoke(net.ta, net.vehicle.cert);
  CHECK(net.ta.crl.size() == 1);

  const auto req = proto::build_auth_request(net.vehicle, 1000, 3);
  auto r = proto::process_auth_request(net.rsu, req, 1001, net.ta.crl);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error() == Reject::Revoked);

  // an unrelated, non-revoked terminal still authenticates
  auto [sk2, cert2] = proto::register_terminal(net.ta, from_string("VIN-0002"), 0xffffffffu);
  proto::Terminal other{net.ta.params, sk2, cert2, {}, {}};
  const auto req2 = proto::build_auth_request(other, 1000, 4);
  CHECK(proto::process_auth_request(net.rsu, req2, 1001, net.ta.crl).ok());

  proto::Certificate unknown = cert2;
  unknown.t_r ^= 0xff;
  CHECK_THROWS_AS(proto::revoke(net.ta, unknown), std::invalid_argument);
}

TEST_CASE("vehicle rejects a revoked or tampered RSU response") {
  Network net;
  const auto req = proto::build_auth_request(net.vehicle, 1000, 5);
  REQUIRE(proto::process_auth_request(net.rsu, req, 1001, net.ta.crl).ok());
  auto resp = proto::build_auth_response(net.rsu, 1002, 6);

  SUBCASE("revoked RSU") {
    proto::revoke(net.ta, net.rsu.cert);
    auto v = proto::process_auth_response(net.vehicle, resp, 1003, net.ta.crl, 7);
    REQUIRE_FALSE(v.ok());
    CHECK(v.error() == Reject::Revoked);
  }
  SUBCASE("modified TID in transit") {
    resp.tid[3] ^= 0x10;
    auto v = proto::process_auth_response(net.vehicle, resp, 1003, net.ta.crl, 7);
    REQUIRE_FALSE(v.ok());
    CHECK(v.error() == Reject::BadSignature);
  }
}

TEST_CASE("pseudo-identity resolve/rotate round trip") {
  Network net;
  auto* vsession = net.handshake();

  // resolver inverts the XOR mask through the shared Diffie-Hellman point
  auto resolved = proto::resolve_pseudo_identity(net.rsu, vsession->pid, vsession->epoch_point);
  REQUIRE(resolved.ok());
  CHECK(resolved.value()->tid == net.vehicle.tid);
  CHECK(vsession->messages_in_epoch == 0);

  SUBCASE("two epochs give distinct pids; counter resets") {
    const Bytes pid1 = vsession->pid;
    proto::next_pseudo_identity(*vsession, net.rsu.cert.pk, 991);
    CHECK(vsession->pid != pid1);
    CHECK(vsession->messages_in_epoch == 0);

    std::set<Bytes> pids;
    for (int i = 0; i < 1000; ++i) {
      proto::next_pseudo_identity(*vsession, net.rsu.cert.pk, 10000 + i);
      pids.insert(vsession->pid);
    }
    CHECK(pids.size() == 1000);
  }

  SUBCASE("random pid is unknown") {
    int misses = 0;
    for (int i = 0; i < 1000; ++i) {
      Rng rng(777 + i);
      Bytes random_pid(20);
      for (auto& b : random_pid) b = static_cast<std::uint8_t>(rng.next_u64() & 0xff);
      if (!proto::resolve_pseudo_identity(net.rsu, random_pid, vsession->epoch_point).ok())
        ++misses;
    }
    CHECK(misses == 1000);
  }

  SUBCASE("pid from the previous epoch is rejected after rotation") {
    const Bytes old_pid = vsession->pid;
    const ecc::Point old_a1 = vsession->epoch_point;
    proto::next_pseudo_identity(*vsession, net.rsu.cert.pk, 992);
    // the RSU sees the new epoch first ...
    REQUIRE(proto::resolve_pseudo_identity(net.rsu, vsession->pid, vsession->epoch_point).ok());
    // ... after which the superseded epoch no longer resolves
    auto stale = proto::resolve_pseudo_identity(net.rsu, old_pid, old_a1);
    REQUIRE_FALSE(stale.ok());
    CHECK(stale.error() == Reject::UnknownIdentity);
  }

  SUBCASE("resolver with the wrong RSU secret finds nothing") {
    auto [sk_other, cert_other] = proto::register_terminal(net.ta, from_string("RSU-X"), 1);
    proto::Terminal wrong_rsu{net.ta.params, sk_other, cert_other, {}, net.rsu.sessions};
    auto r = proto::resolve_pseudo_identity(wrong_rsu, vsession->pid, vsession->epoch_point);
    CHECK_FALSE(r.ok());
  }
}

TEST_CASE("epoch counter rotates after Q messages") {
  Network net;
  auto* vsession = net.handshake();
  net.vehicle.params.q_epoch = 5;
  const Bytes pid0 = vsession->pid;
  for (int i = 0; i < 4; ++i)
    proto::note_message_sent(*vsession, net.rsu.cert.pk, 5, 100 + i);
  CHECK(vsession->messages_in_epoch == 4);
  CHECK(vsession->pid == pid0);
  proto::note_message_sent(*vsession, net.rsu.cert.pk, 5, 104);
  CHECK(vsession->messages_in_epoch == 0);  // rotated
  CHECK(vsession->pid != pid0);
}

TEST_CASE("re-auth header wire format") {
  Network net;
  auto* vsession = net.handshake();
  proto::ReauthHeader h;
  h.pid = vsession->pid;
  h.a1 = vsession->epoch_point;
  h.t3 = 424242;
  h.sigma_phy = Bytes(proto::kSigmaPhySize, 0xab);
  const Bytes wire = h.serialize();
  CHECK(wire.size() == proto::kReauthHeaderSize);  // 20 + 40 + 4 + 48 = 112
  const auto parsed = proto::ReauthHeader::parse(wire);
  CHECK(parsed.pid == h.pid);
  CHECK(parsed.a1 == h.a1);
  CHECK(parsed.t3 == h.t3);
  CHECK(parsed.sigma_phy == h.sigma_phy);
}

TEST_CASE("sigma_phy packing is 48 bytes for any N") {
  const std::vector<double> phases48(48, M_PI);       // N = 64
  const std::vector<double> phases96(96, M_PI / 2);   // N = 128
  const std::vector<double> phases192(192, 0.0);      // N = 256
  CHECK(proto::pack_sigma_phy(phases48, phases48).size() == proto::kSigmaPhySize);
  const Bytes b96 = proto::pack_sigma_phy(phases96, phases96);
  CHECK(b96.size() == proto::kSigmaPhySize);
  // pi/2 maps to Gray code 01 -> bytes 0b01010101
  CHECK(b96[0] == 0x55);
  CHECK(proto::pack_sigma_phy(phases192, phases192).size() == proto::kSigmaPhySize);
}

TEST_CASE("replay after the expiration window is stale") {
  Network net;
  const proto::Timestamp t0 = 20000;
  const auto req = proto::build_auth_request(net.vehicle, t0, 8);
  const Bytes wire = req.serialize();
  REQUIRE(proto::process_auth_request(net.rsu, proto::AuthMessage::parse(wire), t0 + 5,
                                      net.ta.crl)
              .ok());
  const auto replayed = proto::AuthMessage::parse(wire);
  auto r = proto::process_auth_request(net.rsu, replayed,
                                       t0 + net.rsu.params.t_delta_ms + 500, net.ta.crl);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error() == Reject::StaleTimestamp);
}
