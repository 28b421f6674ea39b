// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef CLAUTH_ECC_HPP
#define CLAUTH_ECC_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <utility>
#include <vector>

#include "bytes.hpp"
#include "rng.hpp"

namespace clauth::ecc {

using BigInt = boost::multiprecision::cpp_int;

// Affine point; x, y in [0, p) for finite points.
struct Point {
  BigInt x;
  BigInt y;
  bool infinity = true;

  static Point at_infinity() { return Point{}; }
  bool operator==(const Point& o) const {
    if (infinity != o.infinity) return false;
    return infinity || (x == o.x && y == o.y);
  }
};

// secp160k1 domain parameters: y^2 = x^3 + a x + b mod p, order(G) = q.
struct CurveParams {
  BigInt a;
  BigInt b;
  BigInt p;
  BigInt q;
  Point generator;
  bool is_on_curve(const Point& pt) const;
};

const CurveParams& secp160k1();

// Group law. Total on valid points; handles identity, doubling and
// inverse pairs.
Point point_add(const Point& p1, const Point& p2);
Point point_negate(const Point& p);
// k*P via Jacobian double-and-add; q * G = point at infinity.
Point scalar_mul(const BigInt& k, const Point& p);

struct Signature {
  BigInt r;
  BigInt s;
  bool operator==(const Signature& o) const { return r == o.r && s == o.s; }
};

// Secret keys and nonces are drawn from [1, 2^160 - 1] so every scalar
// serializes to exactly 20 bytes (q is 161 bits wide).
BigInt random_scalar(Rng& rng);
std::pair<BigInt, Point> keygen(std::uint64_t seed);

// Nonce-based EC signature with a 20-byte message digest; nonce derived
// deterministically from (sk, msg) so traces are reproducible.
Signature sign(const BigInt& sk, const Bytes& msg);
bool verify(const Point& pk, const Bytes& msg, const Signature& sig);

// Diffie-Hellman point multiplication: sk_own * pk_peer.
// Throws std::invalid_argument if pk_peer is the point at infinity or
// off-curve.
Point ecdh(const BigInt& sk_own, const Point& pk_peer);

// --- serialization -------------------------------------------------------
// Tagged point: 0x00 = infinity (1 byte), 0x04 || x(20) || y(20).
Bytes serialize_point(const Point& p);
Point deserialize_point(const Bytes& in);
// Bare coordinates x(20) || y(20); used inside wire messages where the
// 40-byte group-element accounting applies. Rejects the point at infinity.
Bytes point_xy(const Point& p);
Bytes serialize_scalar(const BigInt& s);  // 20 bytes big-endian
BigInt scalar_from_bytes(const std::uint8_t* p, std::size_t len);
Bytes serialize_signature(const Signature& sig);  // r || s, 40 bytes
Signature deserialize_signature(const std::uint8_t* p);

// --- hashes --------------------------------------------------------------
Bytes sha1(const Bytes& in);  // 20 bytes
// Counter-mode expansion sha1(in||0x00) || sha1(in||0x01) || ...,
// truncated to nbits (a partial final byte keeps its high bits).
Bytes expand_digest(const Bytes& in, std::size_t nbits);
// H1: {0,1}* -> {0,1}^n1_bits (default 160).
Bytes h1(const Bytes& in, std::size_t n1_bits = 160);
// H2: {0,1}* -> {0,1}^(2*n2) for n2 = 3N/4 data subcarriers.
Bytes h2(const Bytes& in, std::size_t n2);

// --- 2-bit Gray phase mapper ----------------------------------------------
// [00]->0, [01]->pi/2, [11]->pi, [10]->3pi/2.
double gray_map(unsigned two_bits);
// Consumes nbits (must be even) MSB-first from `bits`, two at a time.
std::vector<double> gray_map_vector(const Bytes& bits, std::size_t nbits);

}  // namespace clauth::ecc

#endif
