// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ecc.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <stdexcept>

namespace clauth::ecc {

using boost::multiprecision::powm;

static const BigInt kTwo160 = BigInt(1) << 160;

const CurveParams& secp160k1() {
  static const CurveParams params = [] {
    CurveParams c;
    c.a = 0;
    c.b = 7;
    c.p = BigInt("0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFAC73");
    c.q = BigInt("0x0100000000000000000001B8FA16DFAB9ACA16B6B3");
    c.generator.x = BigInt("0x3B4C382CE37AA192A4019E763036F4F5DD4D7EBB");
    c.generator.y = BigInt("0x938CF935318FDCED6BC28286531733C3F03C4FEE");
    c.generator.infinity = false;
    return c;
  }();
  return params;
}

static BigInt mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

static BigInt inv_mod(const BigInt& a, const BigInt& m) {
  // m prime throughout this module.
  return powm(mod(a, m), m - 2, m);
}

bool CurveParams::is_on_curve(const Point& pt) const {
  if (pt.infinity) return true;
  if (pt.x < 0 || pt.x >= p || pt.y < 0 || pt.y >= p) return false;
  return mod(pt.y * pt.y - (pt.x * pt.x * pt.x + a * pt.x + b), p) == 0;
}

Point point_negate(const Point& pt) {
  if (pt.infinity) return pt;
  const auto& c = secp160k1();
  return Point{pt.x, mod(-pt.y, c.p), false};
}

Point point_add(const Point& p1, const Point& p2) {
  const auto& c = secp160k1();
  if (p1.infinity) return p2;
  if (p2.infinity) return p1;
  if (p1.x == p2.x) {
    if (mod(p1.y + p2.y, c.p) == 0) return Point::at_infinity();
    // doubling
    const BigInt lam = mod((3 * p1.x * p1.x + c.a) * inv_mod(2 * p1.y, c.p), c.p);
    const BigInt x3 = mod(lam * lam - 2 * p1.x, c.p);
    const BigInt y3 = mod(lam * (p1.x - x3) - p1.y, c.p);
    return Point{x3, y3, false};
  }
  const BigInt lam = mod((p2.y - p1.y) * inv_mod(p2.x - p1.x, c.p), c.p);
  const BigInt x3 = mod(lam * lam - p1.x - p2.x, c.p);
  const BigInt y3 = mod(lam * (p1.x - x3) - p1.y, c.p);
  return Point{x3, y3, false};
}

// Jacobian coordinates keep scalar_mul inversion-free until the end.
namespace {

struct Jac {
  BigInt x, y, z;  // z == 0 encodes infinity
};

Jac to_jac(const Point& p) {
  if (p.infinity) return {1, 1, 0};
  return {p.x, p.y, 1};
}

Point from_jac(const Jac& j) {
  const auto& c = secp160k1();
  if (j.z == 0) return Point::at_infinity();
  const BigInt zi = inv_mod(j.z, c.p);
  const BigInt zi2 = mod(zi * zi, c.p);
  return Point{mod(j.x * zi2, c.p), mod(j.y * zi2 * zi, c.p), false};
}

Jac jac_double(const Jac& j) {
  const auto& c = secp160k1();
  if (j.z == 0 || j.y == 0) return {1, 1, 0};
  // a = 0 for secp160k1, so M = 3*X^2.
  const BigInt ysq = mod(j.y * j.y, c.p);
  const BigInt s = mod(4 * j.x * ysq, c.p);
  const BigInt m = mod(3 * j.x * j.x, c.p);
  const BigInt x3 = mod(m * m - 2 * s, c.p);
  const BigInt y3 = mod(m * (s - x3) - 8 * ysq * ysq, c.p);
  const BigInt z3 = mod(2 * j.y * j.z, c.p);
  return {x3, y3, z3};
}

Jac jac_add(const Jac& p, const Jac& q) {
  const auto& c = secp160k1();
  if (p.z == 0) return q;
  if (q.z == 0) return p;
  const BigInt z1z1 = mod(p.z * p.z, c.p);
  const BigInt z2z2 = mod(q.z * q.z, c.p);
  const BigInt u1 = mod(p.x * z2z2, c.p);
  const BigInt u2 = mod(q.x * z1z1, c.p);
  const BigInt s1 = mod(p.y * q.z * z2z2, c.p);
  const BigInt s2 = mod(q.y * p.z * z1z1, c.p);
  if (u1 == u2) {
    if (s1 != s2) return {1, 1, 0};
    return jac_double(p);
  }
  const BigInt h = mod(u2 - u1, c.p);
  const BigInt hh = mod(h * h, c.p);
  const BigInt hhh = mod(h * hh, c.p);
  const BigInt r = mod(s2 - s1, c.p);
  const BigInt v = mod(u1 * hh, c.p);
  const BigInt x3 = mod(r * r - hhh - 2 * v, c.p);
  const BigInt y3 = mod(r * (v - x3) - s1 * hhh, c.p);
  const BigInt z3 = mod(h * p.z * q.z, c.p);
  return {x3, y3, z3};
}

}  // namespace

Point scalar_mul(const BigInt& k, const Point& p) {
  if (k == 0 || p.infinity) return Point::at_infinity();
  BigInt n = k;
  bool neg = false;
  if (n < 0) {
    n = -n;
    neg = true;
  }
  Jac acc{1, 1, 0};
  Jac base = to_jac(p);
  while (n > 0) {
    if (boost::multiprecision::bit_test(n, 0)) acc = jac_add(acc, base);
    base = jac_double(base);
    n >>= 1;
  }
  Point out = from_jac(acc);
  return neg ? point_negate(out) : out;
}

BigInt random_scalar(Rng& rng) {
  for (;;) {
    BigInt v = 0;
    for (int i = 0; i < 3; ++i) {
      v <<= 64;
      v |= rng.next_u64();
    }
    v &= kTwo160 - 1;
    if (v != 0) return v;
  }
}

std::pair<BigInt, Point> keygen(std::uint64_t seed) {
  Rng rng(seed);
  const BigInt sk = random_scalar(rng);
  return {sk, scalar_mul(sk, secp160k1().generator)};
}

Bytes sha1(const Bytes& in) {
  Bytes out(20);
  unsigned int len = 0;
  if (EVP_Digest(in.data(), in.size(), out.data(), &len, EVP_sha1(), nullptr) != 1 || len != 20)
    throw std::runtime_error("SHA-1 failure");
  return out;
}

Bytes expand_digest(const Bytes& in, std::size_t nbits) {
  const std::size_t nbytes = (nbits + 7) / 8;
  Bytes out;
  out.reserve(nbytes);
  std::uint8_t counter = 0;
  while (out.size() < nbytes) {
    Bytes block = in;
    block.push_back(counter++);
    append(out, sha1(block));
  }
  out.resize(nbytes);
  if (nbits % 8 != 0) {
    const unsigned keep = nbits % 8;
    out.back() &= static_cast<std::uint8_t>(0xffu << (8 - keep));
  }
  return out;
}

Bytes h1(const Bytes& in, std::size_t n1_bits) { return expand_digest(in, n1_bits); }

Bytes h2(const Bytes& in, std::size_t n2) { return expand_digest(in, 2 * n2); }

static BigInt bigint_from_bytes(const std::uint8_t* p, std::size_t len) {
  BigInt v = 0;
  for (std::size_t i = 0; i < len; ++i) {
    v <<= 8;
    v |= p[i];
  }
  return v;
}

BigInt scalar_from_bytes(const std::uint8_t* p, std::size_t len) {
  return bigint_from_bytes(p, len);
}

static void bigint_to_bytes(const BigInt& v, std::uint8_t* out, std::size_t len) {
  BigInt t = v;
  for (std::size_t i = 0; i < len; ++i) {
    out[len - 1 - i] = static_cast<std::uint8_t>(t & 0xff);
    t >>= 8;
  }
}

Bytes serialize_scalar(const BigInt& s) {
  if (s < 0 || s >= kTwo160) throw std::invalid_argument("scalar out of 20-byte range");
  Bytes out(20);
  bigint_to_bytes(s, out.data(), 20);
  return out;
}

Bytes point_xy(const Point& p) {
  if (p.infinity) throw std::invalid_argument("cannot encode point at infinity as coordinates");
  Bytes out(40);
  bigint_to_bytes(p.x, out.data(), 20);
  bigint_to_bytes(p.y, out.data() + 20, 20);
  return out;
}

Bytes serialize_point(const Point& p) {
  if (p.infinity) return Bytes{0x00};
  Bytes out;
  out.reserve(41);
  out.push_back(0x04);
  append(out, point_xy(p));
  return out;
}

Point deserialize_point(const Bytes& in) {
  if (in.size() == 1 && in[0] == 0x00) return Point::at_infinity();
  if (in.size() != 41 || in[0] != 0x04) throw std::invalid_argument("bad point encoding");
  Point p;
  p.infinity = false;
  p.x = bigint_from_bytes(in.data() + 1, 20);
  p.y = bigint_from_bytes(in.data() + 21, 20);
  if (!secp160k1().is_on_curve(p)) throw std::invalid_argument("point not on curve");
  return p;
}

Bytes serialize_signature(const Signature& sig) {
  Bytes out = serialize_scalar(sig.r);
  append(out, serialize_scalar(sig.s));
  return out;
}

Signature deserialize_signature(const std::uint8_t* p) {
  return Signature{bigint_from_bytes(p, 20), bigint_from_bytes(p + 20, 20)};
}

// Digest -> integer mod nothing; q > 2^160 so a 20-byte digest is already
// in range.
static BigInt msg_scalar(const Bytes& msg) {
  const Bytes d = sha1(msg);
  return bigint_from_bytes(d.data(), 20);
}

Signature sign(const BigInt& sk, const Bytes& msg) {
  const auto& c = secp160k1();
  if (sk <= 0 || sk >= c.q) throw std::invalid_argument("secret key out of range");
  const BigInt e = msg_scalar(msg);
  // Deterministic nonce: sha1(sk || digest || counter). Retry until both the
  // nonce and s land in [1, 2^160 - 1]; r < p < 2^160 always.
  Bytes base = serialize_scalar(sk);
  append(base, sha1(msg));
  for (std::uint8_t counter = 0;; ++counter) {
    Bytes kin = base;
    kin.push_back(counter);
    const BigInt k = bigint_from_bytes(sha1(kin).data(), 20);
    if (k == 0) continue;
    const Point kg = scalar_mul(k, c.generator);
    const BigInt r = mod(kg.x, c.q);
    if (r == 0) continue;
    const BigInt s = mod(inv_mod(k, c.q) * (e + r * sk), c.q);
    if (s == 0 || s >= kTwo160) continue;
    return Signature{r, s};
  }
}

bool verify(const Point& pk, const Bytes& msg, const Signature& sig) {
  const auto& c = secp160k1();
  if (pk.infinity || !c.is_on_curve(pk)) return false;
  if (sig.r <= 0 || sig.r >= c.q || sig.s <= 0 || sig.s >= c.q) return false;
  const BigInt e = msg_scalar(msg);
  const BigInt w = inv_mod(sig.s, c.q);
  const BigInt u1 = mod(e * w, c.q);
  const BigInt u2 = mod(sig.r * w, c.q);
  const Point x = point_add(scalar_mul(u1, c.generator), scalar_mul(u2, pk));
  if (x.infinity) return false;
  return mod(x.x, c.q) == sig.r;
}

Point ecdh(const BigInt& sk_own, const Point& pk_peer) {
  if (pk_peer.infinity) throw std::invalid_argument("peer key is the point at infinity");
  if (!secp160k1().is_on_curve(pk_peer)) throw std::invalid_argument("peer key not on curve");
  return scalar_mul(sk_own, pk_peer);
}

double gray_map(unsigned two_bits) {
  switch (two_bits & 0x3u) {
    case 0b00: return 0.0;
    case 0b01: return M_PI / 2;
    case 0b11: return M_PI;
    default: return 3 * M_PI / 2;  // 0b10
  }
}

std::vector<double> gray_map_vector(const Bytes& bits, std::size_t nbits) {
  if (nbits % 2 != 0) throw std::invalid_argument("gray_map_vector: odd bit length");
  if (nbits > bits.size() * 8) throw std::invalid_argument("gray_map_vector: input too short");
  std::vector<double> out;
  out.reserve(nbits / 2);
  for (std::size_t i = 0; i + 1 < nbits; i += 2) {
    const unsigned b0 = (bits[i / 8] >> (7 - (i % 8))) & 1u;
    const std::size_t j = i + 1;
    const unsigned b1 = (bits[j / 8] >> (7 - (j % 8))) & 1u;
    out.push_back(gray_map((b0 << 1) | b1));
  }
  return out;
}

}  // namespace clauth::ecc
