// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "phy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace clauth::phy {

static Bytes coordinate_bytes(const ecc::BigInt& coord) {
  return ecc::serialize_scalar(coord);
}

PhasePair prepare_phase_shifts(const ecc::Point& shared_key, proto::Timestamp t3,
                               const ecc::Point& a1, const Bytes& pid, const Bytes& m,
                               std::size_t n2) {
  if (shared_key.infinity) throw std::invalid_argument("shared key must be a finite point");
  // {SK}_x || T3 || A1 || PID || m  and the same with {SK}_y
  Bytes tail;
  put_u32be(tail, t3);
  append(tail, ecc::point_xy(a1));
  append(tail, pid);
  append(tail, m);

  Bytes in_a = coordinate_bytes(shared_key.x);
  append(in_a, tail);
  Bytes in_b = coordinate_bytes(shared_key.y);
  append(in_b, tail);

  PhasePair out;
  out.phi_a = ecc::gray_map_vector(ecc::h2(in_a, n2), 2 * n2);
  out.phi_b = ecc::gray_map_vector(ecc::h2(in_b, n2), 2 * n2);
  return out;
}

PhySignature generate_phy_signature(const PhasePair& phases, Rng& rng) {
  if (phases.phi_a.size() != phases.phi_b.size())
    throw std::invalid_argument("phase vectors must have equal length");
  PhySignature sig;
  const std::size_t n2 = phases.phi_a.size();
  sig.s1.resize(n2);
  sig.s2.resize(n2);
  for (std::size_t i = 0; i < n2; ++i) {
    const double psi = rng.uniform(0.0, 2.0 * M_PI);  // mask, fresh per signature
    sig.s1[i] = std::polar(1.0, phases.phi_a[i] + psi);
    sig.s2[i] = std::polar(1.0, phases.phi_b[i] + psi);
  }
  return sig;
}

Cvec equalize_and_combine(std::span<const Complex> r1_data, std::span<const Complex> r2_data,
                          const std::vector<double>& phi_a_prime,
                          const std::vector<double>& phi_b_prime) {
  const std::size_t n2 = r1_data.size();
  if (r2_data.size() != n2 || phi_a_prime.size() != n2 || phi_b_prime.size() != n2)
    throw std::invalid_argument("equalize_and_combine: length mismatch");
  Cvec c(n2);
  for (std::size_t i = 0; i < n2; ++i) {
    const Complex r1p = r1_data[i] * std::polar(1.0, -phi_a_prime[i]);
    const Complex r2p = r2_data[i] * std::polar(1.0, -phi_b_prime[i]);
    c[i] = r1p * std::conj(r2p);
  }
  return c;
}

double circular_variance(std::span<const double> angles) {
  if (angles.empty()) throw std::invalid_argument("circular_variance: empty input");
  double cx = 0.0, cy = 0.0;
  for (double a : angles) {
    cx += std::cos(a);
    cy += std::sin(a);
  }
  cx /= static_cast<double>(angles.size());
  cy /= static_cast<double>(angles.size());
  return 1.0 - std::hypot(cx, cy);
}

Hypothesis siam_decide(double v, double tau1) {
  return v < tau1 ? Hypothesis::H0 : Hypothesis::H1;
}

Cvec estimate_pilot_channel(const chan::ReceivedSymbol& symbol) {
  // pilots transmit 1+0j, so the LS estimate is the received value itself
  Cvec out;
  out.reserve(symbol.bins.size() / 4 + 1);
  for (std::size_t i = 0; i < symbol.bins.size(); ++i)
    if (chan::is_pilot_bin(static_cast<std::uint32_t>(i))) out.push_back(symbol.bins[i]);
  return out;
}

double ftm_lrt(const Cvec& h_prev, const Cvec& h_curr, double n_tau2) {
  if (h_prev.size() != h_curr.size()) throw std::invalid_argument("ftm_lrt: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < h_prev.size(); ++i) {
    num += std::norm(h_curr[i] - h_prev[i]);
    den += std::norm(h_prev[i]);
  }
  if (den == 0.0) throw std::invalid_argument("ftm_lrt: degenerate (zero-energy) channel");
  return n_tau2 * num / den;
}

std::pair<double, Hypothesis> ftm_sprt(const std::vector<Cvec>& h_seq, double n_tau2,
                                       double n_tau3, double tau3) {
  if (h_seq.size() < 2) throw std::invalid_argument("ftm_sprt: need at least two observations");
  double sum = 0.0;
  for (std::size_t j = 1; j < h_seq.size(); ++j) sum += ftm_lrt(h_seq[j - 1], h_seq[j], n_tau2);
  const double lambda = n_tau3 * sum;
  // equality rejects (conservative)
  return {lambda, lambda >= tau3 ? Hypothesis::H1 : Hypothesis::H0};
}

HypothesisVerdict verify_message(const proto::SessionEntry& session,
                                 const proto::ReauthHeader& header, const Bytes& payload,
                                 const std::vector<chan::ReceivedSymbol>& frame,
                                 const DecisionThresholds& thresholds, std::uint32_t n) {
  if (frame.size() < 2) throw std::invalid_argument("verify_message: frame too short");
  const std::size_t n2 = 3 * n / 4;
  const PhasePair expected = prepare_phase_shifts(session.shared_key, header.t3, header.a1,
                                                  header.pid, payload, n2);

  const auto idx = chan::data_bins(n);
  Cvec r1(n2), r2(n2);
  for (std::size_t i = 0; i < n2; ++i) {
    r1[i] = frame[0].bins[idx[i]];
    r2[i] = frame[1].bins[idx[i]];
  }
  const Cvec c = equalize_and_combine(r1, r2, expected.phi_a, expected.phi_b);
  std::vector<double> angles(n2);
  for (std::size_t i = 0; i < n2; ++i) angles[i] = std::arg(c[i]);

  HypothesisVerdict verdict;
  verdict.v = circular_variance(angles);
  verdict.siam = siam_decide(verdict.v, thresholds.tau1);

  std::vector<Cvec> pilots;
  pilots.reserve(frame.size());
  for (const auto& sym : frame) pilots.push_back(estimate_pilot_channel(sym));
  const double n_tau3 = thresholds.sprt_norm(frame.size());
  auto [lambda, ftm] = ftm_sprt(pilots, thresholds.n_tau2, n_tau3, thresholds.tau3);
  verdict.lambda_sprt = lambda;
  verdict.ftm = ftm;

  verdict.accepted = verdict.siam == Hypothesis::H0 && verdict.ftm == Hypothesis::H0;
  return verdict;
}

std::string frame_to_csv(const std::vector<chan::ReceivedSymbol>& frame) {
  std::ostringstream out;
  out << "symbol_index,subcarrier,re,im,role\n";
  char buf[96];
  for (std::size_t j = 0; j < frame.size(); ++j) {
    for (std::size_t i = 0; i < frame[j].bins.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.9g,%.9g,%s\n", j, i, frame[j].bins[i].real(),
                    frame[j].bins[i].imag(),
                    chan::is_pilot_bin(static_cast<std::uint32_t>(i)) ? "pilot" : "data");
      out << buf;
    }
  }
  return out.str();
}

}  // namespace clauth::phy
