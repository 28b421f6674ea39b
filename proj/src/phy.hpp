// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef CLAUTH_PHY_HPP
#define CLAUTH_PHY_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "channel.hpp"
#include "ecc.hpp"
#include "protocol.hpp"

namespace clauth::phy {

using chan::Complex;
using chan::Cvec;

enum class Hypothesis { H0, H1 };

// Unit-modulus phase vectors stored as angles (radians).
struct PhasePair {
  std::vector<double> phi_a;
  std::vector<double> phi_b;
};

// Keyed phase shifts: phi_a from the shared key's x coordinate, phi_b from
// the y coordinate, each via H2 and the Gray mapper.
PhasePair prepare_phase_shifts(const ecc::Point& shared_key, proto::Timestamp t3,
                               const ecc::Point& a1, const Bytes& pid, const Bytes& m,
                               std::size_t n2);

// Two OFDM payload symbols S1 = Phi_a . X, S2 = Phi_b . X sharing one fresh
// uniform mask X.
struct PhySignature {
  Cvec s1;
  Cvec s2;
};
PhySignature generate_phy_signature(const PhasePair& phases, Rng& rng);

// C_i = r1_i conj(Phi'_a,i) conj(r2_i conj(Phi'_b,i)).
Cvec equalize_and_combine(std::span<const Complex> r1_data, std::span<const Complex> r2_data,
                          const std::vector<double>& phi_a_prime,
                          const std::vector<double>& phi_b_prime);

// v = 1 - ||mean of unit vectors||; throws on empty input.
double circular_variance(std::span<const double> angles);

// H0 accepted when v < tau1; equality rejects.
Hypothesis siam_decide(double v, double tau1);

// Least-squares per-pilot estimate (known unit pilots).
Cvec estimate_pilot_channel(const chan::ReceivedSymbol& symbol);

// Normalised likelihood ratio between consecutive channel estimates.
// Throws on zero reference energy.
double ftm_lrt(const Cvec& h_prev, const Cvec& h_curr, double n_tau2);

// Sums consecutive LRTs across the frame; H1 when the statistic reaches
// tau3 (equality rejects). Throws when fewer than two observations.
std::pair<double, Hypothesis> ftm_sprt(const std::vector<Cvec>& h_seq, double n_tau2,
                                       double n_tau3, double tau3);

struct DecisionThresholds {
  double tau1 = 0.5;
  double tau2 = 0.25;
  double n_tau2 = 0.25;
  double tau3 = 0.08;
  double n_tau3 = 0.0;  // 0 -> 1/(M-1)

  double sprt_norm(std::size_t m) const {
    return n_tau3 > 0.0 ? n_tau3 : 1.0 / static_cast<double>(m - 1);
  }
};

struct HypothesisVerdict {
  Hypothesis siam = Hypothesis::H1;
  Hypothesis ftm = Hypothesis::H1;
  double v = 1.0;
  double lambda_sprt = 0.0;
  bool accepted = false;
};

// Two-factor verification of a received frame against a resolved session.
// Preconditions (pseudo-identity resolution, T3 freshness) are the caller's;
// this combines PHY-SIAM and PHY-FTM on the physical payload.
HypothesisVerdict verify_message(const proto::SessionEntry& session,
                                 const proto::ReauthHeader& header, const Bytes& payload,
                                 const std::vector<chan::ReceivedSymbol>& frame,
                                 const DecisionThresholds& thresholds, std::uint32_t n);

// Frame dump CSV: symbol_index, subcarrier, re, im, role.
std::string frame_to_csv(const std::vector<chan::ReceivedSymbol>& frame);

}  // namespace clauth::phy

#endif
