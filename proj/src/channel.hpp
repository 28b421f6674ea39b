// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef CLAUTH_CHANNEL_HPP
#define CLAUTH_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rng.hpp"

namespace clauth::chan {

using Complex = std::complex<double>;
using Cvec = std::vector<Complex>;

enum class Fading {
  Unit,      // |h_i| = 1, i.i.d. uniform phases (static desk channel)
  Rayleigh,  // i.i.d. CN(0,1) per subcarrier
  Block,     // one CN(0,1) draw shared by all subcarriers of a frame
};

struct ScenarioConfig {
  std::uint32_t n = 64;        // subcarriers
  std::uint32_t m = 8;         // OFDM symbols per frame
  std::uint32_t l = 4096;      // RIS elements
  double snr_db = 10.0;        // nominal per-bin SNR (Gamma in dB)
  double rx_calibration_db = 0.0;  // receiver-chain calibration vs the hardware reference
  double delta_t = 1e-3;       // s, spacing of the signature pair
  double t_c = 1e-1;           // s, coherence time
  bool rho_explicit = false;
  double rho = 0.0;            // used when rho_explicit; else exp(-delta_t/t_c)
  bool ris_enabled = false;
  double ris_gain_db = 2.0;    // calibrated ON/OFF SNR delta
  Fading fading = Fading::Unit;
  std::uint64_t seed = 1;

  std::uint32_t n2() const { return 3 * n / 4; }
  double temporal_rho() const;
  double gamma_linear() const;  // 10^((snr_db + rx_calibration_db)/10)
  void validate() const;        // throws std::invalid_argument
};

// Scenario files: line-oriented `key = value`, '#' comments.
// Throws std::invalid_argument with the offending line number.
ScenarioConfig parse_scenario_text(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);
std::string scenario_to_text(const ScenarioConfig& cfg);
// Applies a single `key = value` override.
void scenario_set(ScenarioConfig& cfg, const std::string& key, const std::string& value);

// --- frame layout ------------------------------------------------------------
// Pilots occupy every 4th subcarrier (0, 4, 8, ...): N/4 pilots, N2 = 3N/4
// data bins.
bool is_pilot_bin(std::uint32_t bin);
std::vector<std::uint32_t> pilot_bins(std::uint32_t n);
std::vector<std::uint32_t> data_bins(std::uint32_t n);

// One received OFDM symbol in the frequency domain (length N).
struct ReceivedSymbol {
  Cvec bins;
};

// --- channel models ------------------------------------------------------------
struct ChannelRealization {
  Cvec gains;  // one complex gain per subcarrier
};

// i.i.d. circularly-symmetric complex Gaussian gains, unit average power.
ChannelRealization sample_direct_channel(const ScenarioConfig& cfg, Rng& rng);
// Per the configured fading profile.
ChannelRealization sample_fading(const ScenarioConfig& cfg, Rng& rng);
// First-order Gauss-Markov step h' = rho h + sqrt(1-rho^2) innovation.
ChannelRealization evolve_channel(const ChannelRealization& h, double rho, Rng& rng);

// --- RIS -----------------------------------------------------------------------
struct RisConfig {
  std::vector<std::uint8_t> omega;  // L binary states; theta_l = pi fixed
};

// Cascade inner product sum_l h_vi[l] h_ir[l] e^{j omega_l pi}.
Complex effective_ris_channel(const Cvec& h_vi, const Cvec& h_ir, const RisConfig& cfg);
// Rows of the order-L Sylvester-Hadamard matrix, mapped {+1 -> 0, -1 -> 1}.
// Throws unless L is a power of two.
std::vector<RisConfig> hadamard_codebook(std::uint32_t l);
// argmax over the codebook of |effective_ris_channel|^2; first index wins
// ties.
RisConfig optimize_ris_config(const Cvec& h_vi, const Cvec& h_ir,
                              const std::vector<RisConfig>& codebook);

// Per-scenario RIS state: cascades sampled once, configuration optimized over
// the Hadamard codebook, then normalized so the ON/OFF power delta equals
// ris_gain_db exactly (the single path-gain abstraction of the measured
// geometry).
struct RisState {
  Cvec h_vi;
  Cvec h_ir;
  RisConfig config;
  Complex raw_gain;         // un-normalized optimized cascade gain
  Complex channel_factor;   // applied to the direct channel when RIS is on
};
RisState setup_ris(const ScenarioConfig& cfg, Rng& rng);

// --- transmission -----------------------------------------------------------------
// Applies the channel to the two signature symbols. The
// signature pair's data-bin noise budget rides on the leading symbol so the
// combined verification statistic operates exactly at gamma_linear(); pilot
// bins of both symbols carry ordinary AWGN.
struct FrameChannelState {
  ChannelRealization h;       // channel at the current symbol
  Complex ris_factor = 1.0;   // 1 when RIS off
};

std::pair<ReceivedSymbol, ReceivedSymbol> transmit(const Cvec& s1_data, const Cvec& s2_data,
                                                   const ScenarioConfig& cfg,
                                                   const RisState* ris, Rng& rng);

// Full M-symbol frame: symbols 0..1 carry the PHY signature, the rest carry
// payload QPSK. Returns per-symbol received bins incl. pilots.
std::vector<ReceivedSymbol> transmit_frame(const Cvec& s1_data, const Cvec& s2_data,
                                           const ScenarioConfig& cfg, const RisState* ris,
                                           Rng& rng,
                                           int inject_attacker_at = -1);

}  // namespace clauth::chan

#endif
