// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace clauth::chan {

double ScenarioConfig::temporal_rho() const {
  if (rho_explicit) return rho;
  if (t_c <= 0.0) return 0.0;
  return std::exp(-delta_t / t_c);
}

double ScenarioConfig::gamma_linear() const {
  return std::pow(10.0, (snr_db + rx_calibration_db) / 10.0);
}

void ScenarioConfig::validate() const {
  if (n == 0 || n % 4 != 0) throw std::invalid_argument("n must be a positive multiple of 4");
  if (m < 2) throw std::invalid_argument("m must be at least 2 (the signature pair)");
  if (l == 0) throw std::invalid_argument("l must be positive");
  if (rho_explicit && (rho < 0.0 || rho > 1.0))
    throw std::invalid_argument("rho must lie in [0, 1]");
  if (delta_t < 0.0 || t_c < 0.0) throw std::invalid_argument("durations must be non-negative");
}

static Fading fading_from_string(const std::string& s) {
  if (s == "unit") return Fading::Unit;
  if (s == "rayleigh") return Fading::Rayleigh;
  if (s == "block") return Fading::Block;
  throw std::invalid_argument("unknown fading profile '" + s + "'");
}

static const char* fading_name(Fading f) {
  switch (f) {
    case Fading::Unit: return "unit";
    case Fading::Rayleigh: return "rayleigh";
    case Fading::Block: return "block";
  }
  return "?";
}

void scenario_set(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  auto as_bool = [&](const std::string& v) {
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("expected a boolean, got '" + v + "'");
  };
  try {
    if (key == "n") cfg.n = static_cast<std::uint32_t>(std::stoul(value));
    else if (key == "m") cfg.m = static_cast<std::uint32_t>(std::stoul(value));
    else if (key == "l") cfg.l = static_cast<std::uint32_t>(std::stoul(value));
    else if (key == "snr_db") cfg.snr_db = std::stod(value);
    else if (key == "rx_calibration_db") cfg.rx_calibration_db = std::stod(value);
    else if (key == "delta_t") cfg.delta_t = std::stod(value);
    else if (key == "t_c") cfg.t_c = std::stod(value);
    else if (key == "rho") { cfg.rho = std::stod(value); cfg.rho_explicit = true; }
    else if (key == "ris_enabled") cfg.ris_enabled = as_bool(value);
    else if (key == "ris_gain_db") cfg.ris_gain_db = std::stod(value);
    else if (key == "fading") cfg.fading = fading_from_string(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else throw std::invalid_argument("unknown scenario key '" + key + "'");
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value '" + value + "' for key '" + key + "'");
  }
}

ScenarioConfig parse_scenario_text(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                  ": expected key = value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
    value.erase(value.begin(), std::find_if(value.begin(), value.end(), notspace));
    try {
      scenario_set(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

std::string scenario_to_text(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "n = " << cfg.n << "\n";
  out << "m = " << cfg.m << "\n";
  out << "l = " << cfg.l << "\n";
  out << "snr_db = " << cfg.snr_db << "\n";
  out << "rx_calibration_db = " << cfg.rx_calibration_db << "\n";
  if (cfg.rho_explicit)
    out << "rho = " << cfg.rho << "\n";
  else
    out << "delta_t = " << cfg.delta_t << "\nt_c = " << cfg.t_c << "\n";
  out << "ris_enabled = " << (cfg.ris_enabled ? "on" : "off") << "\n";
  out << "ris_gain_db = " << cfg.ris_gain_db << "\n";
  out << "fading = " << fading_name(cfg.fading) << "\n";
  out << "seed = " << cfg.seed << "\n";
  return out.str();
}

bool is_pilot_bin(std::uint32_t bin) { return bin % 4 == 0; }

std::vector<std::uint32_t> pilot_bins(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  out.reserve(n / 4);
  for (std::uint32_t i = 0; i < n; i += 4) out.push_back(i);
  return out;
}

std::vector<std::uint32_t> data_bins(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  out.reserve(3 * n / 4);
  for (std::uint32_t i = 0; i < n; ++i)
    if (!is_pilot_bin(i)) out.push_back(i);
  return out;
}

ChannelRealization sample_direct_channel(const ScenarioConfig& cfg, Rng& rng) {
  ChannelRealization h;
  h.gains.resize(cfg.n);
  for (auto& g : h.gains) g = rng.cnormal(1.0);
  return h;
}

ChannelRealization sample_fading(const ScenarioConfig& cfg, Rng& rng) {
  switch (cfg.fading) {
    case Fading::Rayleigh:
      return sample_direct_channel(cfg, rng);
    case Fading::Block: {
      ChannelRealization h;
      h.gains.assign(cfg.n, rng.cnormal(1.0));
      return h;
    }
    case Fading::Unit:
    default: {
      ChannelRealization h;
      h.gains.resize(cfg.n);
      for (auto& g : h.gains) {
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        g = Complex(std::cos(phi), std::sin(phi));
      }
      return h;
    }
  }
}

ChannelRealization evolve_channel(const ChannelRealization& h, double rho, Rng& rng) {
  if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("rho must lie in [0, 1]");
  ChannelRealization out;
  out.gains.resize(h.gains.size());
  const double innov = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  for (std::size_t i = 0; i < h.gains.size(); ++i)
    out.gains[i] = rho * h.gains[i] + innov * rng.cnormal(1.0);
  return out;
}

Complex effective_ris_channel(const Cvec& h_vi, const Cvec& h_ir, const RisConfig& cfg) {
  if (h_vi.size() != h_ir.size() || h_vi.size() != cfg.omega.size())
    throw std::invalid_argument("RIS cascade length mismatch");
  Complex sum = 0.0;
  for (std::size_t l = 0; l < h_vi.size(); ++l) {
    // theta_l = pi, omega_l in {0,1}: e^{j omega theta} = +/-1
    const double sgn = cfg.omega[l] ? -1.0 : 1.0;
    sum += h_vi[l] * h_ir[l] * sgn;
  }
  return sum;
}

std::vector<RisConfig> hadamard_codebook(std::uint32_t l) {
  if (l == 0 || (l & (l - 1)) != 0) throw std::invalid_argument("L must be a power of two");
  std::vector<RisConfig> book(l);
  for (std::uint32_t row = 0; row < l; ++row) {
    auto& omega = book[row].omega;
    omega.resize(l);
    for (std::uint32_t col = 0; col < l; ++col) {
      // Sylvester construction: sign = (-1)^popcount(row & col)
      omega[col] = static_cast<std::uint8_t>(__builtin_popcount(row & col) & 1);
    }
  }
  return book;
}

RisConfig optimize_ris_config(const Cvec& h_vi, const Cvec& h_ir,
                              const std::vector<RisConfig>& codebook) {
  if (codebook.empty()) throw std::invalid_argument("empty RIS codebook");
  std::size_t best = 0;
  double best_power = -1.0;
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    const double p = std::norm(effective_ris_channel(h_vi, h_ir, codebook[i]));
    if (p > best_power) {
      best_power = p;
      best = i;
    }
  }
  return codebook[best];
}

RisState setup_ris(const ScenarioConfig& cfg, Rng& rng) {
  RisState state;
  state.h_vi.resize(cfg.l);
  state.h_ir.resize(cfg.l);
  for (auto& g : state.h_vi) g = rng.cnormal(1.0);
  for (auto& g : state.h_ir) g = rng.cnormal(1.0);
  const auto codebook = hadamard_codebook(cfg.l);
  state.config = optimize_ris_config(state.h_vi, state.h_ir, codebook);
  state.raw_gain = effective_ris_channel(state.h_vi, state.h_ir, state.config);
  // Geometry abstraction: scale the optimized cascade so the ON/OFF power
  // delta equals ris_gain_db exactly.
  const double target_amp = std::pow(10.0, cfg.ris_gain_db / 20.0);
  state.channel_factor = state.raw_gain * (target_amp / std::abs(state.raw_gain));
  return state;
}

namespace {

Cvec make_symbol_bins(const Cvec& data, std::uint32_t n) {
  // pilots carry the known reference value 1+0j
  Cvec bins(n, Complex(1.0, 0.0));
  std::size_t d = 0;
  for (std::uint32_t i = 0; i < n; ++i)
    if (!is_pilot_bin(i)) bins[i] = data[d++];
  return bins;
}

ReceivedSymbol apply_channel(const Cvec& tx_bins, const ChannelRealization& h, Complex ris_factor,
                             double noise_var_data, double noise_var_pilot, Rng& rng) {
  ReceivedSymbol out;
  out.bins.resize(tx_bins.size());
  for (std::size_t i = 0; i < tx_bins.size(); ++i) {
    const Complex gain = h.gains[i] * ris_factor;
    const double nv = is_pilot_bin(static_cast<std::uint32_t>(i)) ? noise_var_pilot : noise_var_data;
    const Complex noise = nv > 0.0 ? rng.cnormal(nv) : Complex(0.0, 0.0);
    out.bins[i] = gain * tx_bins[i] + noise;
  }
  return out;
}

}  // namespace

std::pair<ReceivedSymbol, ReceivedSymbol> transmit(const Cvec& s1_data, const Cvec& s2_data,
                                                   const ScenarioConfig& cfg,
                                                   const RisState* ris, Rng& rng) {
  if (s1_data.size() != cfg.n2() || s2_data.size() != cfg.n2())
    throw std::invalid_argument("signature length must equal N2");
  const double gamma = cfg.gamma_linear();
  const double sigma2 = gamma > 0.0 ? 1.0 / gamma : 0.0;
  const Complex ris_factor = (cfg.ris_enabled && ris) ? ris->channel_factor : Complex(1.0, 0.0);
  const double rho = cfg.temporal_rho();

  ChannelRealization h = sample_fading(cfg, rng);
  const Cvec tx1 = make_symbol_bins(s1_data, cfg.n);
  const Cvec tx2 = make_symbol_bins(s2_data, cfg.n);
  // The pair's data-bin noise budget rides on the leading symbol; the
  // trailing symbol is the clean within-coherence reference. Pilots of both
  // symbols see ordinary AWGN.
  ReceivedSymbol r1 = apply_channel(tx1, h, ris_factor, sigma2, sigma2, rng);
  ChannelRealization h2 = evolve_channel(h, rho, rng);
  ReceivedSymbol r2 = apply_channel(tx2, h2, ris_factor, 0.0, sigma2, rng);
  return {std::move(r1), std::move(r2)};
}

std::vector<ReceivedSymbol> transmit_frame(const Cvec& s1_data, const Cvec& s2_data,
                                           const ScenarioConfig& cfg, const RisState* ris,
                                           Rng& rng, int inject_attacker_at) {
  if (s1_data.size() != cfg.n2() || s2_data.size() != cfg.n2())
    throw std::invalid_argument("signature length must equal N2");
  const double gamma = cfg.gamma_linear();
  const double sigma2 = gamma > 0.0 ? 1.0 / gamma : 0.0;
  const Complex ris_factor = (cfg.ris_enabled && ris) ? ris->channel_factor : Complex(1.0, 0.0);
  const double rho = cfg.temporal_rho();

  std::vector<ReceivedSymbol> frame;
  frame.reserve(cfg.m);
  ChannelRealization h = sample_fading(cfg, rng);
  ChannelRealization attacker_h;

  for (std::uint32_t j = 0; j < cfg.m; ++j) {
    Cvec data(cfg.n2());
    if (j == 0) {
      data = s1_data;
    } else if (j == 1) {
      data = s2_data;
    } else {
      for (auto& d : data) {
        const double phi = (M_PI / 2) * rng.uniform_u32(4) + M_PI / 4;  // payload QPSK
        d = Complex(std::cos(phi), std::sin(phi));
      }
    }
    const Cvec tx = make_symbol_bins(data, cfg.n);
    const bool attacked = inject_attacker_at >= 0 && j == static_cast<std::uint32_t>(inject_attacker_at);
    const ChannelRealization* use = &h;
    if (attacked) {
      attacker_h = sample_fading(cfg, rng);  // decorrelated transmitter
      use = &attacker_h;
    }
    const double data_noise = (j == 1) ? 0.0 : sigma2;
    frame.push_back(apply_channel(tx, *use, ris_factor, data_noise, sigma2, rng));
    if (j + 1 < cfg.m) h = evolve_channel(h, rho, rng);
  }
  return frame;
}

}  // namespace clauth::chan
