// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef CLAUTH_EXPERIMENT_HPP
#define CLAUTH_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "channel.hpp"

namespace clauth::xp {

struct RocRequest {
  chan::ScenarioConfig base;
  std::vector<double> snr_db;     // one curve block per (snr, n, ris) combination
  std::vector<std::uint32_t> n_list;
  std::vector<bool> ris_modes;
  int trials = 10000;
  int tau_points = 101;
  std::uint64_t seed = 1;
  int jobs = 1;
};

// CSV with a leading `# key=value` metadata block; theory and Monte-Carlo
// columns per tau. Deterministic under fixed seed. Throws
// std::invalid_argument on empty sweeps or bad preconditions.
std::string run_roc(const RocRequest& request);

struct TraceRequest {
  chan::ScenarioConfig scenario;
  int n_messages = 10;
  std::string attack = "none";  // none | replay | modify | impersonate
  std::uint64_t seed = 1;
  double a1_target = 0.001;     // SIAM false-alarm target for tau1
};

// Annotated hex trace of the handshake plus n re-authentication messages,
// with verdicts; attack flags inject the corresponding active attack.
std::string run_protocol_trace(const TraceRequest& request);

// Phase-density table and hypothesis moments for a linear gamma.
std::string run_theory(double gamma, std::uint32_t n2, int grid_points,
                       const std::vector<double>& a1_list);

struct BanRunResult {
  bool success = false;
  std::string report;
};
BanRunResult run_ban(const std::string& model_text);

// The handshake scenario of the formal analysis (A1-A8, M1-M3, goals 1-5).
const char* builtin_ban_model();

}  // namespace clauth::xp

#endif
