// SPDX-License-Identifier: Apache-2.0
//
// clauth command-line front end. Talks to the simulator exclusively through
// the public C API (clauth.h).
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <clauth.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

namespace {

struct ScenarioHandle {
  clauth_scenario* sc = clauth_scenario_create();
  ~ScenarioHandle() { clauth_scenario_destroy(sc); }
};

int write_artifact(const std::string& out_path, const char* text) {
  if (out_path.empty()) {
    std::fputs(text, stdout);
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return CLAUTH_ERR_IO;
  }
  out << text;
  return 0;
}

int report_failure(clauth_status status) {
  std::cerr << "error (" << clauth_status_name(status) << "): " << clauth_last_error() << "\n";
  return static_cast<int>(status);
}

struct Artifact {
  char* text = nullptr;
  ~Artifact() { clauth_string_free(text); }
};

int load_scenario(ScenarioHandle& scenario, const std::string& path) {
  if (path.empty()) return 0;
  const clauth_status st = clauth_scenario_load_file(scenario.sc, path.c_str());
  return st == CLAUTH_OK ? 0 : report_failure(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clauth: RIS-assisted cross-layer authentication simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_path;
  unsigned long long seed = 0;
  int jobs = 1;
  app.add_option("--scenario", scenario_path, "scenario file (key = value lines)")
      ->envname("CLAUTH_SCENARIO");
  app.add_option("--out", out_path, "write the artifact to this path (default stdout)")
      ->envname("CLAUTH_OUT");
  app.add_option("--seed", seed, "master seed for stochastic runs")->envname("CLAUTH_SEED");
  app.add_option("--jobs", jobs, "worker threads for Monte Carlo runs")->envname("CLAUTH_JOBS");

  // roc
  auto* roc = app.add_subcommand("roc", "theory + Monte Carlo ROC sweep");
  std::string snr_list, n_list = "64", ris_mode = "off";
  int trials = 10000, tau_points = 101;
  roc->add_option("--snr", snr_list, "comma-separated SNR list in dB, e.g. 0,-3,-6")->required();
  roc->add_option("--n", n_list, "comma-separated subcarrier counts");
  roc->add_option("--ris", ris_mode, "on | off | both");
  roc->add_option("--trials", trials, "Monte Carlo trials per curve");
  roc->add_option("--tau-points", tau_points, "threshold grid size");

  // protocol-trace
  auto* trace = app.add_subcommand("protocol-trace", "annotated handshake + message trace");
  int n_messages = 10;
  std::string attack = "none";
  trace->add_option("--messages", n_messages, "number of re-authentication messages");
  trace->add_option("--attack", attack, "none | replay | modify | impersonate");

  // theory
  auto* theory_cmd = app.add_subcommand("theory", "closed-form phase density and moments");
  double gamma = 1.0;
  unsigned n2 = 48;
  int grid_points = 256;
  std::string a1_list;
  theory_cmd->add_option("--gamma", gamma, "linear SNR (0 gives the uniform density)");
  theory_cmd->add_option("--n2", n2, "data subcarriers per symbol");
  theory_cmd->add_option("--grid", grid_points, "theta grid size");
  theory_cmd->add_option("--a1", a1_list, "comma-separated false-alarm targets for tau1");

  // cost
  auto* cost_cmd = app.add_subcommand("cost", "computation/communication comparison");
  unsigned long long cost_n = 1000, cost_q = 100;
  bool cost_csv = false;
  cost_cmd->add_option("--n", cost_n, "number of messages");
  cost_cmd->add_option("--q", cost_q, "messages per pseudo-identity epoch");
  cost_cmd->add_flag("--csv", cost_csv, "emit CSV instead of the aligned table");

  // ban-verify
  auto* ban = app.add_subcommand("ban-verify", "derive the belief-logic goals");
  std::string ban_file;
  bool ban_builtin = false;
  ban->add_option("file", ban_file, "model file (principals/axioms/messages/goals)");
  ban->add_flag("--builtin", ban_builtin, "verify the built-in handshake model");

  CLI11_PARSE(app, argc, argv);

  ScenarioHandle scenario;
  if (int rc = load_scenario(scenario, scenario_path)) return rc;

  if (roc->parsed()) {
    if (!app.count("--seed")) {
      std::cerr << "error: --seed is required for stochastic runs\n";
      return CLAUTH_ERR_PRECONDITION;
    }
    Artifact art;
    const clauth_status st =
        clauth_run_roc(scenario.sc, snr_list.c_str(), n_list.c_str(), ris_mode.c_str(), trials,
                       tau_points, seed, jobs, &art.text);
    if (st != CLAUTH_OK) return report_failure(st);
    return write_artifact(out_path, art.text);
  }

  if (trace->parsed()) {
    if (!app.count("--seed")) {
      std::cerr << "error: --seed is required for stochastic runs\n";
      return CLAUTH_ERR_PRECONDITION;
    }
    Artifact art;
    const clauth_status st =
        clauth_run_protocol_trace(scenario.sc, n_messages, attack.c_str(), seed, &art.text);
    if (st != CLAUTH_OK) return report_failure(st);
    return write_artifact(out_path, art.text);
  }

  if (theory_cmd->parsed()) {
    Artifact art;
    const clauth_status st =
        clauth_run_theory(gamma, n2, grid_points, a1_list.c_str(), &art.text);
    if (st != CLAUTH_OK) return report_failure(st);
    return write_artifact(out_path, art.text);
  }

  if (cost_cmd->parsed()) {
    Artifact art;
    const clauth_status st = clauth_run_cost(cost_n, cost_q, cost_csv ? 1 : 0, &art.text);
    if (st != CLAUTH_OK) return report_failure(st);
    return write_artifact(out_path, art.text);
  }

  if (ban->parsed()) {
    Artifact art;
    clauth_status st;
    if (ban_builtin || ban_file.empty())
      st = clauth_ban_verify_text(clauth_ban_builtin_model(), &art.text);
    else
      st = clauth_ban_verify_file(ban_file.c_str(), &art.text);
    if (art.text) std::fputs(art.text, stdout);
    if (st != CLAUTH_OK) {
      std::cerr << "error (" << clauth_status_name(st) << "): " << clauth_last_error() << "\n";
      return static_cast<int>(st);
    }
    if (!out_path.empty()) return write_artifact(out_path, art.text);
    return 0;
  }

  return 0;
}
