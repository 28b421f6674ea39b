// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
// extern-C shim over the C++ core.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "clauth.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "cost.hpp"
#include "experiment.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

clauth_status fail(clauth_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::uint32_t> parse_u32_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<std::uint32_t>(v));
  return out;
}

}  // namespace

struct clauth_scenario {
  clauth::chan::ScenarioConfig cfg;
};

extern "C" {

const char* clauth_version(void) { return "1.0.0"; }

const char* clauth_status_name(clauth_status status) {
  switch (status) {
    case CLAUTH_OK: return "ok";
    case CLAUTH_ERR_PARSE: return "parse-error";
    case CLAUTH_ERR_PRECONDITION: return "precondition-error";
    case CLAUTH_ERR_NO_PROOF: return "no-proof";
    case CLAUTH_ERR_IO: return "io-error";
    case CLAUTH_ERR_INTERNAL: return "internal-error";
  }
  return "?";
}

const char* clauth_last_error(void) { return g_last_error.c_str(); }

void clauth_string_free(char* s) { std::free(s); }

clauth_scenario* clauth_scenario_create(void) { return new (std::nothrow) clauth_scenario(); }

void clauth_scenario_destroy(clauth_scenario* sc) { delete sc; }

clauth_status clauth_scenario_load_file(clauth_scenario* sc, const char* path) {
  if (!sc || !path) return fail(CLAUTH_ERR_PRECONDITION, "null argument");
  std::ifstream in(path);
  if (!in) return fail(CLAUTH_ERR_IO, std::string("cannot open '") + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    sc->cfg = clauth::chan::parse_scenario_text(ss.str());
  } catch (const std::exception& e) {
    return fail(CLAUTH_ERR_PARSE, e.what());
  }
  return CLAUTH_OK;
}

clauth_status clauth_scenario_set(clauth_scenario* sc, const char* key, const char* value) {
  if (!sc || !key || !value) return fail(CLAUTH_ERR_PRECONDITION, "null argument");
  try {
    clauth::chan::scenario_set(sc->cfg, key, value);
  } catch (const std::exception& e) {
    return fail(CLAUTH_ERR_PARSE, e.what());
  }
  return CLAUTH_OK;
}

clauth_status clauth_scenario_dump(const clauth_scenario* sc, char** out_text) {
  if (!sc || !out_text) return fail(CLAUTH_ERR_PRECONDITION, "null argument");
  *out_text = dup_string(clauth::chan::scenario_to_text(sc->cfg));
  return *out_text ? CLAUTH_OK : fail(CLAUTH_ERR_INTERNAL, "allocation failure");
}

clauth_status clauth_run_roc(const clauth_scenario* sc, const char* snr_list_db,
                             const char* n_list, const char* ris_mode, int trials,
                             int tau_points, unsigned long long seed, int jobs,
                             char** out_csv) {
  if (!sc || !snr_list_db || !n_list || !ris_mode || !out_csv)
    return fail(CLAUTH_ERR_PRECONDITION, "null argument");
  clauth::xp::RocRequest req;
  req.base = sc->cfg;
  req.trials = trials;
  req.tau_points = tau_points;
  req.seed = seed;
  req.jobs = jobs > 0 ? jobs : 1;
  try {
    req.snr_db = parse_double_list(snr_list_db);
    req.n_list = parse_u32_list(n_list);
  } catch (const std::exception& e) {
    return fail(CLAUTH_ERR_PARSE, e.what());
  }
  const std::string mode = ris_mode;
  if (mode == "on") req.ris_modes = {true};
  else if (mode == "off") req.ris_modes = {false};
  else if (mode == "both") req.ris_modes = {false, true};
  else return fail(CLAUTH_ERR_PARSE, "ris_mode must be on, off or both");
  try {
    *out_csv = dup_string(clauth::xp::run_roc(req));
  } catch (const std::invalid_argument& e) {
    return fail(CLAUTH_ERR_PRECONDITION, e.what());
  } catch (const std::exception& e) {
    return fail(CLAUTH_ERR_INTERNAL, e.what());
  }
  return *out_csv ? CLAUTH_OK : fail(CLAUTH_ERR_INTERNAL, "allocation failure");
}

clauth_status clauth_run_protocol_trace(const clauth_scenario* sc, int n_messages,
                                        const char* attack, unsigned long long seed,
                                        char** out_text) {
  if (!sc || !attack || !out_text) return fail(CLAUTH_ERR_PRECONDITION, "null argument");
  clauth::xp::TraceRequest req;
  req.scenario = sc->cfg;
  req.n_messages = n_messages;
  req.attack = attack;
  req.seed = seed;
  try {
    *out_text = dup_string(clauth::xp::run_protocol_trace(req));
  } catch (const std::invalid_argument& e) {
    return fail(CLAUTH_ERR_PRECONDITION, e.what());
  } catch (const std::exception& e) {
    return fail(CLAUTH_ERR_INTERNAL, e.what());
  }
  return *out_text ? CLAUTH_OK : fail(CLAUTH_ERR_INTERNAL, "allocation failure");
}

clauth_status clauth_run_theory(double gamma, unsigned n2, int grid_points,
                                const char* a1_list, char** out_csv) {
  if (!out_csv) return fail(CLAUTH_ERR_PRECONDITION, "null argument");
  std::vector<double> a1s;
  if (a1_list && a1_list[0] != '\0') {
    try {
      a1s = parse_double_list(a1_list);
    } catch (const std::exception& e) {
      return fail(CLAUTH_ERR_PARSE, e.what());
    }
  }
  try {
    *out_csv = dup_string(clauth::xp::run_theory(gamma, n2, grid_points, a1s));
  } catch (const std::invalid_argument& e) {
    return fail(CLAUTH_ERR_PRECONDITION, e.what());
  } catch (const std::exception& e) {
    return fail(CLAUTH_ERR_INTERNAL, e.what());
  }
  return *out_csv ? CLAUTH_OK : fail(CLAUTH_ERR_INTERNAL, "allocation failure");
}

clauth_status clauth_run_cost(unsigned long long n, unsigned long long q, int as_csv,
                              char** out_text) {
  if (!out_text) return fail(CLAUTH_ERR_PRECONDITION, "null argument");
  try {
    const auto report = clauth::cost::comparison_report(n, q);
    *out_text = dup_string(as_csv ? clauth::cost::report_to_csv(report)
                                  : clauth::cost::report_to_text(report));
  } catch (const std::invalid_argument& e) {
    return fail(CLAUTH_ERR_PRECONDITION, e.what());
  } catch (const std::exception& e) {
    return fail(CLAUTH_ERR_INTERNAL, e.what());
  }
  return *out_text ? CLAUTH_OK : fail(CLAUTH_ERR_INTERNAL, "allocation failure");
}

clauth_status clauth_ban_verify_text(const char* model_text, char** out_report) {
  if (!model_text || !out_report) return fail(CLAUTH_ERR_PRECONDITION, "null argument");
  clauth::xp::BanRunResult result;
  try {
    result = clauth::xp::run_ban(model_text);
  } catch (const std::invalid_argument& e) {
    return fail(CLAUTH_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    return fail(CLAUTH_ERR_INTERNAL, e.what());
  }
  *out_report = dup_string(result.report);
  if (!*out_report) return fail(CLAUTH_ERR_INTERNAL, "allocation failure");
  if (!result.success) return fail(CLAUTH_ERR_NO_PROOF, "not all goals derivable");
  return CLAUTH_OK;
}

clauth_status clauth_ban_verify_file(const char* path, char** out_report) {
  if (!path || !out_report) return fail(CLAUTH_ERR_PRECONDITION, "null argument");
  std::ifstream in(path);
  if (!in) return fail(CLAUTH_ERR_IO, std::string("cannot open '") + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return clauth_ban_verify_text(ss.str().c_str(), out_report);
}

const char* clauth_ban_builtin_model(void) { return clauth::xp::builtin_ban_model(); }

}  // extern "C"
