// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "cost.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace clauth::cost {

const char* scheme_name(SchemeId s) {
  switch (s) {
    case SchemeId::Proposed: return "proposed";
    case SchemeId::Cui: return "cui";
    case SchemeId::Wang: return "wang";
    case SchemeId::Li: return "li";
  }
  return "?";
}

static std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

ComputationCost computation_cost(SchemeId scheme, std::uint64_t n, std::uint64_t q,
                                 const OpTimings& t) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (q < 1) throw std::invalid_argument("Q must be at least 1");
  const double dn = static_cast<double>(n);
  const double epochs = static_cast<double>(ceil_div(n, q));
  ComputationCost c;
  switch (scheme) {
    case SchemeId::Proposed:
      c.generation_ms = 2 * t.t_sm_ecc + epochs * (2 * t.t_sm_ecc + t.t_h) +
                        dn * (t.t_h + t.t_map);
      c.verification_ms = 2 * t.t_sm_ecc + epochs * (t.t_sm_ecc + t.t_h) +
                          dn * (t.t_h + t.t_map + t.t_cvar);
      break;
    case SchemeId::Cui:
      c.generation_ms = dn * (3 * t.t_sm_ecc + 3 * t.t_h);
      c.verification_ms = (dn + 2) * t.t_sm_ecc + (dn - 1) * t.t_pa_ecc + 2 * dn * t.t_h;
      break;
    case SchemeId::Wang:
      c.generation_ms = dn * (2 * t.t_sm_bp + 2 * t.t_pa_bp + t.t_h);
      c.verification_ms = (3 * dn + 2) * t.t_sm_bp + 2 * dn * t.t_pa_bp + dn * t.t_h;
      break;
    case SchemeId::Li:
      c.generation_ms = dn * (3 * t.t_sm_bp + 2 * t.t_pa_bp + t.t_h);
      c.verification_ms = (3 * dn + 2) * t.t_sm_bp + 3 * dn * t.t_pa_bp + dn * t.t_h;
      break;
  }
  return c;
}

std::uint64_t communication_cost(SchemeId scheme, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  switch (scheme) {
    case SchemeId::Proposed: return 148 + 112 * n;
    case SchemeId::Cui: return 124 * n;
    case SchemeId::Wang: return 300 * n;
    case SchemeId::Li: return 408 * n;
  }
  return 0;
}

ComparisonReport comparison_report(std::uint64_t n, std::uint64_t q, const OpTimings& timings) {
  ComparisonReport report;
  report.n = n;
  report.q = q;
  const ComputationCost ours = computation_cost(SchemeId::Proposed, n, q, timings);
  const double ours_comm = static_cast<double>(communication_cost(SchemeId::Proposed, n));
  for (SchemeId s : {SchemeId::Proposed, SchemeId::Cui, SchemeId::Wang, SchemeId::Li}) {
    SchemeRow row;
    row.scheme = s;
    row.computation = computation_cost(s, n, q, timings);
    row.communication_bytes = communication_cost(s, n);
    if (s != SchemeId::Proposed) {
      row.computation_savings = 1.0 - ours.verification_ms / row.computation.verification_ms;
      row.communication_savings = 1.0 - ours_comm / static_cast<double>(row.communication_bytes);
    }
    report.rows.push_back(row);
  }
  return report;
}

std::string report_to_text(const ComparisonReport& r) {
  std::ostringstream out;
  char buf[160];
  out << "Computation and communication costs for n = " << r.n << " messages, Q = " << r.q
      << "\n";
  std::snprintf(buf, sizeof buf, "%-10s %16s %16s %14s %12s %12s\n", "scheme", "gen (ms)",
                "verify (ms)", "comm (bytes)", "comp save", "comm save");
  out << buf;
  for (const auto& row : r.rows) {
    if (row.scheme == SchemeId::Proposed)
      std::snprintf(buf, sizeof buf, "%-10s %16.4f %16.4f %14llu %12s %12s\n",
                    scheme_name(row.scheme), row.computation.generation_ms,
                    row.computation.verification_ms,
                    static_cast<unsigned long long>(row.communication_bytes), "-", "-");
    else
      std::snprintf(buf, sizeof buf, "%-10s %16.4f %16.4f %14llu %11.2f%% %11.2f%%\n",
                    scheme_name(row.scheme), row.computation.generation_ms,
                    row.computation.verification_ms,
                    static_cast<unsigned long long>(row.communication_bytes),
                    100.0 * row.computation_savings, 100.0 * row.communication_savings);
    out << buf;
  }
  return out.str();
}

std::string report_to_csv(const ComparisonReport& r) {
  std::ostringstream out;
  out << "# n=" << r.n << "\n# q=" << r.q << "\n";
  out << "scheme,generation_ms,verification_ms,communication_bytes,"
         "computation_savings,communication_savings\n";
  char buf[160];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%llu,%.6f,%.6f\n", scheme_name(row.scheme),
                  row.computation.generation_ms, row.computation.verification_ms,
                  static_cast<unsigned long long>(row.communication_bytes),
                  row.computation_savings, row.communication_savings);
    out << buf;
  }
  return out.str();
}

}  // namespace clauth::cost
