// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef CLAUTH_COST_HPP
#define CLAUTH_COST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace clauth::cost {

// Primitive timings in milliseconds (published MIRACL measurements); the
// mapping and circular-variance terms default to negligible.
struct OpTimings {
  double t_sm_bp = 0.6940;
  double t_pa_bp = 0.0018;
  double t_sm_ecc = 0.3218;
  double t_pa_ecc = 0.0024;
  double t_h = 0.0010;
  double t_map = 0.0;
  double t_cvar = 0.0;
};

enum class SchemeId { Proposed, Cui, Wang, Li };
const char* scheme_name(SchemeId s);

struct ComputationCost {
  double generation_ms = 0.0;
  double verification_ms = 0.0;
};

// Symbolic cost formulas for n messages at epoch length Q.
// Throws std::invalid_argument when n < 1 or Q < 1.
ComputationCost computation_cost(SchemeId scheme, std::uint64_t n, std::uint64_t q,
                                 const OpTimings& timings = OpTimings{});
std::uint64_t communication_cost(SchemeId scheme, std::uint64_t n);

struct SchemeRow {
  SchemeId scheme;
  ComputationCost computation;
  std::uint64_t communication_bytes = 0;
  // savings of the proposed scheme relative to this row (verification /
  // communication); zero for the proposed row itself
  double computation_savings = 0.0;
  double communication_savings = 0.0;
};

struct ComparisonReport {
  std::uint64_t n = 0;
  std::uint64_t q = 0;
  std::vector<SchemeRow> rows;
};

ComparisonReport comparison_report(std::uint64_t n, std::uint64_t q,
                                   const OpTimings& timings = OpTimings{});
std::string report_to_text(const ComparisonReport& report);
std::string report_to_csv(const ComparisonReport& report);

}  // namespace clauth::cost

#endif
