// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef CLAUTH_THEORY_HPP
#define CLAUTH_THEORY_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "channel.hpp"

namespace clauth::theory {

// Gaussian tail Q(x) = P(Z > x).
double gaussian_q(double x);
double erf_inverse(double y);

// Phase density of the equalized-combined statistic at linear SNR gamma;
// uniform 1/(2 pi) at gamma = 0.
double phase_pdf(double theta, double gamma);

// Adaptive Simpson quadrature (local tolerance driven).
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-9);

// E[cos Theta] and E[cos^2 Theta] under phase_pdf(. | gamma).
struct ResultantMoments {
  double mean_resultant;  // m = E cos
  double cos2;            // E cos^2
};
ResultantMoments resultant_moments(double gamma);

enum class HypothesisSide { H0, H1 };

// Finite-sample moments of the circular-variance statistic v over N2 bins:
// v = 1 - ||mean resultant||, Gaussian CLT on the resultant components.
// H1 uses the uniform-phase case (gamma-independent).
struct HypothesisStats {
  double mu_h0 = 0.0;
  double sigma2_h0 = 0.0;
  double mu_h1 = 0.0;
  double sigma2_h1 = 0.0;
};
std::pair<double, double> statistic_moments(double gamma, std::uint32_t n2, HypothesisSide side);
HypothesisStats hypothesis_stats(double gamma, std::uint32_t n2);

// Gaussian CDF of the decision statistic.
double hypothesis_cdf(double x, double mu, double sigma2);

// Largest tau1 with erf((tau1-mu_H1)/sqrt(2 s2_H1)) <= 2 a1 - 1, in closed
// form via the inverse erf; achieved P_fa == a1 by construction.
double optimize_threshold(const HypothesisStats& stats, double a1);

struct RocPoint {
  double tau = 0.0;
  double p_fa = 0.0;
  double p_d = 0.0;
};
struct RocCurve {
  std::vector<RocPoint> points;
};

RocCurve theoretical_roc(double gamma, std::uint32_t n2, const std::vector<double>& tau_grid);

// Empirical counterpart: correct-key trials give P_d, wrong-key trials give
// P_fa, through the full phy + channel stack. Deterministic per (cfg.seed,
// trial index) regardless of jobs. Throws when trials < 1.
RocCurve monte_carlo_roc(const chan::ScenarioConfig& cfg, int trials,
                         const std::vector<double>& tau_grid, int jobs = 1);

// Correct-key equalized-combined phase samples through the stack (for
// histogram validation against phase_pdf).
std::vector<double> mc_phase_samples(const chan::ScenarioConfig& cfg, std::size_t min_samples,
                                     int jobs = 1);

// Linear interpolation of P_d at a target P_fa along a curve.
double pd_at_pfa(const RocCurve& curve, double pfa_target);

std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace clauth::theory

#endif
