// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "theory.hpp"

using namespace clauth;
using theory::HypothesisSide;

TEST_CASE("gaussian_q basics") {
  CHECK(theory::gaussian_q(0.0) == doctest::Approx(0.5));
  for (double x : {0.3, 1.0, 2.5}) {
    CHECK(theory::gaussian_q(x) + theory::gaussian_q(-x) == doctest::Approx(1.0));
  }
  // frozen from a numeric-integration oracle
  CHECK(theory::gaussian_q(1.96) == doctest::Approx(0.0249979).epsilon(4e-3));
  CHECK(std::abs(theory::gaussian_q(1.96) - 0.0250) < 1e-4);
}

TEST_CASE("erf_inverse composes with erf") {
  for (double y : {-0.99, -0.6, -0.1, 0.0, 0.2, 0.5, 0.9, 0.999}) {
    CHECK(std::erf(theory::erf_inverse(y)) == doctest::Approx(y).epsilon(1e-12));
  }
  CHECK_THROWS_AS(theory::erf_inverse(1.0), std::invalid_argument);
}

TEST_CASE("phase_pdf: zero-SNR degeneracy and normalization") {
  for (double theta : {-3.0, -1.0, 0.0, 0.5, 3.0}) {
    CHECK(theory::phase_pdf(theta, 0.0) == doctest::Approx(1.0 / (2 * M_PI)));
  }
  // integral over [-pi, pi) equals 1 within 1e-6 across the SNR range
  for (double gamma : {1.0, 1.2589254117941673, 3.1622776601683795, 10.0, 316.22776601683796}) {
    const double integral = theory::integrate(
        [gamma](double t) { return theory::phase_pdf(t, gamma); }, -M_PI, M_PI);
    CHECK(std::abs(integral - 1.0) < 1e-6);
  }
}

TEST_CASE("phase_pdf symmetry and concentration trend") {
  for (double gamma : {0.5, 2.0, 20.0}) {
    for (double theta : {0.3, 1.1, 2.9}) {
      CHECK(theory::phase_pdf(theta, gamma) ==
            doctest::Approx(theory::phase_pdf(-theta, gamma)).epsilon(1e-12));
    }
  }
  // density at theta = 0 strictly increases with gamma
  double prev = 0.0;
  for (double gamma : {0.0, 1.0, 1.2589, 3.1623, 10.0, 316.23}) {
    const double d = theory::phase_pdf(0.0, gamma);
    CHECK(d > prev);
    prev = d;
  }
}

TEST_CASE("resultant moments match frozen quadrature values") {
  // frozen from an independent quadrature oracle
  struct Row {
    double gamma, m, cos2;
  };
  const Row rows[] = {
      {0.251188643150958, 0.417937062411, 0.557853451486},
      {1.0, 0.710271952022, 0.683939720586},
      {3.16227766016838, 0.906069214792, 0.848578954271},
      {10.0, 0.973903879241, 0.950002269996},
  };
  for (const auto& r : rows) {
    const auto m = theory::resultant_moments(r.gamma);
    CHECK(m.mean_resultant == doctest::Approx(r.m).epsilon(1e-6));
    CHECK(m.cos2 == doctest::Approx(r.cos2).epsilon(1e-6));
  }
  CHECK(theory::phase_pdf(0.0, 1.0) == doctest::Approx(0.578366128013).epsilon(1e-9));
}

TEST_CASE("statistic_moments: H1 closed form and H0 limits") {
  const std::uint32_t n2 = 48;
  const auto [mu1, var1] = theory::statistic_moments(5.0, n2, HypothesisSide::H1);
  // uniform phases: ||mean resultant|| is Rayleigh
  CHECK(mu1 == doctest::Approx(1.0 - std::sqrt(M_PI / (4.0 * n2))).epsilon(1e-3));
  CHECK(var1 == doctest::Approx((4.0 - M_PI) / (4.0 * n2)).epsilon(1e-2));
  // gamma-independence of H1
  const auto [mu1b, var1b] = theory::statistic_moments(0.01, n2, HypothesisSide::H1);
  CHECK(mu1 == doctest::Approx(mu1b));
  CHECK(var1 == doctest::Approx(var1b));

  // frozen H0 point (gamma = 10, N2 = 48) from the prototype oracle
  const auto [mu0, var0] = theory::statistic_moments(10.0, n2, HypothesisSide::H0);
  CHECK(mu0 == doctest::Approx(0.0255617773).epsilon(1e-4));
  CHECK(var0 == doctest::Approx(3.2066926e-05).epsilon(1e-3));

  // H0 mean vanishes as gamma -> infinity
  const auto [mu_inf, var_inf] = theory::statistic_moments(1e6, n2, HypothesisSide::H0);
  CHECK(mu_inf < 1e-3);

  // mu_H0 strictly decreasing in gamma, and below mu_H1 for gamma > 0
  double prev = 1.0;
  for (double gamma : {0.05, 0.2, 1.0, 5.0, 50.0}) {
    const auto [mu, var] = theory::statistic_moments(gamma, n2, HypothesisSide::H0);
    CHECK(mu < prev);
    CHECK(mu < mu1);
    prev = mu;
  }
}

TEST_CASE("hypothesis_cdf basics and identity with gaussian_q") {
  CHECK(theory::hypothesis_cdf(0.3, 0.3, 0.01) == doctest::Approx(0.5));
  CHECK(theory::hypothesis_cdf(1e9, 0.3, 0.01) == doctest::Approx(1.0));
  for (double x : {0.1, 0.4, 0.9}) {
    const double mu = 0.35, s2 = 0.004;
    CHECK(theory::hypothesis_cdf(x, mu, s2) ==
          doctest::Approx(1.0 - theory::gaussian_q((x - mu) / std::sqrt(s2))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(theory::hypothesis_cdf(0.5, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("optimize_threshold: closed-form inverse of the false-alarm constraint") {
  const auto st = theory::hypothesis_stats(1.0, 96);
  // a1 = 0.5 -> tau1 = mu_H1 (erf(0) = 0)
  CHECK(theory::optimize_threshold(st, 0.5) == doctest::Approx(st.mu_h1).epsilon(1e-12));

  for (double a1 : {0.01, 0.1, 0.2}) {
    const double tau1 = theory::optimize_threshold(st, a1);
    const double achieved = theory::hypothesis_cdf(tau1, st.mu_h1, st.sigma2_h1);
    CHECK(std::abs(achieved - a1) < 1e-9);  // exact inverse
    CHECK(achieved <= a1 + 1e-9);
  }

  // monotone in a1
  double prev = -1.0;
  for (double a1 : {0.01, 0.05, 0.1, 0.2, 0.4}) {
    const double tau1 = theory::optimize_threshold(st, a1);
    CHECK(tau1 > prev);
    prev = tau1;
  }
  CHECK_THROWS_AS(theory::optimize_threshold(st, 0.0), std::invalid_argument);
}

TEST_CASE("theoretical_roc endpoints, monotonicity and dominance") {
  const auto grid = theory::linspace(0.0, 1.0, 101);
  const auto curve = theory::theoretical_roc(1.0, 48, grid);
  REQUIRE(curve.points.size() == grid.size());
  CHECK(curve.points.front().p_fa < 1e-6);
  CHECK(curve.points.front().p_d < 1e-3);
  CHECK(curve.points.back().p_d > 0.999);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].p_d >= curve.points[i - 1].p_d);
    CHECK(curve.points[i].p_fa >= curve.points[i - 1].p_fa);
  }

  // higher gamma dominates pointwise in P_d at equal P_fa
  const auto low = theory::theoretical_roc(0.5, 48, grid);
  const auto high = theory::theoretical_roc(2.0, 48, grid);
  for (double pfa : {0.05, 0.1, 0.2, 0.4}) {
    CHECK(theory::pd_at_pfa(high, pfa) >= theory::pd_at_pfa(low, pfa));
  }

  // more subcarriers dominate at fixed gamma
  const auto n64 = theory::theoretical_roc(0.05, 48, grid);
  const auto n256 = theory::theoretical_roc(0.05, 192, grid);
  for (double pfa : {0.1, 0.2, 0.4}) {
    CHECK(theory::pd_at_pfa(n256, pfa) >= theory::pd_at_pfa(n64, pfa));
  }

  // RIS equivalence: the ON curve at gamma equals the OFF curve at
  // gamma * gain by construction
  const double gain = std::pow(10.0, 0.2);
  const auto on = theory::theoretical_roc(0.1 * gain, 96, grid);
  const auto off_shifted = theory::theoretical_roc(0.1 * gain, 96, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(on.points[i].p_d == doctest::Approx(off_shifted.points[i].p_d));
  }
}

TEST_CASE("monte_carlo_roc agrees with theory at 10 dB, N = 64") {
  chan::ScenarioConfig cfg;
  cfg.n = 64;
  cfg.snr_db = 10.0;
  cfg.fading = chan::Fading::Unit;
  cfg.rho = 1.0;
  cfg.rho_explicit = true;
  cfg.seed = 1001;
  const auto grid = theory::linspace(0.0, 1.0, 101);
  const auto mc = theory::monte_carlo_roc(cfg, 10000, grid, 4);
  const auto th = theory::theoretical_roc(cfg.gamma_linear(), cfg.n2(), grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(mc.points[i].p_d - th.points[i].p_d));
  CHECK(worst <= 0.03);
}

TEST_CASE("monte_carlo_roc rejects zero trials and is deterministic") {
  chan::ScenarioConfig cfg;
  cfg.seed = 5;
  CHECK_THROWS_AS(theory::monte_carlo_roc(cfg, 0, theory::linspace(0, 1, 3)), std::invalid_argument);

  const auto grid = theory::linspace(0.0, 1.0, 11);
  const auto a = theory::monte_carlo_roc(cfg, 500, grid, 1);
  const auto b = theory::monte_carlo_roc(cfg, 500, grid, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.points[i].p_d == b.points[i].p_d);  // jobs-independent reduction
    CHECK(a.points[i].p_fa == b.points[i].p_fa);
  }
}

TEST_CASE("mc phase histogram converges to phase_pdf in L1") {
  chan::ScenarioConfig cfg;
  cfg.n = 64;
  cfg.snr_db = 10.0;
  cfg.fading = chan::Fading::Unit;
  cfg.rho = 1.0;
  cfg.rho_explicit = true;
  cfg.seed = 31415;
  const auto angles = theory::mc_phase_samples(cfg, 200000, 4);
  REQUIRE(angles.size() >= 200000);
  const int bins = 100;
  std::vector<double> hist(bins, 0.0);
  for (double a : angles) {
    int b = static_cast<int>((a + M_PI) / (2 * M_PI) * bins);
    b = std::min(bins - 1, std::max(0, b));
    hist[b] += 1.0;
  }
  const double width = 2 * M_PI / bins;
  double l1 = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double center = -M_PI + (b + 0.5) * width;
    const double density = hist[b] / (angles.size() * width);
    l1 += std::abs(density - theory::phase_pdf(center, cfg.gamma_linear())) * width;
  }
  CHECK(l1 <= 0.03);  // full 10^6-sample gate runs in the acceptance suite
}

TEST_CASE("pd_at_pfa interpolates") {
  theory::RocCurve curve;
  curve.points = {{0.1, 0.0, 0.0}, {0.5, 0.5, 0.8}, {0.9, 1.0, 1.0}};
  CHECK(theory::pd_at_pfa(curve, 0.25) == doctest::Approx(0.4));
  CHECK(theory::pd_at_pfa(curve, 0.75) == doctest::Approx(0.9));
  CHECK(theory::pd_at_pfa(curve, 0.0) == doctest::Approx(0.0));
  CHECK(theory::pd_at_pfa(curve, 1.0) == doctest::Approx(1.0));
}
