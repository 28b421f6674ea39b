// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "phy.hpp"

namespace clauth::theory {

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double erf_inverse(double y) {
  if (y <= -1.0 || y >= 1.0) throw std::invalid_argument("erf_inverse domain is (-1, 1)");
  // Winitzki initial guess, polished by Newton on std::erf.
  const double w = std::log(1.0 - y * y);
  const double p = 2.0 / (M_PI * 0.147) + 0.5 * w;
  double x = std::copysign(std::sqrt(std::sqrt(p * p - w / 0.147) - p), y);
  for (int i = 0; i < 4; ++i) {
    const double err = std::erf(x) - y;
    x -= err * std::sqrt(M_PI) / 2.0 * std::exp(x * x);
  }
  return x;
}

double phase_pdf(double theta, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be non-negative");
  if (gamma == 0.0) return 1.0 / (2.0 * M_PI);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return std::exp(-gamma) / (2.0 * M_PI) +
         std::sqrt(gamma / M_PI) * c * std::exp(-gamma * s * s) *
             (1.0 - gaussian_q(std::sqrt(2.0 * gamma) * c));
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb,
               double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  // seed the recursion with a few panels so narrow peaks are not missed
  const int panels = 16;
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + i * h, x1 = x0 + h, xm = 0.5 * (x0 + x1);
    const double f0 = f(x0), f1 = f(x1), fm = f(xm);
    total += adaptive(f, x0, f0, x1, f1, xm, fm, simpson(f, x0, f0, x1, f1, xm, fm), tol, 40);
  }
  return total;
}

ResultantMoments resultant_moments(double gamma) {
  ResultantMoments r;
  r.mean_resultant =
      integrate([gamma](double t) { return std::cos(t) * phase_pdf(t, gamma); }, -M_PI, M_PI);
  r.cos2 = integrate([gamma](double t) { return std::cos(t) * std::cos(t) * phase_pdf(t, gamma); },
                     -M_PI, M_PI);
  return r;
}

namespace {

// E||(m + X, Y)|| and its second moment for X ~ N(0, sc2), Y ~ N(0, ss2):
// tensor midpoint quadrature over +/-10 sigma, exact second moment in
// closed form.
std::pair<double, double> resultant_norm_moments(double m, double sc2, double ss2) {
  const double er2 = m * m + sc2 + ss2;
  const double sx = std::sqrt(std::max(sc2, 0.0));
  const double sy = std::sqrt(std::max(ss2, 0.0));
  if (sx < 1e-15 && sy < 1e-15) return {std::abs(m), er2};
  const int nn = 481;
  const double span = 10.0;
  std::vector<double> xs(nn), wx(nn), ys(nn), wy(nn);
  for (int i = 0; i < nn; ++i) {
    const double z = -span + 2.0 * span * (i + 0.5) / nn;
    const double wz = std::exp(-0.5 * z * z) * (2.0 * span / nn) / std::sqrt(2.0 * M_PI);
    xs[i] = m + sx * z;
    wx[i] = wz;
    ys[i] = sy * z;
    wy[i] = wz;
  }
  double er = 0.0;
  if (sx < 1e-15) {
    for (int j = 0; j < nn; ++j) er += wy[j] * std::hypot(m, ys[j]);
  } else if (sy < 1e-15) {
    for (int i = 0; i < nn; ++i) er += wx[i] * std::abs(xs[i]);
  } else {
    for (int i = 0; i < nn; ++i) {
      double row = 0.0;
      for (int j = 0; j < nn; ++j) row += wy[j] * std::sqrt(xs[i] * xs[i] + ys[j] * ys[j]);
      er += wx[i] * row;
    }
  }
  return {er, er2};
}

}  // namespace

std::pair<double, double> statistic_moments(double gamma, std::uint32_t n2, HypothesisSide side) {
  if (n2 < 1) throw std::invalid_argument("n2 must be at least 1");
  double m = 0.0, cos2 = 0.5;
  if (side == HypothesisSide::H0) {
    const auto rm = resultant_moments(gamma);
    m = rm.mean_resultant;
    cos2 = rm.cos2;
  }
  const double sc2 = std::max(0.0, (cos2 - m * m)) / n2;
  const double ss2 = std::max(0.0, (1.0 - cos2)) / n2;
  const auto [er, er2] = resultant_norm_moments(m, sc2, ss2);
  const double mu = 1.0 - er;
  const double var = std::max(er2 - er * er, 1e-18);
  return {mu, var};
}

HypothesisStats hypothesis_stats(double gamma, std::uint32_t n2) {
  HypothesisStats st;
  std::tie(st.mu_h0, st.sigma2_h0) = statistic_moments(gamma, n2, HypothesisSide::H0);
  std::tie(st.mu_h1, st.sigma2_h1) = statistic_moments(gamma, n2, HypothesisSide::H1);
  return st;
}

double hypothesis_cdf(double x, double mu, double sigma2) {
  if (sigma2 <= 0.0) throw std::invalid_argument("sigma2 must be positive");
  return 0.5 * (1.0 + std::erf((x - mu) / std::sqrt(2.0 * sigma2)));
}

double optimize_threshold(const HypothesisStats& stats, double a1) {
  if (a1 <= 0.0 || a1 >= 1.0) throw std::invalid_argument("a1 must lie in (0, 1)");
  return stats.mu_h1 + std::sqrt(2.0 * stats.sigma2_h1) * erf_inverse(2.0 * a1 - 1.0);
}

RocCurve theoretical_roc(double gamma, std::uint32_t n2, const std::vector<double>& tau_grid) {
  const HypothesisStats st = hypothesis_stats(gamma, n2);
  RocCurve out;
  out.points.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    RocPoint p;
    p.tau = tau;
    p.p_fa = hypothesis_cdf(tau, st.mu_h1, st.sigma2_h1);
    p.p_d = hypothesis_cdf(tau, st.mu_h0, st.sigma2_h0);
    out.points.push_back(p);
  }
  return out;
}

namespace {

struct TrialContext {
  chan::ScenarioConfig cfg;
  ecc::Point shared_key;
  ecc::Point wrong_key;
  ecc::Point a1;
  const chan::RisState* ris = nullptr;
};

// One correct-key and one wrong-key circular-variance draw per trial, with
// per-trial angle dump when requested.
void run_trial(const TrialContext& ctx, std::uint64_t trial, double* v_honest, double* v_wrong,
               std::vector<double>* angles_honest) {
  Rng rng = Rng::stream(ctx.cfg.seed, trial);
  const std::size_t n2 = ctx.cfg.n2();

  Bytes pid(20), m(16);
  for (auto& b : pid) b = static_cast<std::uint8_t>(rng.next_u64() & 0xff);
  for (auto& b : m) b = static_cast<std::uint8_t>(rng.next_u64() & 0xff);
  const auto t3 = static_cast<proto::Timestamp>(trial & 0xffffffffu);

  const phy::PhasePair tx_phases =
      phy::prepare_phase_shifts(ctx.shared_key, t3, ctx.a1, pid, m, n2);
  const phy::PhySignature sig = phy::generate_phy_signature(tx_phases, rng);
  auto [r1, r2] = chan::transmit(sig.s1, sig.s2, ctx.cfg, ctx.ris, rng);

  const auto idx = chan::data_bins(ctx.cfg.n);
  chan::Cvec d1(n2), d2(n2);
  for (std::size_t i = 0; i < n2; ++i) {
    d1[i] = r1.bins[idx[i]];
    d2[i] = r2.bins[idx[i]];
  }

  const chan::Cvec c = phy::equalize_and_combine(d1, d2, tx_phases.phi_a, tx_phases.phi_b);
  std::vector<double> ang(n2);
  for (std::size_t i = 0; i < n2; ++i) ang[i] = std::arg(c[i]);
  if (v_honest) *v_honest = phy::circular_variance(ang);
  if (angles_honest) angles_honest->insert(angles_honest->end(), ang.begin(), ang.end());

  if (v_wrong) {
    const phy::PhasePair rx_phases =
        phy::prepare_phase_shifts(ctx.wrong_key, t3, ctx.a1, pid, m, n2);
    const chan::Cvec cw = phy::equalize_and_combine(d1, d2, rx_phases.phi_a, rx_phases.phi_b);
    std::vector<double> angw(n2);
    for (std::size_t i = 0; i < n2; ++i) angw[i] = std::arg(cw[i]);
    *v_wrong = phy::circular_variance(angw);
  }
}

TrialContext make_context(const chan::ScenarioConfig& cfg, const chan::RisState* ris) {
  TrialContext ctx;
  ctx.cfg = cfg;
  const auto& g = ecc::secp160k1().generator;
  ctx.shared_key = ecc::scalar_mul(0x1234567, g);
  ctx.wrong_key = ecc::scalar_mul(0x89abcde, g);
  ctx.a1 = ecc::scalar_mul(0xf00d, g);
  ctx.ris = ris;
  return ctx;
}

void parallel_for(std::uint64_t count, int jobs, const std::function<void(std::uint64_t)>& body) {
  if (jobs <= 1) {
    for (std::uint64_t t = 0; t < count; ++t) body(t);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + jobs - 1) / jobs;
  for (int w = 0; w < jobs; ++w) {
    const std::uint64_t lo = w * chunk, hi = std::min<std::uint64_t>(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::uint64_t t = lo; t < hi; ++t) body(t);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

RocCurve monte_carlo_roc(const chan::ScenarioConfig& cfg, int trials,
                         const std::vector<double>& tau_grid, int jobs) {
  if (trials < 1) throw std::invalid_argument("monte_carlo_roc: trials must be at least 1");
  cfg.validate();
  std::optional<chan::RisState> ris;
  if (cfg.ris_enabled) {
    Rng ris_rng = Rng::stream(cfg.seed, 0xfeedfaceULL);
    ris = chan::setup_ris(cfg, ris_rng);
  }
  const TrialContext ctx = make_context(cfg, ris ? &*ris : nullptr);

  std::vector<double> v0(trials), v1(trials);
  parallel_for(static_cast<std::uint64_t>(trials), jobs,
               [&](std::uint64_t t) { run_trial(ctx, t, &v0[t], &v1[t], nullptr); });

  RocCurve out;
  out.points.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    RocPoint p;
    p.tau = tau;
    p.p_d = static_cast<double>(std::count_if(v0.begin(), v0.end(),
                                              [tau](double v) { return v < tau; })) /
            trials;
    p.p_fa = static_cast<double>(std::count_if(v1.begin(), v1.end(),
                                               [tau](double v) { return v < tau; })) /
             trials;
    out.points.push_back(p);
  }
  return out;
}

std::vector<double> mc_phase_samples(const chan::ScenarioConfig& cfg, std::size_t min_samples,
                                     int jobs) {
  cfg.validate();
  std::optional<chan::RisState> ris;
  if (cfg.ris_enabled) {
    Rng ris_rng = Rng::stream(cfg.seed, 0xfeedfaceULL);
    ris = chan::setup_ris(cfg, ris_rng);
  }
  const TrialContext ctx = make_context(cfg, ris ? &*ris : nullptr);
  const std::size_t n2 = cfg.n2();
  const std::uint64_t frames = (min_samples + n2 - 1) / n2;

  std::vector<std::vector<double>> per_frame(frames);
  parallel_for(frames, jobs, [&](std::uint64_t t) {
    per_frame[t].reserve(n2);
    run_trial(ctx, t, nullptr, nullptr, &per_frame[t]);
  });
  std::vector<double> all;
  all.reserve(frames * n2);
  for (auto& f : per_frame) all.insert(all.end(), f.begin(), f.end());
  return all;
}

double pd_at_pfa(const RocCurve& curve, double pfa_target) {
  std::vector<RocPoint> pts = curve.points;
  std::sort(pts.begin(), pts.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.p_fa < b.p_fa;
  });
  if (pts.empty()) throw std::invalid_argument("empty ROC curve");
  if (pfa_target <= pts.front().p_fa) return pts.front().p_d;
  if (pfa_target >= pts.back().p_fa) return pts.back().p_d;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].p_fa >= pfa_target) {
      const double span = pts[i].p_fa - pts[i - 1].p_fa;
      if (span <= 0.0) return pts[i].p_d;
      const double w = (pfa_target - pts[i - 1].p_fa) / span;
      return pts[i - 1].p_d + w * (pts[i].p_d - pts[i - 1].p_d);
    }
  }
  return pts.back().p_d;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = count > 1 ? lo + (hi - lo) * static_cast<double>(i) / (count - 1) : lo;
  return out;
}

}  // namespace clauth::theory
