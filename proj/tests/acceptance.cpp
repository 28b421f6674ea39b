// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: end-to-end gates for the simulator, one PASS/FAIL line
// per criterion. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "ban.hpp"
#include "cost.hpp"
#include "ecc.hpp"
#include "experiment.hpp"
#include "phy.hpp"
#include "protocol.hpp"
#include "theory.hpp"

using namespace clauth;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int criterion, bool pass, const std::string& detail, double seconds) {
  std::printf("%s criterion %d: %s (%.2f s)\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str(), seconds);
  if (!pass) ++g_failures;
}

// Calibrated reference scenario for the ROC gates: static desk channel with
// the receiver chain matched to the hardware operating point.
chan::ScenarioConfig roc_scenario(double snr_db, std::uint32_t n, bool ris,
                                  std::uint64_t seed) {
  chan::ScenarioConfig cfg;
  cfg.n = n;
  cfg.snr_db = snr_db;
  cfg.rx_calibration_db = -7.5;
  cfg.fading = chan::Fading::Unit;
  cfg.rho = 1.0;
  cfg.rho_explicit = true;
  cfg.ris_enabled = ris;
  cfg.ris_gain_db = 2.0;
  cfg.seed = seed;
  return cfg;
}

char buf[512];

// --- criterion 1: phase density validity ---------------------------------
void criterion1() {
  Timer timer;
  bool pass = true;
  std::string detail = "phase density normalization and concentration";

  const double gammas[] = {0.0, 1.0, std::pow(10.0, 0.1), std::pow(10.0, 0.5), 10.0,
                           std::pow(10.0, 2.5)};
  for (double g : gammas) {
    const double integral = theory::integrate(
        [g](double t) { return theory::phase_pdf(t, g); }, -M_PI, M_PI);
    if (std::abs(integral - 1.0) > 1e-6) {
      pass = false;
      std::snprintf(buf, sizeof buf, "; integral at gamma=%.4g is %.9f", g, integral);
      detail += buf;
    }
  }
  for (double t : {-3.0, -0.5, 0.0, 1.5}) {
    if (std::abs(theory::phase_pdf(t, 0.0) - 1.0 / (2 * M_PI)) > 1e-15) {
      pass = false;
      detail += "; gamma=0 is not uniform";
      break;
    }
  }
  double prev = -1.0;
  for (double g : gammas) {
    const double at0 = theory::phase_pdf(0.0, g);
    if (at0 <= prev) {
      pass = false;
      detail += "; concentration not increasing";
    }
    prev = at0;
  }
  const double elapsed = timer.seconds();
  if (elapsed >= 1.0) {
    pass = false;
    detail += "; runtime over 1 s";
  }
  report(1, pass, detail, elapsed);
}

// --- criterion 2: Monte-Carlo angle histogram vs theory -------------------
void criterion2() {
  Timer timer;
  bool pass = true;
  std::string detail = "angle-of-C histogram L1 vs phase density:";

  for (double snr : {0.0, 5.0, 10.0}) {
    chan::ScenarioConfig cfg;
    cfg.n = 64;
    cfg.snr_db = snr;
    cfg.fading = chan::Fading::Unit;
    cfg.rho = 1.0;
    cfg.rho_explicit = true;
    cfg.seed = 20000 + static_cast<std::uint64_t>(snr);
    const auto angles = theory::mc_phase_samples(cfg, 1000000, 8);

    const int bins = 100;
    std::vector<double> hist(bins, 0.0);
    for (double a : angles) {
      int b = static_cast<int>((a + M_PI) / (2 * M_PI) * bins);
      hist[std::min(bins - 1, std::max(0, b))] += 1.0;
    }
    const double width = 2 * M_PI / bins;
    const double gamma = cfg.gamma_linear();
    double l1 = 0.0;
    for (int b = 0; b < bins; ++b) {
      const double center = -M_PI + (b + 0.5) * width;
      l1 += std::abs(hist[b] / (angles.size() * width) - theory::phase_pdf(center, gamma)) *
            width;
    }
    std::snprintf(buf, sizeof buf, " snr=%g L1=%.4f", snr, l1);
    detail += buf;
    if (l1 > 0.02) pass = false;
  }
  const double elapsed = timer.seconds();
  if (elapsed >= 120.0) {
    pass = false;
    detail += "; runtime over 2 min";
  }
  report(2, pass, detail, elapsed);
}

// --- criterion 3: ROC trends and RIS gain ---------------------------------
void criterion3() {
  Timer timer;
  bool pass = true;
  std::string detail;
  const int trials = 10000;
  const auto grid = theory::linspace(0.0, 1.0, 101);

  auto pd_of = [&](double snr, std::uint32_t n, bool ris, std::uint64_t seed) {
    const auto cfg = roc_scenario(snr, n, ris, seed);
    const auto curve = theory::monte_carlo_roc(cfg, trials, grid, 8);
    return theory::pd_at_pfa(curve, 0.2);
  };

  // (a) P_d strictly increases with SNR at N = 64
  const double a1 = pd_of(-6, 64, false, 101);
  const double a2 = pd_of(-3, 64, false, 102);
  const double a3 = pd_of(0, 64, false, 103);
  std::snprintf(buf, sizeof buf, "(a) snr sweep %.3f < %.3f < %.3f", a1, a2, a3);
  detail += buf;
  if (!(a1 < a2 && a2 < a3)) pass = false;

  // (b) P_d strictly increases with N at -6 dB
  const double b2 = pd_of(-6, 128, false, 104);
  const double b3 = pd_of(-6, 256, false, 105);
  std::snprintf(buf, sizeof buf, "; (b) n sweep %.3f < %.3f < %.3f", a1, b2, b3);
  detail += buf;
  if (!(a1 < b2 && b2 < b3)) pass = false;

  // (c) RIS on/off at -6 dB, N = 128 with the +2 dB calibrated path
  const double off = b2;
  const double on = pd_of(-6, 128, true, 104);
  std::snprintf(buf, sizeof buf, "; (c) off=%.3f on=%.3f gap=%.3f", off, on, on - off);
  detail += buf;
  if (!(on - off >= 0.08)) pass = false;
  if (!(off >= 0.82 - 0.08 && off <= 0.82 + 0.08)) pass = false;
  if (!(on >= 0.96 - 0.04 && on <= 1.0)) pass = false;

  const double elapsed = timer.seconds();
  if (elapsed >= 600.0) {
    pass = false;
    detail += "; runtime over 10 min";
  }
  report(3, pass, detail, elapsed);
}

// --- criterion 4: threshold optimizer inverse consistency -----------------
void criterion4() {
  Timer timer;
  bool pass = true;
  std::string detail = "optimizer inverse:";
  for (std::uint32_t n2 : {48u, 96u}) {
    for (double gamma : {0.251188643150958, 1.0}) {
      const auto st = theory::hypothesis_stats(gamma, n2);
      for (double a1 : {0.01, 0.1, 0.2}) {
        const double tau1 = theory::optimize_threshold(st, a1);
        const double achieved = theory::hypothesis_cdf(tau1, st.mu_h1, st.sigma2_h1);
        if (std::abs(achieved - a1) > 1e-9 || achieved > a1 + 1e-9) {
          pass = false;
          std::snprintf(buf, sizeof buf, " MISMATCH a1=%g achieved=%.12f", a1, achieved);
          detail += buf;
        }
      }
    }
  }
  if (pass) detail += " achieved P_fa == a1 within 1e-9 on all grids";
  report(4, pass, detail, timer.seconds());
}

// --- criterion 5: protocol correctness suite -------------------------------
void criterion5() {
  Timer timer;
  bool pass = true;
  std::string detail;

  int honest_ok = 0;
  const int runs = 40;
  for (int i = 0; i < runs; ++i) {
    proto::TaState ta = proto::ta_initialize(9000 + i);
    auto [sk_v, cert_v] = proto::register_terminal(ta, from_string("V" + std::to_string(i)), ~0u);
    auto [sk_r, cert_r] = proto::register_terminal(ta, from_string("R" + std::to_string(i)), ~0u);
    proto::Terminal vehicle{ta.params, sk_v, cert_v, {}, {}};
    proto::Terminal rsu{ta.params, sk_r, cert_r, {}, {}};
    const auto req = proto::build_auth_request(vehicle, 1000, 50 + i);
    auto r = proto::process_auth_request(rsu, req, 1005, ta.crl);
    if (!r.ok()) continue;
    const auto resp = proto::build_auth_response(rsu, 1010, 60 + i);
    auto v = proto::process_auth_response(vehicle, resp, 1015, ta.crl, 70 + i);
    if (!v.ok()) continue;
    if (v.value()->shared_key == rsu.sessions[vehicle.tid].shared_key) ++honest_ok;
  }
  std::snprintf(buf, sizeof buf, "honest handshakes %d/%d", honest_ok, runs);
  detail += buf;
  if (honest_ok != runs) pass = false;

  // attack classes: all must be rejected deterministically
  proto::TaState ta = proto::ta_initialize(31337);
  auto [sk_v, cert_v] = proto::register_terminal(ta, from_string("victim"), ~0u);
  auto [sk_r, cert_r] = proto::register_terminal(ta, from_string("rsu"), ~0u);
  proto::Terminal vehicle{ta.params, sk_v, cert_v, {}, {}};
  proto::Terminal rsu{ta.params, sk_r, cert_r, {}, {}};

  int attacks_rejected = 0;
  {  // replay after the expiration window
    const auto req = proto::build_auth_request(vehicle, 1000, 1);
    proto::process_auth_request(rsu, req, 1005, ta.crl);
    auto replay = proto::process_auth_request(
        rsu, proto::AuthMessage::parse(req.serialize()),
        1000 + rsu.params.t_delta_ms + 1, ta.crl);
    if (!replay.ok() && replay.error() == proto::Reject::StaleTimestamp) ++attacks_rejected;
  }
  {  // certificate tampering
    auto req = proto::build_auth_request(vehicle, 2000, 2);
    req.cert.t_r ^= 0x1;
    req.sigma = ecc::sign(sk_v, req.signed_payload());
    auto r = proto::process_auth_request(rsu, req, 2001, ta.crl);
    if (!r.ok() && r.error() == proto::Reject::BadCert) ++attacks_rejected;
  }
  {  // impersonation without the secret key
    auto req = proto::build_auth_request(vehicle, 3000, 3);
    const auto [sk_eve, pk_eve] = ecc::keygen(0xbad);
    req.sigma = ecc::sign(sk_eve, req.signed_payload());
    auto r = proto::process_auth_request(rsu, req, 3001, ta.crl);
    if (!r.ok() && r.error() == proto::Reject::BadSignature) ++attacks_rejected;
  }
  std::snprintf(buf, sizeof buf, "; attack classes rejected %d/3", attacks_rejected);
  detail += buf;
  if (attacks_rejected != 3) pass = false;

  // pseudo-identity resolve/rotate round trips, exactly
  {
    const auto req = proto::build_auth_request(vehicle, 4000, 4);
    proto::process_auth_request(rsu, req, 4001, ta.crl);
    const auto resp = proto::build_auth_response(rsu, 4002, 5);
    auto v = proto::process_auth_response(vehicle, resp, 4003, ta.crl, 6);
    bool pid_ok = v.ok();
    if (pid_ok) {
      auto& session = vehicle.sessions[vehicle.tid];
      for (int epoch = 0; epoch < 20 && pid_ok; ++epoch) {
        auto resolved = proto::resolve_pseudo_identity(rsu, session.pid, session.epoch_point);
        pid_ok = resolved.ok() && resolved.value()->tid == vehicle.tid;
        proto::next_pseudo_identity(session, cert_r.pk, 500 + epoch);
      }
    }
    detail += pid_ok ? "; pid round-trips exact" : "; pid round-trip FAILED";
    if (!pid_ok) pass = false;
  }

  const double elapsed = timer.seconds();
  if (elapsed >= 10.0) {
    pass = false;
    detail += "; runtime over 10 s";
  }
  report(5, pass, detail, elapsed);
}

// --- criterion 6: cost tables ----------------------------------------------
void criterion6() {
  Timer timer;
  bool pass = true;
  std::string detail;

  const auto ours = cost::computation_cost(cost::SchemeId::Proposed, 1000, 100);
  const auto cui = cost::computation_cost(cost::SchemeId::Cui, 1000, 100);
  const auto wang = cost::computation_cost(cost::SchemeId::Wang, 1000, 100);
  const auto li = cost::computation_cost(cost::SchemeId::Li, 1000, 100);
  std::snprintf(buf, sizeof buf, "verify ms: ours=%.4f cui=%.2f wang=%.1f li=%.1f",
                ours.verification_ms, cui.verification_ms, wang.verification_ms,
                li.verification_ms);
  detail += buf;
  if (std::abs(ours.verification_ms - 4.8716) > 5e-5) pass = false;
  if (std::abs(cui.verification_ms - 326.84) > 5e-3) pass = false;
  if (std::abs(wang.verification_ms - 2088.0) > 5e-2) pass = false;
  if (std::abs(li.verification_ms - 2089.8) > 5e-2) pass = false;

  const auto report_rows = cost::comparison_report(1000, 100).rows;
  const double s_cui = report_rows[1].computation_savings;
  const double s_comm_cui = report_rows[1].communication_savings;
  const double s_comm_wang = report_rows[2].communication_savings;
  const double s_comm_li = report_rows[3].communication_savings;
  std::snprintf(buf, sizeof buf, "; savings comp>98%%: %s; comm %.1f/%.1f/%.1f%%",
                (s_cui > 0.98 && report_rows[2].computation_savings > 0.98 &&
                 report_rows[3].computation_savings > 0.98)
                    ? "yes"
                    : "NO",
                100 * s_comm_cui, 100 * s_comm_wang, 100 * s_comm_li);
  detail += buf;
  if (!(s_cui > 0.98)) pass = false;
  if (std::abs(s_comm_cui - 0.10) > 0.01) pass = false;
  if (std::abs(s_comm_wang - 0.62) > 0.01) pass = false;
  if (std::abs(s_comm_li - 0.72) > 0.01) pass = false;

  report(6, pass, detail, timer.seconds());
}

// --- criterion 7: formal-logic engine --------------------------------------
void criterion7() {
  Timer timer;
  bool pass = true;
  std::string detail;

  const ban::Model model = ban::parse_model(xp::builtin_ban_model());
  const auto rules = ban::standard_rules();
  const auto full = ban::derive(model, rules);
  std::snprintf(buf, sizeof buf, "goals %zu/5", full.achieved_goals.size());
  detail += buf;
  if (!full.success || full.achieved_goals.size() != 5) pass = false;
  if (!ban::validate(full, rules, model.dh)) {
    pass = false;
    detail += "; replay validation FAILED";
  }

  int breaking = 0;
  for (const char* name : {"A1", "A2", "A3", "A8"}) {
    ban::Model ablated = ban::parse_model(xp::builtin_ban_model());
    ablated.drop_axiom(name);
    const auto d = ban::derive(ablated, rules);
    if (!d.success) ++breaking;
  }
  std::snprintf(buf, sizeof buf, "; ablations breaking goals %d/4", breaking);
  detail += buf;
  if (breaking != 4) pass = false;

  const double elapsed = timer.seconds();
  if (elapsed >= 1.0) {
    pass = false;
    detail += "; runtime over 1 s";
  }
  report(7, pass, detail, elapsed);
}

// --- criterion 8: crypto property suite -------------------------------------
void criterion8() {
  Timer timer;
  bool pass = true;
  std::string detail;

  const auto& c = ecc::secp160k1();
  bool constants_ok =
      c.a == 0 && c.b == 7 &&
      c.p == ecc::BigInt("0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFAC73") &&
      c.q == ecc::BigInt("0x0100000000000000000001B8FA16DFAB9ACA16B6B3") &&
      c.generator.x == ecc::BigInt("0x3B4C382CE37AA192A4019E763036F4F5DD4D7EBB") &&
      c.generator.y == ecc::BigInt("0x938CF935318FDCED6BC28286531733C3F03C4FEE");
  detail += constants_ok ? "constants byte-exact" : "constants MISMATCH";
  if (!constants_ok) pass = false;

  Rng rng(0xc0ffee);
  int group_ok = 0, ecdh_ok = 0, sig_ok = 0, flip_ok = 0;
  const int cases = 1000;
  for (int i = 0; i < cases; ++i) {
    const ecc::BigInt k1 = ecc::random_scalar(rng);
    const ecc::BigInt k2 = ecc::random_scalar(rng);
    const ecc::Point p1 = ecc::scalar_mul(k1, c.generator);
    const ecc::Point p2 = ecc::scalar_mul(k2, c.generator);

    // group identities on random points
    const bool commutes = ecc::point_add(p1, p2) == ecc::point_add(p2, p1);
    const bool identity = ecc::point_add(p1, ecc::Point::at_infinity()) == p1;
    const bool inverse = ecc::point_add(p1, ecc::point_negate(p1)).infinity;
    if (commutes && identity && inverse) ++group_ok;

    // ECDH symmetry
    if (ecc::ecdh(k1, p2) == ecc::ecdh(k2, p1)) ++ecdh_ok;

    // signature round trip + single bit flip
    Bytes msg(12);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng.next_u64() & 0xff);
    const auto sig = ecc::sign(k1, msg);
    if (ecc::verify(p1, msg, sig)) ++sig_ok;
    Bytes tampered = msg;
    const std::size_t bit = rng.next_u64() % (msg.size() * 8);
    tampered[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    if (!ecc::verify(p1, tampered, sig)) ++flip_ok;
  }
  std::snprintf(buf, sizeof buf,
                "; randomized cases: group %d/%d ecdh %d/%d sig %d/%d flip %d/%d", group_ok,
                cases, ecdh_ok, cases, sig_ok, cases, flip_ok, cases);
  detail += buf;
  if (group_ok != cases || ecdh_ok != cases || sig_ok != cases || flip_ok != cases)
    pass = false;

  report(8, pass, detail, timer.seconds());
}

}  // namespace

int main() {
  std::printf("clauth acceptance suite\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  if (g_failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", g_failures);
  return g_failures;
}
