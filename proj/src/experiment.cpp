// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "experiment.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "ban.hpp"
#include "phy.hpp"
#include "protocol.hpp"
#include "theory.hpp"

namespace clauth::xp {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::string run_roc(const RocRequest& req) {
  if (req.snr_db.empty()) throw std::invalid_argument("snr list must not be empty");
  if (req.n_list.empty()) throw std::invalid_argument("subcarrier list must not be empty");
  if (req.ris_modes.empty()) throw std::invalid_argument("ris mode list must not be empty");
  if (req.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (req.tau_points < 2) throw std::invalid_argument("tau grid needs at least 2 points");

  const auto tau_grid = theory::linspace(0.0, 1.0, static_cast<std::size_t>(req.tau_points));
  std::ostringstream out;
  out << "# artifact=roc\n";
  out << "# seed=" << req.seed << "\n";
  out << "# trials=" << req.trials << "\n";
  out << "# tau_points=" << req.tau_points << "\n";
  out << "# rx_calibration_db=" << fmt("%.4f", req.base.rx_calibration_db) << "\n";
  out << "# ris_gain_db=" << fmt("%.4f", req.base.ris_gain_db) << "\n";

  std::uint64_t block = 0;
  for (std::uint32_t n : req.n_list) {
    for (double snr : req.snr_db) {
      for (bool ris : req.ris_modes) {
        chan::ScenarioConfig cfg = req.base;
        cfg.n = n;
        cfg.snr_db = snr;
        cfg.ris_enabled = ris;
        cfg.seed = req.seed + 1000003ULL * block;
        cfg.validate();
        // The RIS path multiplies per-bin SNR by its calibrated gain, so the
        // theory curve for the ON case sits at gamma * gain.
        const double gamma_eff =
            cfg.gamma_linear() * (ris ? std::pow(10.0, cfg.ris_gain_db / 10.0) : 1.0);
        const auto th = theory::theoretical_roc(gamma_eff, cfg.n2(), tau_grid);
        const auto mc = theory::monte_carlo_roc(cfg, req.trials, tau_grid, req.jobs);

        out << "# block=" << block << " snr_db=" << fmt("%.2f", snr) << " n=" << n
            << " ris=" << (ris ? "on" : "off") << " gamma_eff=" << fmt("%.6g", gamma_eff)
            << "\n";
        out << "tau,p_fa_theory,p_d_theory,p_fa_mc,p_d_mc,trials,seed\n";
        for (std::size_t i = 0; i < tau_grid.size(); ++i) {
          char line[160];
          std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%.6f,%.6f,%d,%llu\n",
                        tau_grid[i], th.points[i].p_fa, th.points[i].p_d, mc.points[i].p_fa,
                        mc.points[i].p_d, req.trials,
                        static_cast<unsigned long long>(cfg.seed));
          out << line;
        }
        ++block;
      }
    }
  }
  return out.str();
}

namespace {

void dump_hex_field(std::ostringstream& out, const char* name, const Bytes& b) {
  out << "  " << name << " = " << to_hex(b) << "\n";
}

struct Clock {
  proto::Timestamp now = 1000;
  proto::Timestamp tick(proto::Timestamp ms = 100) {
    now += ms;
    return now;
  }
};

}  // namespace

std::string run_protocol_trace(const TraceRequest& req) {
  const std::string& attack = req.attack;
  if (attack != "none" && attack != "replay" && attack != "modify" && attack != "impersonate")
    throw std::invalid_argument("unknown attack '" + attack + "'");
  chan::ScenarioConfig cfg = req.scenario;
  cfg.validate();

  std::ostringstream out;
  out << "# protocol-trace seed=" << req.seed << " n=" << req.n_messages
      << " snr_db=" << fmt("%.2f", cfg.snr_db) << " attack=" << attack << "\n";

  Clock clock;
  proto::TaState ta = proto::ta_initialize(req.seed);
  auto [sk_v, cert_v] = proto::register_terminal(ta, from_string("vehicle-0"), 0xffffffffu);
  auto [sk_r, cert_r] = proto::register_terminal(ta, from_string("rsu-0"), 0xffffffffu);

  proto::Terminal vehicle{ta.params, sk_v, cert_v, {}, {}};
  proto::Terminal rsu{ta.params, sk_r, cert_r, {}, {}};
  vehicle.params.n_subcarriers = cfg.n;
  rsu.params.n_subcarriers = cfg.n;

  out << "== handshake ==\n";
  const proto::AuthMessage req_msg = proto::build_auth_request(vehicle, clock.tick(), req.seed + 1);
  out << "V->R AuthRequest (" << req_msg.serialize().size() << " bytes)\n";
  dump_hex_field(out, "tid  ", req_msg.tid);
  out << "  t1    = " << req_msg.t << "\n";
  dump_hex_field(out, "cert ", req_msg.cert.serialize());
  dump_hex_field(out, "sigma", ecc::serialize_signature(req_msg.sigma));
  dump_hex_field(out, "wire ", req_msg.serialize());

  proto::AuthMessage presented = req_msg;
  if (attack == "impersonate") {
    // adversary has the public certificate but not SK_Vi
    auto [sk_eve, pk_eve] = ecc::keygen(req.seed + 0xe7e);
    presented.sigma = ecc::sign(sk_eve, presented.signed_payload());
    out << "! adversary re-signs the request without SK_Vi\n";
  }
  auto rsu_result = proto::process_auth_request(rsu, presented, clock.tick(), ta.crl);
  if (!rsu_result.ok()) {
    out << "R: REJECTED (" << proto::reject_name(rsu_result.error()) << ")\n";
    out << "summary: handshake rejected\n";
    return out.str();
  }
  out << "R: ACCEPTED (session stored)\n";

  const proto::AuthMessage resp = proto::build_auth_response(rsu, clock.tick(), req.seed + 2);
  out << "R->V AuthResponse (" << resp.serialize().size() << " bytes)\n";
  dump_hex_field(out, "tid  ", resp.tid);
  out << "  t2    = " << resp.t << "\n";
  dump_hex_field(out, "wire ", resp.serialize());
  auto veh_result =
      proto::process_auth_response(vehicle, resp, clock.tick(), ta.crl, req.seed + 3);
  if (!veh_result.ok()) {
    out << "V: REJECTED (" << proto::reject_name(veh_result.error()) << ")\n";
    return out.str();
  }
  const bool keys_match =
      veh_result.value()->shared_key == rsu.sessions[vehicle.tid].shared_key;
  out << "V: ACCEPTED (shared keys " << (keys_match ? "match" : "MISMATCH") << ")\n";

  // PHY thresholds for the message phase.
  const double gamma_eff =
      cfg.gamma_linear() * (cfg.ris_enabled ? std::pow(10.0, cfg.ris_gain_db / 10.0) : 1.0);
  phy::DecisionThresholds thresholds;
  thresholds.tau1 =
      theory::optimize_threshold(theory::hypothesis_stats(gamma_eff, cfg.n2()), req.a1_target);

  std::optional<chan::RisState> ris;
  if (cfg.ris_enabled) {
    Rng ris_rng = Rng::stream(req.seed, 0xfeedfaceULL);
    ris = chan::setup_ris(cfg, ris_rng);
  }

  out << "== messages ==\n";
  proto::SessionEntry& vsession = vehicle.sessions[vehicle.tid];
  int accepted = 0, rejected = 0;
  Bytes replay_wire;
  Bytes replay_payload;

  for (int i = 1; i <= req.n_messages; ++i) {
    Rng msg_rng = Rng::stream(req.seed + 7, static_cast<std::uint64_t>(i));
    Bytes payload(16);
    for (auto& b : payload) b = static_cast<std::uint8_t>(msg_rng.next_u64() & 0xff);

    const proto::Timestamp t3 = clock.tick();
    const phy::PhasePair phases = phy::prepare_phase_shifts(
        vsession.shared_key, t3, vsession.epoch_point, vsession.pid, payload, cfg.n2());
    const phy::PhySignature sig = phy::generate_phy_signature(phases, msg_rng);

    proto::ReauthHeader header;
    header.pid = vsession.pid;
    header.a1 = vsession.epoch_point;
    header.t3 = t3;
    header.sigma_phy = proto::pack_sigma_phy(phases.phi_a, phases.phi_b);
    const Bytes wire = header.serialize();

    Bytes rx_payload = payload;
    if (attack == "modify") rx_payload[0] ^= 0x01;  // tampered in transit

    chan::Cvec s1 = sig.s1, s2 = sig.s2;
    const auto frame = chan::transmit_frame(s1, s2, cfg, ris ? &*ris : nullptr, msg_rng);

    proto::Timestamp t_rx = clock.tick(5);
    if (attack == "replay" && i == 2) {
      out << "! adversary replays message 1 after the expiration period\n";
      t_rx = clock.tick(vehicle.params.t_delta_ms + 1000);
    }

    out << "[" << i << "] V->R ReauthHeader (" << wire.size() << " bytes) + payload ("
        << rx_payload.size() << " bytes)\n";
    dump_hex_field(out, "pid      ", header.pid);
    dump_hex_field(out, "a1       ", ecc::point_xy(header.a1));
    out << "  t3        = " << header.t3 << "\n";
    dump_hex_field(out, "sigma_phy", header.sigma_phy);

    const proto::ReauthHeader rx_header =
        (attack == "replay" && i == 2) ? proto::ReauthHeader::parse(replay_wire) : header;
    const Bytes& use_payload = (attack == "replay" && i == 2) ? replay_payload : rx_payload;

    if (!proto::timestamp_fresh(rx_header.t3, t_rx, rsu.params.t_delta_ms)) {
      out << "  verdict: REJECTED (STALE_TIMESTAMP)\n";
      ++rejected;
      continue;
    }
    auto resolved = proto::resolve_pseudo_identity(rsu, rx_header.pid, rx_header.a1);
    if (!resolved.ok()) {
      out << "  verdict: REJECTED (" << proto::reject_name(resolved.error()) << ")\n";
      ++rejected;
      continue;
    }
    const phy::HypothesisVerdict verdict = phy::verify_message(
        *resolved.value(), rx_header, use_payload, frame, thresholds, cfg.n);
    if (verdict.accepted) {
      ++accepted;
      out << "  verdict: ACCEPTED";
    } else {
      ++rejected;
      out << "  verdict: REJECTED (H1)";
    }
    out << " (siam=" << (verdict.siam == phy::Hypothesis::H0 ? "H0" : "H1")
        << " v=" << fmt("%.4f", verdict.v) << " tau1=" << fmt("%.4f", thresholds.tau1)
        << "; ftm=" << (verdict.ftm == phy::Hypothesis::H0 ? "H0" : "H1")
        << " sprt=" << fmt("%.4f", verdict.lambda_sprt)
        << " tau3=" << fmt("%.4f", thresholds.tau3) << ")\n";

    if (i == 1) {
      replay_wire = wire;
      replay_payload = payload;
    }
    proto::note_message_sent(vsession, cert_r.pk, vehicle.params.q_epoch,
                             req.seed + 100 + static_cast<std::uint64_t>(i));
  }
  out << "summary: " << accepted << "/" << req.n_messages << " accepted, " << rejected
      << " rejected\n";
  return out.str();
}

std::string run_theory(double gamma, std::uint32_t n2, int grid_points,
                       const std::vector<double>& a1_list) {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be non-negative");
  if (grid_points < 2) throw std::invalid_argument("grid needs at least 2 points");
  const theory::HypothesisStats st = theory::hypothesis_stats(gamma, n2);
  std::ostringstream out;
  out << "# artifact=theory\n";
  out << "# gamma=" << fmt("%.9g", gamma) << "\n";
  out << "# n2=" << n2 << "\n";
  out << "# mu_h0=" << fmt("%.9g", st.mu_h0) << "\n";
  out << "# sigma2_h0=" << fmt("%.9g", st.sigma2_h0) << "\n";
  out << "# mu_h1=" << fmt("%.9g", st.mu_h1) << "\n";
  out << "# sigma2_h1=" << fmt("%.9g", st.sigma2_h1) << "\n";
  for (double a1 : a1_list) {
    const double tau1 = theory::optimize_threshold(st, a1);
    out << "# tau1[a1=" << fmt("%.4g", a1) << "]=" << fmt("%.9g", tau1) << "\n";
  }
  out << "theta,pdf\n";
  for (int i = 0; i < grid_points; ++i) {
    const double theta = -M_PI + 2.0 * M_PI * i / grid_points;
    char line[80];
    std::snprintf(line, sizeof line, "%.6f,%.9f\n", theta, theory::phase_pdf(theta, gamma));
    out << line;
  }
  return out.str();
}

const char* builtin_ban_model() {
  return R"(# Mutual authentication handshake followed by a keyed PHY message.
principals Vi Rk TA
dh Sk_ik : Vi Rk

axiom A1: Rk believes fresh(T1)
axiom A2: Vi believes fresh(T2)
axiom A3: Rk believes fresh(T3)
axiom A4: Rk believes publickey(TA, PK_TA)
axiom A5: Vi believes publickey(TA, PK_TA)
axiom A8: Rk believes controls(Vi, (m, PID_Vi, A_1, T3))

message M1: Rk sees signed((TID_Vi, T1, signed((publickey(Vi, PK_Vi), T_R), PK_TA)), PK_Vi)
message M2: Vi sees signed((TID_Rk, T2, signed((publickey(Rk, PK_Rk), T_R), PK_TA)), PK_Rk)
message M3: Rk sees enc((m, PID_Vi, A_1, T3), Sk_ik)

goal G1: Rk believes sharedkey(Rk, Sk_ik, Vi)
goal G2: Rk believes Vi believes (TID_Vi, T1, signed((publickey(Vi, PK_Vi), T_R), PK_TA))
goal G3: Vi believes sharedkey(Vi, Sk_ik, Rk)
goal G4: Vi believes Rk believes (TID_Rk, T2, signed((publickey(Rk, PK_Rk), T_R), PK_TA))
goal G5: Rk believes (m, PID_Vi, A_1, T3)
)";
}

BanRunResult run_ban(const std::string& model_text) {
  const ban::Model model = ban::parse_model(model_text);
  const auto rules = ban::standard_rules();
  const ban::Derivation d = ban::derive(model, rules);
  BanRunResult result;
  result.success = d.success;
  result.report = ban::derivation_to_text(model, d);
  return result;
}

}  // namespace clauth::xp
