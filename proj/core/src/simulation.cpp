// Copyright 2026 The slicesim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "slicesim/simulation.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "slicesim/e2_codec.hpp"
#include "slicesim/e2_session.hpp"
#include "slicesim/tcp_link.hpp"

namespace slicesim {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sd_field(const Snssai& s) {
  return s.sd ? std::to_string(*s.sd) : "";
}

/// gNB-side protocol logic shared by both transport modes.
struct GnbNode {
  CellScheduler* sched;
  E2Session* session;
  std::uint64_t report_period_ms = 500;

  void on_message(const E2Message& msg) {
    switch (msg.msg_type) {
      case MsgType::kE2SetupResponse:
      case MsgType::kRicSubscriptionResponse:
        break;
      case MsgType::kRicSubscriptionRequest: {
        const auto& body = std::get<RicSubscriptionRequestBody>(msg.body);
        report_period_ms = body.report_period_ms;
        session->send_response(MsgType::kRicSubscriptionResponse,
                               msg.transaction_id, std::monostate{});
        break;
      }
      case MsgType::kRicControlRequest: {
        const auto& body = std::get<RicControlBody>(msg.body);
        std::vector<std::string> violations;
        // Dry-run the whole batch against a copy so a rejected request
        // leaves no partial state.
        std::vector<SliceConfig> trial;
        for (const auto& s : sched->slices()) trial.push_back(s.config);
        for (const auto& entry : body.entries) {
          bool known = false;
          for (auto& t : trial) {
            if (t.snssai == entry.snssai) {
              t.policy = entry.policy;
              known = true;
            }
          }
          if (!known) violations.push_back("UnknownSlice");
          for (const auto& v : validate_policy(entry.snssai, entry.policy))
            violations.push_back(to_string(v.code));
        }
        long ded_sum = 0;
        for (const auto& t : trial) ded_sum += t.policy.dedicated_pct;
        if (ded_sum > 100)
          violations.push_back(
              to_string(ViolationCode::kDedicatedSumExceedsCell));
        if (!violations.empty()) {
          session->send_response(MsgType::kRicControlFailure,
                                 msg.transaction_id,
                                 RicControlFailureBody{violations});
          return;
        }
        for (const auto& entry : body.entries)
          sched->apply_rrm_policy(entry.snssai, entry.policy);
        session->send_response(MsgType::kRicControlAck, msg.transaction_id,
                               std::monostate{});
        break;
      }
      default:
        break;
    }
  }
};

struct CsvRows {
  std::string header;
  std::vector<std::string> rows;

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimError("IoError", "cannot write " + path);
    out << header << "\n";
    for (const auto& r : rows) out << r << "\n";
  }
};

std::vector<XappToggle> xapp_toggles(const Scenario& sc) {
  std::vector<XappToggle> out;
  for (const auto& ev : sc.timeline) {
    if (ev.action == TimedEvent::Action::kEnableXapp)
      out.push_back({static_cast<std::uint64_t>(std::llround(ev.t_s * 1000)),
                     true});
    if (ev.action == TimedEvent::Action::kDisableXapp)
      out.push_back({static_cast<std::uint64_t>(std::llround(ev.t_s * 1000)),
                     false});
  }
  return out;
}

}  // namespace

std::uint16_t default_e2_port() {
  if (const char* env = std::getenv("E2_PORT")) {
    int p = std::atoi(env);
    if (p > 0 && p < 65536) return static_cast<std::uint16_t>(p);
  }
  return 36421;
}

RunReport run_scenario(const Scenario& scenario, const std::string& out_dir,
                       const RunOptions& opts) {
  Scenario sc = scenario;
  if (opts.seed) sc.seed = *opts.seed;
  auto errors = validate_scenario(sc);
  if (!errors.empty()) throw SimError("ValidationError", errors.front());

  fs::create_directories(out_dir);

  std::uint16_t port = opts.tcp_port ? opts.tcp_port : default_e2_port();
  pid_t child = -1;
  TcpClient tcp;
  if (opts.tcp) {
    child = fork();
    if (child < 0) throw SimError("IoError", "fork failed");
    if (child == 0) {
      int rc = 1;
      try {
        rc = ric_serve_tcp(sc, port, out_dir);
      } catch (...) {
      }
      std::_Exit(rc);
    }
    tcp.connect(port, 5.0);
  }

  const double slot_ms = sc.numerology.slot_duration_ms();
  const double slot_s = slot_ms / 1000.0;
  const auto total_slots =
      static_cast<std::uint64_t>(std::llround(sc.duration_s * 1000.0 / slot_ms));
  const auto frame_slots =
      static_cast<std::uint64_t>(std::llround(10.0 / slot_ms));
  const auto report_slots = static_cast<std::uint64_t>(
      std::llround(static_cast<double>(sc.report_period_ms) / slot_ms));
  if (report_slots == 0)
    throw SimError("ValidationError", "report period below slot duration");
  const unsigned total_prbs = sc.numerology.total_prbs;
  const LinkModel link;

  CellScheduler sched(sc.slices, sc.ues, total_prbs, link, slot_s, sc.pf_alpha);
  std::mt19937_64 rng(sc.seed);

  // E2 wiring: in-process byte queues by default, loopback TCP otherwise.
  std::vector<std::uint8_t> to_ric, to_gnb;
  E2Session gnb_session(E2Role::kGnb, [&](const std::vector<std::uint8_t>& b) {
    if (opts.tcp)
      tcp.send(b);
    else
      to_ric.insert(to_ric.end(), b.begin(), b.end());
  });
  E2Session ric_session(E2Role::kRic, [&](const std::vector<std::uint8_t>& b) {
    to_gnb.insert(to_gnb.end(), b.begin(), b.end());
  });

  GnbNode gnb{&sched, &gnb_session, sc.report_period_ms};
  gnb_session.set_handler([&](const E2Message& m) { gnb.on_message(m); });

  RicRuntime ric(&ric_session, sc.xapp, sc.report_period_ms);
  ric.set_toggles(xapp_toggles(sc));
  ric_session.set_handler([&](const E2Message& m) { ric.on_message(m); });

  auto pump_virtual = [&]() {
    while (!to_ric.empty() || !to_gnb.empty()) {
      std::vector<std::uint8_t> a;
      a.swap(to_ric);
      if (!a.empty()) ric_session.feed(a);
      std::vector<std::uint8_t> b;
      b.swap(to_gnb);
      if (!b.empty()) gnb_session.feed(b);
    }
  };
  auto pump_tcp = [&](int timeout_ms) {
    for (;;) {
      auto bytes = tcp.poll_recv(timeout_ms);
      if (bytes.empty()) return;
      gnb_session.feed(bytes);
      timeout_ms = 0;  // drain whatever is already queued
    }
  };

  E2SetupRequestBody setup{sc.ran_node_id, total_prbs, sc.slices};
  gnb_session.start_setup(setup);
  if (opts.tcp) {
    double waited = 0;
    while (!gnb_session.setup_complete() && waited < 5.0) {
      pump_tcp(50);
      waited += 0.05;
    }
    if (!gnb_session.setup_complete())
      throw SimError("HandshakeTimeout", "no E2SetupResponse within 5 s");
  } else {
    pump_virtual();
  }

  CsvRows prbs_csv{"frame_ms,sst,sd,mean_prbs", {}};
  CsvRows thp_csv{"t_ms,ue_id,pdu_id,sst,sd,bps", {}};

  RunReport report;
  report.name = sc.name;
  report.slots = total_slots;

  std::map<Snssai, std::uint64_t> frame_prbs;
  for (const auto& s : sc.slices) frame_prbs[s.snssai] = 0;
  struct PeriodAccum {
    std::uint64_t delivered_bytes = 0;
    std::uint64_t prbs = 0;
  };
  std::map<std::pair<std::uint32_t, std::uint32_t>, PeriodAccum> period;

  const double period_s = sc.report_period_ms / 1000.0;
  const auto control_period_ms = static_cast<std::uint64_t>(
      std::llround(sc.xapp.control_period_s * 1000.0));
  std::size_t next_event = 0;

  for (std::uint64_t slot = 0; slot < total_slots; ++slot) {
    const double now_s = static_cast<double>(slot) * slot_s;

    while (next_event < sc.timeline.size() &&
           sc.timeline[next_event].t_s <= now_s + 1e-9) {
      const auto& ev = sc.timeline[next_event++];
      switch (ev.action) {
        case TimedEvent::Action::kEstablishPdu:
          sched.establish_pdu(ev.ue_id, ev.pdu_id, ev.snssai, ev.traffic);
          break;
        case TimedEvent::Action::kReleasePdu:
          sched.release_pdu(ev.ue_id, ev.pdu_id);
          break;
        case TimedEvent::Action::kSetTraffic:
          sched.set_traffic(ev.ue_id, ev.pdu_id, ev.traffic);
          break;
        case TimedEvent::Action::kSetPolicy:
          sched.apply_rrm_policy(ev.snssai, ev.policy);
          break;
        case TimedEvent::Action::kEnableXapp:
        case TimedEvent::Action::kDisableXapp:
          break;  // handled on the RIC side
      }
    }

    for (auto& ue : sched.ues())
      for (auto& f : ue.sessions)
        f.backlog_bytes = step_traffic(f.traffic, f.backlog_bytes, now_s, slot_s);

    auto demands = sched.all_demands();
    Allocation alloc = sched.schedule_slot(slot);

    std::map<Snssai, std::uint64_t> used;
    for (const auto& s : sched.slices()) used[s.config.snssai] = 0;
    std::uint64_t used_total = 0;
    for (const auto& g : alloc.grants) {
      used[g.snssai] += g.prbs;
      used_total += g.prbs;
    }
    if (used_total > total_prbs) ++report.conservation_violations;
    for (const auto& s : sched.slices()) {
      auto cap = static_cast<std::uint64_t>(s.config.policy.max_pct) *
                 total_prbs / 100;
      auto guarantee = static_cast<std::uint64_t>(s.config.policy.min_pct) *
                       total_prbs / 100;
      std::uint64_t u = used[s.config.snssai];
      if (u > cap) ++report.cap_violations;
      if (u < std::min<std::uint64_t>(guarantee, demands[s.config.snssai]))
        ++report.guarantee_violations;
    }

    for (const auto& g : alloc.grants) {
      const UeContext* ue = nullptr;
      for (const auto& u : sched.ues())
        if (u.ue_id == g.ue_id) ue = &u;
      auto bler = apply_bler(g.tb_bytes, ue->target_bler,
                             sc.bler_mode, &rng);
      for (auto& u : sched.ues()) {
        if (u.ue_id != g.ue_id) continue;
        for (auto& f : u.sessions)
          if (f.pdu_id == g.pdu_id) f.backlog_bytes -= bler.delivered_bytes;
      }
      report.total_tb_bytes += g.tb_bytes;
      report.total_delivered_bytes += bler.delivered_bytes;
      frame_prbs[g.snssai] += g.prbs;
      auto& acc = period[{g.ue_id, g.pdu_id}];
      acc.delivered_bytes += bler.delivered_bytes;
      acc.prbs += g.prbs;
    }

    sched.update_pf_averages(alloc);

    if ((slot + 1) % frame_slots == 0) {
      auto frame_ms = static_cast<std::uint64_t>(
          std::llround((slot + 1 - frame_slots) * slot_ms));
      for (const auto& s : sched.slices()) {
        const Snssai& id = s.config.snssai;
        double mean = static_cast<double>(frame_prbs[id]) /
                      static_cast<double>(frame_slots);
        prbs_csv.rows.push_back(std::to_string(frame_ms) + "," +
                                std::to_string(unsigned{id.sst}) + "," +
                                sd_field(id) + "," + format_real(mean));
        frame_prbs[id] = 0;
      }
    }

    if ((slot + 1) % report_slots == 0) {
      auto t_ms = static_cast<std::uint64_t>(std::llround((slot + 1) * slot_ms));
      std::vector<KpmRecord> records;
      for (const auto& u : sched.ues()) {
        for (const auto& f : u.sessions) {
          auto acc = period[{u.ue_id, f.pdu_id}];
          KpmRecord r;
          r.timestamp_ms = t_ms;
          r.rnti = u.rnti;
          r.snssai = f.snssai;
          r.pdu_id = f.pdu_id;
          r.mcs = u.mcs;
          r.bler = u.target_bler;
          r.dl_thp_bps = acc.delivered_bytes * 8.0 / period_s;
          r.dl_prbs = acc.prbs;
          records.push_back(r);
          thp_csv.rows.push_back(
              std::to_string(t_ms) + "," + std::to_string(u.ue_id) + "," +
              std::to_string(f.pdu_id) + "," +
              std::to_string(unsigned{f.snssai.sst}) + "," +
              sd_field(f.snssai) + "," + format_real(r.dl_thp_bps));
        }
      }
      period.clear();
      if (!records.empty()) {
        std::sort(records.begin(), records.end(),
                  [](const KpmRecord& a, const KpmRecord& b) {
                    return std::pair(a.rnti, a.pdu_id) <
                           std::pair(b.rnti, b.pdu_id);
                  });
        gnb_session.send_request(MsgType::kRicIndication,
                                 RicIndicationBody{sc.ran_node_id, records});
      }
      if (opts.tcp) {
        bool control_due = control_period_ms != 0 && t_ms >= control_period_ms &&
                           t_ms % control_period_ms == 0;
        pump_tcp(control_due ? 250 : 1);
      } else {
        pump_virtual();
      }
    }
  }

  // Shut the link down and collect the control log.
  std::vector<ControlLogEntry> control_log;
  if (opts.tcp) {
    pump_tcp(100);
    tcp.shutdown_write();
    for (int i = 0; i < 50 && !tcp.eof(); ++i) pump_tcp(20);
    tcp.close();
    int status = 0;
    waitpid(child, &status, 0);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
      throw SimError("TransportClosed", "RIC process failed");
    report.control_messages = -1;  // recorded by the RIC process
  } else {
    pump_virtual();
    control_log = ric.control_log();
    report.control_messages = ric.controls_sent();
  }

  fs::path dir(out_dir);
  report.prbs_csv = (dir / "prbs.csv").string();
  report.throughput_csv = (dir / "throughput.csv").string();
  report.control_log_csv = (dir / "control_log.csv").string();
  report.report_json = (dir / "report.json").string();
  report.scenario_json = (dir / "scenario.normalized.json").string();

  prbs_csv.write(report.prbs_csv);
  thp_csv.write(report.throughput_csv);
  if (!opts.tcp) write_control_log_csv(report.control_log_csv, control_log);

  if (opts.tcp) {
    // The child wrote control_log.csv; count its control rows.
    std::ifstream log(report.control_log_csv);
    std::string line;
    int rows = 0;
    while (std::getline(log, line))
      if (!line.empty() && line.find("timestamp_ms") == std::string::npos)
        ++rows;
    report.control_messages = rows / 2;  // two entries per control message
  }

  {
    std::ofstream sj(report.scenario_json, std::ios::binary);
    sj << dump_scenario(sc) << "\n";
  }
  {
    json r;
    r["name"] = report.name;
    r["slots"] = report.slots;
    r["slot_ms"] = slot_ms;
    r["total_prbs"] = total_prbs;
    r["report_period_ms"] = sc.report_period_ms;
    r["conservation_violations"] = report.conservation_violations;
    r["cap_violations"] = report.cap_violations;
    r["guarantee_violations"] = report.guarantee_violations;
    r["control_messages"] = report.control_messages;
    r["total_tb_bytes"] = report.total_tb_bytes;
    r["total_delivered_bytes"] = report.total_delivered_bytes;
    std::ofstream rj(report.report_json, std::ios::binary);
    rj << r.dump(2) << "\n";
  }
  return report;
}

}  // namespace slicesim
