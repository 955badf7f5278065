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

#include "slicesim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "slicesim/e2_codec.hpp"

namespace slicesim {

using nlohmann::json;

const char* to_string(TimedEvent::Action a) {
  switch (a) {
    case TimedEvent::Action::kEstablishPdu: return "establish_pdu";
    case TimedEvent::Action::kReleasePdu: return "release_pdu";
    case TimedEvent::Action::kSetTraffic: return "set_traffic";
    case TimedEvent::Action::kSetPolicy: return "set_policy";
    case TimedEvent::Action::kEnableXapp: return "enable_xapp";
    case TimedEvent::Action::kDisableXapp: return "disable_xapp";
  }
  return "unknown";
}

namespace {

struct SchemaError {
  std::string what;
};

Snssai parse_snssai_j(const json& o) {
  if (!o.is_object() || !o.contains("sst"))
    throw SchemaError{"snssai must be an object with sst"};
  Snssai s;
  s.sst = static_cast<std::uint8_t>(o.at("sst").get<unsigned>());
  if (o.contains("sd")) s.sd = o.at("sd").get<std::uint32_t>();
  return s;
}

RrmPolicyRatio parse_policy_j(const json& o) {
  RrmPolicyRatio p;
  p.dedicated_pct = o.value("dedicated_pct", 0);
  p.min_pct = o.value("min_pct", 0);
  p.max_pct = o.value("max_pct", 100);
  return p;
}

TrafficProfile parse_traffic_j(const json& o) {
  TrafficProfile t;
  std::string kind = o.value("kind", "off");
  if (kind == "full_buffer")
    t.kind = TrafficKind::kFullBuffer;
  else if (kind == "cbr")
    t.kind = TrafficKind::kCbr;
  else if (kind == "off")
    t.kind = TrafficKind::kOff;
  else
    throw SchemaError{"unknown traffic kind " + kind};
  if (t.kind == TrafficKind::kCbr) {
    if (!o.contains("rate_bps")) throw SchemaError{"cbr needs rate_bps"};
    t.rate_bps = o.at("rate_bps").get<double>();
  }
  if (o.contains("start_s")) t.start_s = o.at("start_s").get<double>();
  if (o.contains("stop_s")) t.stop_s = o.at("stop_s").get<double>();
  return t;
}

std::string json_snssai_str(const Snssai& s) {
  std::string out = "{";
  if (s.sd) out += "\"sd\":" + std::to_string(*s.sd) + ",";
  out += "\"sst\":" + std::to_string(static_cast<unsigned>(s.sst)) + "}";
  return out;
}

std::string json_policy_str(const RrmPolicyRatio& p) {
  return "{\"dedicated_pct\":" + std::to_string(p.dedicated_pct) +
         ",\"max_pct\":" + std::to_string(p.max_pct) +
         ",\"min_pct\":" + std::to_string(p.min_pct) + "}";
}

std::string json_traffic_str(const TrafficProfile& t) {
  std::string out = "{\"kind\":\"";
  switch (t.kind) {
    case TrafficKind::kFullBuffer: out += "full_buffer"; break;
    case TrafficKind::kCbr: out += "cbr"; break;
    case TrafficKind::kOff: out += "off"; break;
  }
  out += "\"";
  if (t.kind == TrafficKind::kCbr)
    out += ",\"rate_bps\":" + format_real(t.rate_bps);
  if (t.start_s) out += ",\"start_s\":" + format_real(*t.start_s);
  if (t.stop_s) out += ",\"stop_s\":" + format_real(*t.stop_s);
  out += "}";
  return out;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SimError("ParseError",
                   std::string(e.what()) + " at byte " + std::to_string(e.byte));
  }

  Scenario s;
  try {
    if (!j.is_object()) throw SchemaError{"scenario must be a JSON object"};
    s.name = j.value("name", "unnamed");
    if (j.contains("numerology")) {
      const auto& n = j.at("numerology");
      if (n.is_string()) {
        std::string preset = n.get<std::string>();
        if (preset == "n106_40mhz")
          s.numerology = Numerology::n106_40mhz();
        else if (preset == "n273_100mhz")
          s.numerology = Numerology::n273_100mhz();
        else
          throw SchemaError{"unknown numerology preset " + preset};
      } else {
        s.numerology.scs_khz = n.at("scs_khz").get<unsigned>();
        s.numerology.total_prbs = n.at("total_prbs").get<unsigned>();
      }
    }
    s.duration_s = j.value("duration_s", 10.0);
    s.seed = j.value("seed", std::uint64_t{0});
    s.pf_alpha = j.value("pf_alpha", kDefaultPfAlpha);
    s.report_period_ms = j.value("report_period_ms", std::uint64_t{500});
    s.ran_node_id = j.value("ran_node_id", "gnb-0");
    std::string bler = j.value("bler_mode", "deterministic");
    if (bler == "deterministic")
      s.bler_mode = BlerMode::kDeterministic;
    else if (bler == "stochastic")
      s.bler_mode = BlerMode::kStochastic;
    else
      throw SchemaError{"unknown bler_mode " + bler};

    for (const auto& e : j.value("slices", json::array())) {
      SliceConfig c;
      c.snssai = parse_snssai_j(e.at("snssai"));
      c.policy = parse_policy_j(e.value("policy", json::object()));
      s.slices.push_back(c);
    }
    for (const auto& u : j.value("ues", json::array())) {
      UeContext ue;
      ue.ue_id = u.at("ue_id").get<std::uint32_t>();
      ue.rnti = u.value("rnti", ue.ue_id);
      ue.mcs = u.value("mcs", 27);
      ue.target_bler = u.value("target_bler", 0.0);
      for (const auto& sess : u.value("sessions", json::array())) {
        PduSession f;
        f.ue_id = ue.ue_id;
        f.pdu_id = sess.at("pdu_id").get<std::uint32_t>();
        f.snssai = parse_snssai_j(sess.at("snssai"));
        f.traffic = parse_traffic_j(sess.value("traffic", json::object()));
        ue.sessions.push_back(f);
      }
      s.ues.push_back(ue);
    }
    if (j.contains("xapp")) {
      const auto& x = j.at("xapp");
      s.xapp.control_period_s = x.value("control_period_s", 10.0);
      s.xapp.window_s = x.value("window_s", 5.0);
      s.xapp.low_max_pct = x.value("low_max_pct", 90);
      s.xapp.high_max_pct = x.value("high_max_pct", 10);
      s.xapp.enabled = x.value("enabled", true);
    }
    for (const auto& e : j.value("timeline", json::array())) {
      TimedEvent ev;
      ev.t_s = e.at("t_s").get<double>();
      std::string action = e.at("action").get<std::string>();
      if (action == "establish_pdu") {
        ev.action = TimedEvent::Action::kEstablishPdu;
        ev.ue_id = e.at("ue_id").get<std::uint32_t>();
        ev.pdu_id = e.at("pdu_id").get<std::uint32_t>();
        ev.snssai = parse_snssai_j(e.at("snssai"));
        ev.traffic = parse_traffic_j(e.value("traffic", json::object()));
      } else if (action == "release_pdu") {
        ev.action = TimedEvent::Action::kReleasePdu;
        ev.ue_id = e.at("ue_id").get<std::uint32_t>();
        ev.pdu_id = e.at("pdu_id").get<std::uint32_t>();
      } else if (action == "set_traffic") {
        ev.action = TimedEvent::Action::kSetTraffic;
        ev.ue_id = e.at("ue_id").get<std::uint32_t>();
        ev.pdu_id = e.at("pdu_id").get<std::uint32_t>();
        ev.traffic = parse_traffic_j(e.at("traffic"));
      } else if (action == "set_policy") {
        ev.action = TimedEvent::Action::kSetPolicy;
        ev.snssai = parse_snssai_j(e.at("snssai"));
        ev.policy = parse_policy_j(e.at("policy"));
      } else if (action == "enable_xapp") {
        ev.action = TimedEvent::Action::kEnableXapp;
      } else if (action == "disable_xapp") {
        ev.action = TimedEvent::Action::kDisableXapp;
      } else {
        throw SchemaError{"unknown action " + action};
      }
      s.timeline.push_back(ev);
    }
  } catch (const SchemaError& e) {
    throw SimError("ParseError", e.what);
  } catch (const json::exception& e) {
    throw SimError("ParseError", e.what());
  }

  auto errors = validate_scenario(s);
  if (!errors.empty()) {
    std::string joined;
    for (const auto& e : errors) {
      if (!joined.empty()) joined += "; ";
      joined += e;
    }
    throw SimError("ValidationError", joined);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimError("IoError", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> out;
  if (!(s.duration_s > 0.0)) out.push_back("duration_s must be positive");
  if (s.numerology.total_prbs == 0) out.push_back("total_prbs must be positive");
  try {
    (void)s.numerology.slot_duration_ms();
  } catch (const SimError& e) {
    out.push_back(e.what());
  }
  if (!(s.pf_alpha > 0.0 && s.pf_alpha < 1.0))
    out.push_back("pf_alpha must be in (0, 1)");
  if (s.report_period_ms == 0) out.push_back("report_period_ms must be positive");

  for (const auto& v : validate_cell_config(s.slices, s.ues))
    out.push_back(std::string(to_string(v.code)) + " (" + v.detail + ")");

  for (const auto& e : validate_xapp_config(s.xapp)) out.push_back(e);
  if (s.xapp.enabled) {
    for (const auto& c : s.slices) {
      if (s.xapp.low_max_pct < c.policy.min_pct ||
          s.xapp.high_max_pct < c.policy.min_pct)
        out.push_back("xapp max percentages must not undercut slice " +
                      c.snssai.to_string() + " min_pct");
    }
  }

  auto slice_known = [&](const Snssai& id) {
    return std::any_of(s.slices.begin(), s.slices.end(),
                       [&](const SliceConfig& c) { return c.snssai == id; });
  };
  auto ue_known = [&](std::uint32_t id) {
    return std::any_of(s.ues.begin(), s.ues.end(),
                       [&](const UeContext& u) { return u.ue_id == id; });
  };

  double prev_t = 0.0;
  for (const auto& ev : s.timeline) {
    if (ev.t_s < prev_t) out.push_back("timeline must be sorted by t_s");
    prev_t = ev.t_s;
    if (ev.t_s < 0.0 || ev.t_s > s.duration_s)
      out.push_back("event at t=" + format_real(ev.t_s) +
                    " outside [0, duration]");
    switch (ev.action) {
      case TimedEvent::Action::kEstablishPdu:
        if (!ue_known(ev.ue_id))
          out.push_back("establish_pdu references undeclared ue " +
                        std::to_string(ev.ue_id));
        if (!slice_known(ev.snssai))
          out.push_back("establish_pdu references undeclared slice " +
                        ev.snssai.to_string());
        if (ev.pdu_id < kMinPduId || ev.pdu_id > kMaxPduId)
          out.push_back("establish_pdu pdu_id out of range");
        break;
      case TimedEvent::Action::kReleasePdu:
      case TimedEvent::Action::kSetTraffic:
        if (!ue_known(ev.ue_id))
          out.push_back(std::string(to_string(ev.action)) +
                        " references undeclared ue " +
                        std::to_string(ev.ue_id));
        break;
      case TimedEvent::Action::kSetPolicy:
        if (!slice_known(ev.snssai))
          out.push_back("set_policy references undeclared slice " +
                        ev.snssai.to_string());
        for (const auto& v : validate_policy(ev.snssai, ev.policy))
          out.push_back(std::string(to_string(v.code)) + " in set_policy at t=" +
                        format_real(ev.t_s));
        break;
      case TimedEvent::Action::kEnableXapp:
      case TimedEvent::Action::kDisableXapp:
        break;
    }
  }
  return out;
}

std::string dump_scenario(const Scenario& s) {
  std::string out = "{";
  out += "\"bler_mode\":\"";
  out += s.bler_mode == BlerMode::kDeterministic ? "deterministic"
                                                 : "stochastic";
  out += "\",\"duration_s\":" + format_real(s.duration_s);
  out += ",\"name\":\"" + s.name + "\"";
  out += ",\"numerology\":{\"scs_khz\":" + std::to_string(s.numerology.scs_khz) +
         ",\"total_prbs\":" + std::to_string(s.numerology.total_prbs) + "}";
  out += ",\"pf_alpha\":" + format_real(s.pf_alpha);
  out += ",\"ran_node_id\":\"" + s.ran_node_id + "\"";
  out += ",\"report_period_ms\":" + std::to_string(s.report_period_ms);
  out += ",\"seed\":" + std::to_string(s.seed);
  out += ",\"slices\":[";
  for (std::size_t i = 0; i < s.slices.size(); ++i) {
    if (i) out += ",";
    out += "{\"policy\":" + json_policy_str(s.slices[i].policy) +
           ",\"snssai\":" + json_snssai_str(s.slices[i].snssai) + "}";
  }
  out += "],\"timeline\":[";
  for (std::size_t i = 0; i < s.timeline.size(); ++i) {
    const auto& ev = s.timeline[i];
    if (i) out += ",";
    out += "{\"action\":\"";
    out += to_string(ev.action);
    out += "\"";
    switch (ev.action) {
      case TimedEvent::Action::kEstablishPdu:
        out += ",\"pdu_id\":" + std::to_string(ev.pdu_id);
        out += ",\"snssai\":" + json_snssai_str(ev.snssai);
        break;
      case TimedEvent::Action::kReleasePdu:
      case TimedEvent::Action::kSetTraffic:
        out += ",\"pdu_id\":" + std::to_string(ev.pdu_id);
        break;
      case TimedEvent::Action::kSetPolicy:
        out += ",\"policy\":" + json_policy_str(ev.policy);
        out += ",\"snssai\":" + json_snssai_str(ev.snssai);
        break;
      default:
        break;
    }
    out += ",\"t_s\":" + format_real(ev.t_s);
    if (ev.action == TimedEvent::Action::kEstablishPdu ||
        ev.action == TimedEvent::Action::kSetTraffic)
      out += ",\"traffic\":" + json_traffic_str(ev.traffic);
    if (ev.action == TimedEvent::Action::kEstablishPdu ||
        ev.action == TimedEvent::Action::kReleasePdu ||
        ev.action == TimedEvent::Action::kSetTraffic)
      out += ",\"ue_id\":" + std::to_string(ev.ue_id);
    out += "}";
  }
  out += "],\"ues\":[";
  for (std::size_t i = 0; i < s.ues.size(); ++i) {
    const auto& u = s.ues[i];
    if (i) out += ",";
    out += "{\"mcs\":" + std::to_string(u.mcs);
    out += ",\"rnti\":" + std::to_string(u.rnti);
    out += ",\"sessions\":[";
    for (std::size_t k = 0; k < u.sessions.size(); ++k) {
      const auto& f = u.sessions[k];
      if (k) out += ",";
      out += "{\"pdu_id\":" + std::to_string(f.pdu_id);
      out += ",\"snssai\":" + json_snssai_str(f.snssai);
      out += ",\"traffic\":" + json_traffic_str(f.traffic) + "}";
    }
    out += "],\"target_bler\":" + format_real(u.target_bler);
    out += ",\"ue_id\":" + std::to_string(u.ue_id) + "}";
  }
  out += "],\"xapp\":{";
  out += "\"control_period_s\":" + format_real(s.xapp.control_period_s);
  out += ",\"enabled\":";
  out += s.xapp.enabled ? "true" : "false";
  out += ",\"high_max_pct\":" + std::to_string(s.xapp.high_max_pct);
  out += ",\"low_max_pct\":" + std::to_string(s.xapp.low_max_pct);
  out += ",\"window_s\":" + format_real(s.xapp.window_s);
  out += "}}";
  return out;
}

Scenario builtin_exp1(unsigned total_prbs) {
  Scenario s;
  s.name = total_prbs == 106 ? "exp1_slicing_control"
                             : "exp1_slicing_control_" + std::to_string(total_prbs);
  s.numerology = {30, total_prbs};
  s.duration_s = 100.0;
  s.slices = {{Snssai{1, {}}, {0, 0, 100}}, {Snssai{2, {}}, {0, 0, 100}}};
  UeContext ue1{1, 1, 27, 0.0, {}};
  ue1.sessions.push_back({1, 1, Snssai{1, {}},
                          TrafficProfile{TrafficKind::kFullBuffer, 0, {}, {}},
                          0, 0.0});
  UeContext ue2{2, 2, 27, 0.0, {}};
  ue2.sessions.push_back({2, 1, Snssai{2, {}},
                          TrafficProfile{TrafficKind::kFullBuffer, 0, {}, {}},
                          0, 0.0});
  s.ues = {ue1, ue2};
  s.xapp = {10.0, 5.0, 90, 10, true};
  return s;
}

Scenario builtin_exp2() {
  Scenario s;
  s.name = "exp2_min_prb_multislice";
  s.numerology = Numerology::n106_40mhz();
  s.duration_s = 100.0;
  s.slices = {{Snssai{1, {}}, {0, 0, 100}}, {Snssai{2, {}}, {0, 0, 100}}};
  TrafficProfile ue1_traffic{TrafficKind::kFullBuffer, 0, {}, 80.0};
  UeContext ue1{1, 1, 27, 0.0, {}};
  ue1.sessions.push_back({1, 1, Snssai{1, {}}, ue1_traffic, 0, 0.0});
  ue1.sessions.push_back({1, 2, Snssai{2, {}}, ue1_traffic, 0, 0.0});
  UeContext ue2{2, 2, 27, 0.0, {}};
  s.ues = {ue1, ue2};
  s.xapp.enabled = false;

  TimedEvent join;
  join.t_s = 20.0;
  join.action = TimedEvent::Action::kEstablishPdu;
  join.ue_id = 2;
  join.pdu_id = 1;
  join.snssai = Snssai{1, {}};
  join.traffic = TrafficProfile{TrafficKind::kFullBuffer, 0, {}, 100.0};

  TimedEvent min80;
  min80.t_s = 40.0;
  min80.action = TimedEvent::Action::kSetPolicy;
  min80.snssai = Snssai{2, {}};
  min80.policy = {0, 80, 100};

  TimedEvent min40 = min80;
  min40.t_s = 60.0;
  min40.policy = {0, 40, 100};

  s.timeline = {join, min80, min40};
  return s;
}

std::vector<std::string> builtin_names() { return {"exp1", "exp2"}; }

Scenario builtin_scenario(const std::string& name) {
  if (name == "exp1" || name == "exp1_slicing_control") return builtin_exp1();
  if (name == "exp2" || name == "exp2_min_prb_multislice") return builtin_exp2();
  throw SimError("UnknownScenario", name);
}

}  // namespace slicesim
