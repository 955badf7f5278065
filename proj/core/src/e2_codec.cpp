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

#include "slicesim/e2_codec.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include <json.hpp>

namespace slicesim {

using nlohmann::json;

const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::kE2SetupRequest: return "E2SetupRequest";
    case MsgType::kE2SetupResponse: return "E2SetupResponse";
    case MsgType::kRicSubscriptionRequest: return "RicSubscriptionRequest";
    case MsgType::kRicSubscriptionResponse: return "RicSubscriptionResponse";
    case MsgType::kRicIndication: return "RicIndication";
    case MsgType::kRicControlRequest: return "RicControlRequest";
    case MsgType::kRicControlAck: return "RicControlAck";
    case MsgType::kRicControlFailure: return "RicControlFailure";
  }
  return "Unknown";
}

std::optional<MsgType> msg_type_from_string(const std::string& s) {
  static const std::pair<const char*, MsgType> table[] = {
      {"E2SetupRequest", MsgType::kE2SetupRequest},
      {"E2SetupResponse", MsgType::kE2SetupResponse},
      {"RicSubscriptionRequest", MsgType::kRicSubscriptionRequest},
      {"RicSubscriptionResponse", MsgType::kRicSubscriptionResponse},
      {"RicIndication", MsgType::kRicIndication},
      {"RicControlRequest", MsgType::kRicControlRequest},
      {"RicControlAck", MsgType::kRicControlAck},
      {"RicControlFailure", MsgType::kRicControlFailure},
  };
  for (const auto& [name, t] : table)
    if (s == name) return t;
  return std::nullopt;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s = buf;
  auto dot = s.find('.');
  auto last = s.find_last_not_of('0');
  if (last == dot) last -= 1;  // "1.000000" -> "1"
  return s.substr(0, last + 1);
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

// Keys below are emitted in lexicographic order by hand.

std::string json_snssai(const Snssai& s) {
  std::string out = "{";
  if (s.sd) out += "\"sd\":" + std::to_string(*s.sd) + ",";
  out += "\"sst\":" + std::to_string(static_cast<unsigned>(s.sst)) + "}";
  return out;
}

std::string json_policy(const RrmPolicyRatio& p) {
  return "{\"dedicated_pct\":" + std::to_string(p.dedicated_pct) +
         ",\"max_pct\":" + std::to_string(p.max_pct) +
         ",\"min_pct\":" + std::to_string(p.min_pct) + "}";
}

std::string json_slice_entry(const SliceConfig& c) {
  return "{\"policy\":" + json_policy(c.policy) +
         ",\"snssai\":" + json_snssai(c.snssai) + "}";
}

std::string json_record(const KpmRecord& r) {
  std::string out = "{";
  out += "\"bler\":" + format_real(r.bler);
  out += ",\"dl_prbs\":" + std::to_string(r.dl_prbs);
  out += ",\"dl_thp_bps\":" + format_real(r.dl_thp_bps);
  out += ",\"mcs\":" + std::to_string(r.mcs);
  out += ",\"pdu_id\":" + std::to_string(r.pdu_id);
  out += ",\"rnti\":" + std::to_string(r.rnti);
  out += ",\"snssai\":" + json_snssai(r.snssai);
  out += ",\"timestamp_ms\":" + std::to_string(r.timestamp_ms);
  out += "}";
  return out;
}

std::optional<std::string> check_policy_ranges(const RrmPolicyRatio& p) {
  auto ok = [](int v) { return v >= 0 && v <= 100; };
  if (!ok(p.dedicated_pct) || !ok(p.min_pct) || !ok(p.max_pct))
    return "policy percentage out of range";
  return std::nullopt;
}

std::optional<std::string> check_snssai(const Snssai& s) {
  if (s.sd && *s.sd > 0xFFFFFF) return "sd exceeds 24 bits";
  return std::nullopt;
}

// Per-type invariants shared by encode and decode.
std::optional<std::string> validate_message(const E2Message& m) {
  auto body_index_for = [](MsgType t) -> std::size_t {
    switch (t) {
      case MsgType::kE2SetupRequest: return 1;
      case MsgType::kE2SetupResponse: return 2;
      case MsgType::kRicSubscriptionRequest: return 3;
      case MsgType::kRicSubscriptionResponse: return 0;
      case MsgType::kRicIndication: return 4;
      case MsgType::kRicControlRequest: return 5;
      case MsgType::kRicControlAck: return 0;
      case MsgType::kRicControlFailure: return 6;
    }
    return 0;
  };
  if (m.body.index() != body_index_for(m.msg_type))
    return "body does not match msg_type";

  if (const auto* b = std::get_if<E2SetupRequestBody>(&m.body)) {
    if (b->total_prbs == 0) return "total_prbs must be positive";
    std::set<Snssai> seen;
    for (const auto& e : b->slices) {
      if (auto err = check_snssai(e.snssai)) return err;
      if (auto err = check_policy_ranges(e.policy)) return err;
      if (!seen.insert(e.snssai).second) return "duplicate snssai in slices";
    }
  } else if (const auto* b = std::get_if<RicIndicationBody>(&m.body)) {
    if (b->records.empty()) return "records must be non-empty";
    for (const auto& r : b->records) {
      if (auto err = check_snssai(r.snssai)) return err;
      if (r.bler < 0.0 || r.bler > 1.0) return "bler out of range";
      if (r.dl_thp_bps < 0.0) return "dl_thp_bps negative";
      if (r.mcs < 0 || r.mcs > kMaxMcs) return "mcs out of range";
      if (r.rnti < 1 || r.rnti > 65535) return "rnti out of range";
      if (r.pdu_id < kMinPduId || r.pdu_id > kMaxPduId)
        return "pdu_id out of range";
    }
  } else if (const auto* b = std::get_if<RicControlBody>(&m.body)) {
    if (b->entries.empty()) return "entries must be non-empty";
    std::set<Snssai> seen;
    for (const auto& e : b->entries) {
      if (auto err = check_snssai(e.snssai)) return err;
      if (auto err = check_policy_ranges(e.policy)) return err;
      if (!seen.insert(e.snssai).second) return "duplicate snssai in entries";
    }
  } else if (const auto* b = std::get_if<RicSubscriptionRequestBody>(&m.body)) {
    if (b->report_period_ms == 0) return "report_period_ms must be positive";
  }
  return std::nullopt;
}

std::string canonical_payload(const E2Message& m) {
  std::string body;
  switch (m.body.index()) {
    case 0:
      break;
    case 1: {
      const auto& b = std::get<E2SetupRequestBody>(m.body);
      body = "{\"ran_node_id\":";
      append_escaped(body, b.ran_node_id);
      body += ",\"slices\":[";
      for (std::size_t i = 0; i < b.slices.size(); ++i) {
        if (i) body += ",";
        body += json_slice_entry(b.slices[i]);
      }
      body += "],\"total_prbs\":" + std::to_string(b.total_prbs) + "}";
      break;
    }
    case 2: {
      const auto& b = std::get<E2SetupResponseBody>(m.body);
      body = "{\"ric_id\":";
      append_escaped(body, b.ric_id);
      body += "}";
      break;
    }
    case 3: {
      const auto& b = std::get<RicSubscriptionRequestBody>(m.body);
      body = "{\"report_period_ms\":" + std::to_string(b.report_period_ms) +
             "}";
      break;
    }
    case 4: {
      const auto& b = std::get<RicIndicationBody>(m.body);
      body = "{\"ran_node_id\":";
      append_escaped(body, b.ran_node_id);
      body += ",\"records\":[";
      for (std::size_t i = 0; i < b.records.size(); ++i) {
        if (i) body += ",";
        body += json_record(b.records[i]);
      }
      body += "]}";
      break;
    }
    case 5: {
      const auto& b = std::get<RicControlBody>(m.body);
      body = "{\"entries\":[";
      for (std::size_t i = 0; i < b.entries.size(); ++i) {
        if (i) body += ",";
        body += json_slice_entry(b.entries[i]);
      }
      body += "],\"ran_node_id\":";
      append_escaped(body, b.ran_node_id);
      body += "}";
      break;
    }
    case 6: {
      const auto& b = std::get<RicControlFailureBody>(m.body);
      body = "{\"violations\":[";
      for (std::size_t i = 0; i < b.violations.size(); ++i) {
        if (i) body += ",";
        append_escaped(body, b.violations[i]);
      }
      body += "]}";
      break;
    }
  }
  std::string out = "{";
  if (!body.empty()) out += "\"body\":" + body + ",";
  out += "\"msg_type\":\"";
  out += to_string(m.msg_type);
  out += "\",\"transaction_id\":" + std::to_string(m.transaction_id) + "}";
  return out;
}

// Strict field extraction for decode.
struct FieldError {
  std::string what;
};

const json& req_field(const json& o, const char* key) {
  if (!o.is_object()) throw FieldError{"expected object"};
  auto it = o.find(key);
  if (it == o.end()) throw FieldError{std::string("missing field ") + key};
  return *it;
}

std::uint64_t req_uint(const json& o, const char* key, std::uint64_t max) {
  const json& v = req_field(o, key);
  if (!v.is_number_unsigned())
    throw FieldError{std::string(key) + " must be an unsigned integer"};
  auto u = v.get<std::uint64_t>();
  if (u > max) throw FieldError{std::string(key) + " out of range"};
  return u;
}

double req_real(const json& o, const char* key) {
  const json& v = req_field(o, key);
  if (!v.is_number()) throw FieldError{std::string(key) + " must be a number"};
  return v.get<double>();
}

std::string req_str(const json& o, const char* key) {
  const json& v = req_field(o, key);
  if (!v.is_string()) throw FieldError{std::string(key) + " must be a string"};
  return v.get<std::string>();
}

const json& req_array(const json& o, const char* key) {
  const json& v = req_field(o, key);
  if (!v.is_array()) throw FieldError{std::string(key) + " must be an array"};
  return v;
}

Snssai parse_snssai(const json& o) {
  Snssai s;
  s.sst = static_cast<std::uint8_t>(req_uint(o, "sst", 255));
  if (o.contains("sd"))
    s.sd = static_cast<std::uint32_t>(req_uint(o, "sd", 0xFFFFFF));
  return s;
}

RrmPolicyRatio parse_policy(const json& o) {
  RrmPolicyRatio p;
  p.dedicated_pct = static_cast<int>(req_uint(o, "dedicated_pct", 100));
  p.min_pct = static_cast<int>(req_uint(o, "min_pct", 100));
  p.max_pct = static_cast<int>(req_uint(o, "max_pct", 100));
  return p;
}

SliceConfig parse_slice_entry(const json& o) {
  SliceConfig c;
  c.policy = parse_policy(req_field(o, "policy"));
  c.snssai = parse_snssai(req_field(o, "snssai"));
  return c;
}

KpmRecord parse_record(const json& o) {
  KpmRecord r;
  r.bler = req_real(o, "bler");
  r.dl_prbs = req_uint(o, "dl_prbs", UINT64_MAX);
  r.dl_thp_bps = req_real(o, "dl_thp_bps");
  r.mcs = static_cast<int>(req_uint(o, "mcs", kMaxMcs));
  r.pdu_id = static_cast<std::uint32_t>(req_uint(o, "pdu_id", kMaxPduId));
  r.rnti = static_cast<std::uint32_t>(req_uint(o, "rnti", 65535));
  r.snssai = parse_snssai(req_field(o, "snssai"));
  r.timestamp_ms = req_uint(o, "timestamp_ms", UINT64_MAX);
  return r;
}

struct DuplicateKey {
  std::string key;
};

json parse_strict(const char* first, const char* last) {
  std::vector<std::set<std::string>> objects;
  auto cb = [&objects](int, json::parse_event_t ev, json& parsed) {
    switch (ev) {
      case json::parse_event_t::object_start:
        objects.emplace_back();
        break;
      case json::parse_event_t::object_end:
        objects.pop_back();
        break;
      case json::parse_event_t::key:
        if (!objects.back().insert(parsed.get<std::string>()).second)
          throw DuplicateKey{parsed.get<std::string>()};
        break;
      default:
        break;
    }
    return true;
  };
  return json::parse(first, last, cb, true);
}

}  // namespace

std::vector<std::uint8_t> encode(const E2Message& msg) {
  if (auto err = validate_message(msg)) throw SimError("InvalidMessage", *err);
  std::string payload = canonical_payload(msg);
  if (payload.size() > kMaxFramePayloadBytes)
    throw SimError("InvalidMessage", "payload too large");
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderBytes + payload.size());
  auto len = static_cast<std::uint32_t>(payload.size());
  out.push_back(static_cast<std::uint8_t>(len >> 24));
  out.push_back(static_cast<std::uint8_t>(len >> 16));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.push_back(static_cast<std::uint8_t>(len));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

DecodeResult decode(std::span<const std::uint8_t> bytes) {
  DecodeResult res;
  if (bytes.size() < kFrameHeaderBytes) {
    res.status = DecodeStatus::kTruncated;
    res.needed = kFrameHeaderBytes;
    return res;
  }
  std::uint32_t len = (static_cast<std::uint32_t>(bytes[0]) << 24) |
                      (static_cast<std::uint32_t>(bytes[1]) << 16) |
                      (static_cast<std::uint32_t>(bytes[2]) << 8) |
                      static_cast<std::uint32_t>(bytes[3]);
  if (len > kMaxFramePayloadBytes) {
    res.status = DecodeStatus::kMalformed;
    res.offset = 0;
    res.error = "frame length exceeds limit";
    return res;
  }
  std::size_t total = kFrameHeaderBytes + len;
  if (bytes.size() < total) {
    res.status = DecodeStatus::kTruncated;
    res.needed = total;
    return res;
  }
  const char* first = reinterpret_cast<const char*>(bytes.data()) +
                      kFrameHeaderBytes;
  const char* last = first + len;

  // Cheap nesting guard before handing the payload to the parser.
  int depth = 0, max_depth = 0;
  for (const char* p = first; p != last; ++p) {
    if (*p == '{' || *p == '[') max_depth = std::max(max_depth, ++depth);
    if (*p == '}' || *p == ']') --depth;
  }
  if (max_depth > 256) {
    res.status = DecodeStatus::kMalformed;
    res.offset = kFrameHeaderBytes;
    res.error = "nesting too deep";
    return res;
  }

  json j;
  try {
    j = parse_strict(first, last);
  } catch (const json::parse_error& e) {
    res.status = DecodeStatus::kMalformed;
    res.offset = kFrameHeaderBytes + e.byte;
    res.error = e.what();
    return res;
  } catch (const DuplicateKey& e) {
    res.status = DecodeStatus::kMalformed;
    res.offset = kFrameHeaderBytes;
    res.error = "duplicate key " + e.key;
    return res;
  } catch (const std::exception& e) {
    res.status = DecodeStatus::kMalformed;
    res.offset = kFrameHeaderBytes;
    res.error = e.what();
    return res;
  }

  E2Message msg;
  try {
    std::string type_str = req_str(j, "msg_type");
    auto type = msg_type_from_string(type_str);
    if (!type) {
      res.status = DecodeStatus::kUnknownType;
      res.error = "unknown msg_type " + type_str;
      return res;
    }
    msg.msg_type = *type;
    msg.transaction_id = req_uint(j, "transaction_id", UINT64_MAX);
    switch (msg.msg_type) {
      case MsgType::kE2SetupRequest: {
        const json& b = req_field(j, "body");
        E2SetupRequestBody body;
        body.ran_node_id = req_str(b, "ran_node_id");
        body.total_prbs =
            static_cast<unsigned>(req_uint(b, "total_prbs", 1u << 20));
        for (const auto& e : req_array(b, "slices"))
          body.slices.push_back(parse_slice_entry(e));
        msg.body = std::move(body);
        break;
      }
      case MsgType::kE2SetupResponse: {
        const json& b = req_field(j, "body");
        msg.body = E2SetupResponseBody{req_str(b, "ric_id")};
        break;
      }
      case MsgType::kRicSubscriptionRequest: {
        const json& b = req_field(j, "body");
        msg.body = RicSubscriptionRequestBody{
            req_uint(b, "report_period_ms", UINT64_MAX)};
        break;
      }
      case MsgType::kRicSubscriptionResponse:
      case MsgType::kRicControlAck:
        break;
      case MsgType::kRicIndication: {
        const json& b = req_field(j, "body");
        RicIndicationBody body;
        body.ran_node_id = req_str(b, "ran_node_id");
        for (const auto& e : req_array(b, "records"))
          body.records.push_back(parse_record(e));
        msg.body = std::move(body);
        break;
      }
      case MsgType::kRicControlRequest: {
        const json& b = req_field(j, "body");
        RicControlBody body;
        body.ran_node_id = req_str(b, "ran_node_id");
        for (const auto& e : req_array(b, "entries"))
          body.entries.push_back(parse_slice_entry(e));
        msg.body = std::move(body);
        break;
      }
      case MsgType::kRicControlFailure: {
        const json& b = req_field(j, "body");
        RicControlFailureBody body;
        for (const auto& e : req_array(b, "violations")) {
          if (!e.is_string()) throw FieldError{"violations must be strings"};
          body.violations.push_back(e.get<std::string>());
        }
        msg.body = std::move(body);
        break;
      }
    }
  } catch (const FieldError& e) {
    res.status = DecodeStatus::kMalformed;
    res.offset = kFrameHeaderBytes;
    res.error = e.what;
    return res;
  }

  if (auto err = validate_message(msg)) {
    res.status = DecodeStatus::kMalformed;
    res.offset = kFrameHeaderBytes;
    res.error = *err;
    return res;
  }

  // Reject any non-canonical spelling, which also covers trailing bytes
  // and stray whitespace inside the frame.
  std::string canon = canonical_payload(msg);
  if (canon.size() != len ||
      !std::equal(canon.begin(), canon.end(), first)) {
    res.status = DecodeStatus::kMalformed;
    res.offset = kFrameHeaderBytes;
    res.error = "payload is not in canonical form";
    return res;
  }

  res.status = DecodeStatus::kOk;
  res.consumed = total;
  res.message = std::move(msg);
  return res;
}

}  // namespace slicesim
