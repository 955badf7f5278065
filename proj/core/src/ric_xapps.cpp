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

#include "slicesim/ric_xapps.hpp"

#include <algorithm>
#include <cmath>

namespace slicesim {

std::vector<std::string> validate_xapp_config(const SlicingXappConfig& cfg) {
  std::vector<std::string> out;
  if (!(cfg.window_s > 0.0 && cfg.window_s <= cfg.control_period_s))
    out.push_back("window_s must satisfy 0 < window_s <= control_period_s");
  auto pct_ok = [](int v) { return v >= 0 && v <= 100; };
  if (!pct_ok(cfg.low_max_pct) || !pct_ok(cfg.high_max_pct))
    out.push_back("max percentages must be in 0..100");
  return out;
}

RicControlBody slicing_xapp_tick(const KpmStore& store,
                                 const std::vector<SliceConfig>& slices,
                                 const SlicingXappConfig& cfg,
                                 std::uint64_t now_ms,
                                 const std::string& ran_node_id) {
  if (slices.size() < 2)
    throw SimError("NotEnoughSlices",
                   std::to_string(slices.size()) + " slice(s) configured");

  std::vector<SliceConfig> ordered = slices;
  std::sort(ordered.begin(), ordered.end(),
            [](const SliceConfig& a, const SliceConfig& b) {
              return a.snssai < b.snssai;
            });

  std::vector<double> avg(ordered.size(), 0.0);
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (store.slice_seen(ordered[i].snssai))
      avg[i] =
          store.avg_slice_throughput(ordered[i].snssai, now_ms, cfg.window_s);
  }

  // Lowest: min average, ties to the lower (sst, sd). Highest: max average
  // among the rest, ties again to the lower identity.
  std::size_t lowest = 0;
  for (std::size_t i = 1; i < ordered.size(); ++i)
    if (avg[i] < avg[lowest]) lowest = i;
  std::size_t highest = lowest == 0 ? 1 : 0;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (i == lowest) continue;
    if (avg[i] > avg[highest]) highest = i;
  }

  SliceConfig low_entry = ordered[lowest];
  low_entry.policy.max_pct = cfg.low_max_pct;
  SliceConfig high_entry = ordered[highest];
  high_entry.policy.max_pct = cfg.high_max_pct;

  RicControlBody body;
  body.ran_node_id = ran_node_id;
  body.entries = {low_entry, high_entry};
  std::sort(body.entries.begin(), body.entries.end(),
            [](const SliceConfig& a, const SliceConfig& b) {
              return a.snssai < b.snssai;
            });
  return body;
}

RicRuntime::RicRuntime(E2Session* session, SlicingXappConfig cfg,
                       std::uint64_t report_period_ms, std::string ric_id)
    : session_(session),
      cfg_(cfg),
      report_period_ms_(report_period_ms),
      ric_id_(std::move(ric_id)) {
  auto errs = validate_xapp_config(cfg_);
  if (!errs.empty()) throw SimError("InvalidXappConfig", errs.front());
  next_tick_ms_ =
      static_cast<std::uint64_t>(std::llround(cfg_.control_period_s * 1000.0));
}

void RicRuntime::set_toggles(std::vector<XappToggle> toggles) {
  toggles_ = std::move(toggles);
  std::sort(toggles_.begin(), toggles_.end(),
            [](const XappToggle& a, const XappToggle& b) {
              return a.t_ms < b.t_ms;
            });
  next_toggle_ = 0;
  // Toggles at t=0 take effect before any telemetry.
  while (next_toggle_ < toggles_.size() && toggles_[next_toggle_].t_ms == 0) {
    cfg_.enabled = toggles_[next_toggle_].enabled;
    ++next_toggle_;
  }
}

void RicRuntime::on_message(const E2Message& msg) {
  switch (msg.msg_type) {
    case MsgType::kE2SetupRequest: {
      const auto& body = std::get<E2SetupRequestBody>(msg.body);
      slices_ = body.slices;
      ran_node_id_ = body.ran_node_id;
      session_->send_response(MsgType::kE2SetupResponse, msg.transaction_id,
                              E2SetupResponseBody{ric_id_});
      session_->send_request(MsgType::kRicSubscriptionRequest,
                             RicSubscriptionRequestBody{report_period_ms_});
      break;
    }
    case MsgType::kRicSubscriptionResponse:
      break;
    case MsgType::kRicIndication: {
      const auto& body = std::get<RicIndicationBody>(msg.body);
      store_.on_indication(body);
      std::uint64_t now_ms = 0;
      for (const auto& r : body.records)
        now_ms = std::max(now_ms, r.timestamp_ms);
      maybe_tick(now_ms);
      break;
    }
    case MsgType::kRicControlAck:
    case MsgType::kRicControlFailure: {
      auto it = pending_controls_.find(msg.transaction_id);
      if (it == pending_controls_.end()) break;  // session already validated
      std::string outcome = "ack";
      if (msg.msg_type == MsgType::kRicControlFailure) {
        outcome = "failure:";
        const auto& body = std::get<RicControlFailureBody>(msg.body);
        for (std::size_t i = 0; i < body.violations.size(); ++i) {
          if (i) outcome += "|";
          outcome += body.violations[i];
        }
      }
      for (const auto& e : it->second.second) {
        log_.push_back({it->second.first, e, outcome});
        if (msg.msg_type == MsgType::kRicControlAck) {
          for (auto& s : slices_)
            if (s.snssai == e.snssai) s.policy = e.policy;
        }
      }
      pending_controls_.erase(it);
      break;
    }
    default:
      break;
  }
}

void RicRuntime::maybe_tick(std::uint64_t now_ms) {
  while (next_toggle_ < toggles_.size() &&
         toggles_[next_toggle_].t_ms <= now_ms) {
    cfg_.enabled = toggles_[next_toggle_].enabled;
    ++next_toggle_;
  }
  auto period_ms =
      static_cast<std::uint64_t>(std::llround(cfg_.control_period_s * 1000.0));
  while (now_ms >= next_tick_ms_) {
    std::uint64_t tick_ms = next_tick_ms_;
    next_tick_ms_ += period_ms;
    if (!cfg_.enabled || slices_.size() < 2) continue;
    RicControlBody body =
        slicing_xapp_tick(store_, slices_, cfg_, tick_ms, ran_node_id_);
    auto entries = body.entries;
    auto txn =
        session_->send_request(MsgType::kRicControlRequest, std::move(body));
    pending_controls_[txn] = {tick_ms, entries};
    ++controls_sent_;
  }
}

}  // namespace slicesim
