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

#ifndef SLICESIM_RIC_XAPPS_HPP
#define SLICESIM_RIC_XAPPS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slicesim/e2_session.hpp"
#include "slicesim/kpm_store.hpp"

namespace slicesim {

struct SlicingXappConfig {
  double control_period_s = 10.0;
  double window_s = 5.0;
  int low_max_pct = 90;   // applied to the lowest-throughput slice
  int high_max_pct = 10;  // applied to the highest-throughput slice
  bool enabled = true;

  bool operator==(const SlicingXappConfig&) const = default;
};

/// Config-level checks (0 < window <= period, percentages in range).
std::vector<std::string> validate_xapp_config(const SlicingXappConfig& cfg);

/// The slicing policy logic: raise the max ratio of the slice with the
/// lowest windowed throughput, clamp the one with the highest. Ties break
/// by ascending (sst, sd), the lower identity counting as "lowest".
/// Dedicated and min ratios are preserved. Slices with no telemetry yet
/// count as zero throughput. Throws SimError("NotEnoughSlices") if fewer
/// than two slices are configured.
RicControlBody slicing_xapp_tick(const KpmStore& store,
                                 const std::vector<SliceConfig>& slices,
                                 const SlicingXappConfig& cfg,
                                 std::uint64_t now_ms,
                                 const std::string& ran_node_id);

struct ControlLogEntry {
  std::uint64_t timestamp_ms = 0;
  SliceConfig entry;
  std::string outcome;  // "ack" or "failure:<codes>"
};

struct XappToggle {
  std::uint64_t t_ms = 0;
  bool enabled = false;
};

/// Near-RT RIC runtime: terminates the E2 session, feeds the KPM xApp
/// store from indications, and fires the slicing xApp on the telemetry
/// clock every control period. Control messages are a pure function of
/// (store contents, config, clock).
class RicRuntime {
 public:
  RicRuntime(E2Session* session, SlicingXappConfig cfg,
             std::uint64_t report_period_ms, std::string ric_id = "ric-0");

  /// Wire this as the session's message handler.
  void on_message(const E2Message& msg);

  /// Scheduled enable/disable events, applied on the telemetry clock.
  void set_toggles(std::vector<XappToggle> toggles);

  const std::vector<ControlLogEntry>& control_log() const { return log_; }
  const KpmStore& store() const { return store_; }
  int controls_sent() const { return controls_sent_; }

 private:
  void maybe_tick(std::uint64_t now_ms);

  E2Session* session_;
  SlicingXappConfig cfg_;
  std::uint64_t report_period_ms_;
  std::string ric_id_;
  KpmStore store_;
  std::vector<SliceConfig> slices_;  // view of gNB policies
  std::string ran_node_id_;
  std::uint64_t next_tick_ms_ = 0;
  std::vector<XappToggle> toggles_;
  std::size_t next_toggle_ = 0;
  std::map<std::uint64_t, std::pair<std::uint64_t, std::vector<SliceConfig>>>
      pending_controls_;  // txn -> (tick time, entries)
  std::vector<ControlLogEntry> log_;
  int controls_sent_ = 0;
};

}  // namespace slicesim

#endif  // SLICESIM_RIC_XAPPS_HPP
