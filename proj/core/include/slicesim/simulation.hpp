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

#ifndef SLICESIM_SIMULATION_HPP
#define SLICESIM_SIMULATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slicesim/scenario.hpp"

namespace slicesim {

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
  bool tcp = false;                   // split gNB and RIC into two processes
  std::uint16_t tcp_port = 0;         // 0: $E2_PORT or 36421
};

struct RunReport {
  std::string name;
  std::uint64_t slots = 0;
  std::uint64_t conservation_violations = 0;
  std::uint64_t cap_violations = 0;
  std::uint64_t guarantee_violations = 0;
  std::uint64_t total_tb_bytes = 0;
  std::uint64_t total_delivered_bytes = 0;
  int control_messages = 0;

  std::string prbs_csv;
  std::string throughput_csv;
  std::string control_log_csv;
  std::string report_json;
  std::string scenario_json;

  bool violation_free() const {
    return conservation_violations == 0 && cap_violations == 0 &&
           guarantee_violations == 0;
  }
};

/// Advances the whole closed loop (traffic, scheduler, BLER, PF, KPM
/// reporting, RIC xApps) on one virtual clock and writes prbs.csv,
/// throughput.csv, control_log.csv, report.json and
/// scenario.normalized.json under out_dir. Deterministic for a given
/// (scenario, seed) in the default in-process mode.
RunReport run_scenario(const Scenario& scenario, const std::string& out_dir,
                       const RunOptions& opts = {});

/// Re-checks the invariants recoverable from a run's artifacts:
/// conservation and cap bounds over prbs.csv (with the policy timeline
/// reconstructed from the scenario and control log), KPM consistency
/// between throughput.csv and the report totals, and the in-run violation
/// counters. Returns a list of failures, empty when the run verifies.
std::vector<std::string> verify_run(const std::string& out_dir);

std::uint16_t default_e2_port();

}  // namespace slicesim

#endif  // SLICESIM_SIMULATION_HPP
