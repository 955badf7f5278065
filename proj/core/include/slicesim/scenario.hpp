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

#ifndef SLICESIM_SCENARIO_HPP
#define SLICESIM_SCENARIO_HPP

#include <string>
#include <vector>

#include "slicesim/mac_scheduler.hpp"
#include "slicesim/ric_xapps.hpp"

namespace slicesim {

struct TimedEvent {
  enum class Action {
    kEstablishPdu,
    kReleasePdu,
    kSetTraffic,
    kSetPolicy,
    kEnableXapp,
    kDisableXapp,
  };

  double t_s = 0.0;
  Action action = Action::kEstablishPdu;
  std::uint32_t ue_id = 0;
  std::uint32_t pdu_id = 0;
  Snssai snssai;
  TrafficProfile traffic;
  RrmPolicyRatio policy;
};

const char* to_string(TimedEvent::Action a);

struct Scenario {
  std::string name;
  Numerology numerology = Numerology::n106_40mhz();
  double duration_s = 10.0;
  std::vector<SliceConfig> slices;
  std::vector<UeContext> ues;
  std::vector<TimedEvent> timeline;
  SlicingXappConfig xapp;
  std::uint64_t seed = 0;
  double pf_alpha = kDefaultPfAlpha;
  BlerMode bler_mode = BlerMode::kDeterministic;
  std::uint64_t report_period_ms = 500;
  std::string ran_node_id = "gnb-0";
};

/// Parses and cross-validates a scenario document (same canonical JSON
/// dialect as the wire codec, parsed leniently). Throws
/// SimError("ParseError") with a position or SimError("ValidationError")
/// with the violation list.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text);

/// Cross-validation used by load and by the built-in scenarios: cell
/// admission rules, timeline referential checks, xApp config rules.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Normalized dump with all defaults filled in, canonical key order.
std::string dump_scenario(const Scenario& s);

// Replications of the two closed-loop experiments.
Scenario builtin_exp1(unsigned total_prbs = 106);
Scenario builtin_exp2();
std::vector<std::string> builtin_names();
Scenario builtin_scenario(const std::string& name);

}  // namespace slicesim

#endif  // SLICESIM_SCENARIO_HPP
