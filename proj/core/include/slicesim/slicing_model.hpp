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

#ifndef SLICESIM_SLICING_MODEL_HPP
#define SLICESIM_SLICING_MODEL_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slicesim/phy_link.hpp"

namespace slicesim {

/// Slice identity: 8-bit slice/service type plus an optional 24-bit
/// slice differentiator. An absent SD is distinct from SD = 0.
struct Snssai {
  std::uint8_t sst = 0;
  std::optional<std::uint32_t> sd;  // 24-bit when present

  auto operator<=>(const Snssai&) const = default;
  std::string to_string() const;
};

/// rRMPolicyDedicated/Min/MaxRatio as integer PRB percentages.
/// Valid iff 0 <= dedicated <= min <= max <= 100.
struct RrmPolicyRatio {
  int dedicated_pct = 0;
  int min_pct = 0;
  int max_pct = 100;

  bool ordered() const {
    return 0 <= dedicated_pct && dedicated_pct <= min_pct &&
           min_pct <= max_pct && max_pct <= 100;
  }
  bool operator==(const RrmPolicyRatio&) const = default;
};

struct SliceConfig {
  Snssai snssai;
  RrmPolicyRatio policy;

  bool operator==(const SliceConfig&) const = default;
};

constexpr unsigned kMaxSlicesPerUe = 8;
constexpr unsigned kMinPduId = 1;
constexpr unsigned kMaxPduId = 15;

/// One PDU session = one downlink flow bound to a slice.
struct PduSession {
  std::uint32_t ue_id = 0;
  std::uint32_t pdu_id = 0;  // 1..15
  Snssai snssai;
  TrafficProfile traffic;
  std::uint64_t backlog_bytes = 0;
  double pf_avg_bps = 0.0;
};

struct UeContext {
  std::uint32_t ue_id = 0;
  std::uint32_t rnti = 0;  // 1..65535
  int mcs = 0;             // 0..28
  double target_bler = 0.0;
  std::vector<PduSession> sessions;
};

/// Timestamped per-flow telemetry carried gNB -> RIC.
struct KpmRecord {
  std::uint64_t timestamp_ms = 0;
  std::uint32_t rnti = 0;
  Snssai snssai;
  std::uint32_t pdu_id = 0;
  int mcs = 0;
  double bler = 0.0;
  double dl_thp_bps = 0.0;
  std::uint64_t dl_prbs = 0;

  bool operator==(const KpmRecord&) const = default;
};

enum class ViolationCode {
  kDuplicateSnssai,
  kDedicatedExceedsMin,
  kMinExceedsMax,
  kRatioOutOfRange,
  kDedicatedSumExceedsCell,
  kTooManySlicesPerUe,
  kDuplicateRnti,
  kDuplicatePduId,
  kInvalidRnti,
  kInvalidPduId,
  kInvalidMcs,
  kInvalidBler,
  kUnknownSliceForSession,
};

const char* to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string detail;
};

/// Checks one policy triple against the ordering and range rules.
std::vector<Violation> validate_policy(const Snssai& snssai,
                                       const RrmPolicyRatio& policy);

/// Collects every admission-rule violation in a cell configuration.
/// An empty result means the configuration is admissible. Violations are
/// values, not failures; the check itself never throws.
std::vector<Violation> validate_cell_config(
    const std::vector<SliceConfig>& slices, const std::vector<UeContext>& ues);

}  // namespace slicesim

#endif  // SLICESIM_SLICING_MODEL_HPP
