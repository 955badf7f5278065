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

#include "slicesim/slicing_model.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace slicesim {

std::string Snssai::to_string() const {
  std::string s = std::to_string(static_cast<unsigned>(sst));
  if (sd) s += "/" + std::to_string(*sd);
  return s;
}

const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::kDuplicateSnssai: return "DuplicateSnssai";
    case ViolationCode::kDedicatedExceedsMin: return "DedicatedExceedsMin";
    case ViolationCode::kMinExceedsMax: return "MinExceedsMax";
    case ViolationCode::kRatioOutOfRange: return "RatioOutOfRange";
    case ViolationCode::kDedicatedSumExceedsCell:
      return "DedicatedSumExceedsCell";
    case ViolationCode::kTooManySlicesPerUe: return "TooManySlicesPerUe";
    case ViolationCode::kDuplicateRnti: return "DuplicateRnti";
    case ViolationCode::kDuplicatePduId: return "DuplicatePduId";
    case ViolationCode::kInvalidRnti: return "InvalidRnti";
    case ViolationCode::kInvalidPduId: return "InvalidPduId";
    case ViolationCode::kInvalidMcs: return "InvalidMcs";
    case ViolationCode::kInvalidBler: return "InvalidBler";
    case ViolationCode::kUnknownSliceForSession:
      return "UnknownSliceForSession";
  }
  return "Unknown";
}

std::vector<Violation> validate_policy(const Snssai& snssai,
                                       const RrmPolicyRatio& p) {
  std::vector<Violation> out;
  auto in_range = [](int v) { return v >= 0 && v <= 100; };
  if (!in_range(p.dedicated_pct) || !in_range(p.min_pct) ||
      !in_range(p.max_pct)) {
    out.push_back({ViolationCode::kRatioOutOfRange, "slice " + snssai.to_string()});
    return out;
  }
  if (p.dedicated_pct > p.min_pct)
    out.push_back({ViolationCode::kDedicatedExceedsMin,
                   "slice " + snssai.to_string()});
  if (p.min_pct > p.max_pct)
    out.push_back({ViolationCode::kMinExceedsMax, "slice " + snssai.to_string()});
  return out;
}

std::vector<Violation> validate_cell_config(
    const std::vector<SliceConfig>& slices,
    const std::vector<UeContext>& ues) {
  std::vector<Violation> out;

  std::set<Snssai> seen;
  std::set<Snssai> configured;
  long dedicated_sum = 0;
  for (const auto& s : slices) {
    if (!seen.insert(s.snssai).second)
      out.push_back(
          {ViolationCode::kDuplicateSnssai, "slice " + s.snssai.to_string()});
    configured.insert(s.snssai);
    auto pv = validate_policy(s.snssai, s.policy);
    out.insert(out.end(), pv.begin(), pv.end());
    dedicated_sum += s.policy.dedicated_pct;
  }
  if (dedicated_sum > 100)
    out.push_back({ViolationCode::kDedicatedSumExceedsCell,
                   "sum " + std::to_string(dedicated_sum)});

  std::set<std::uint32_t> rntis;
  for (const auto& ue : ues) {
    if (ue.rnti < 1 || ue.rnti > 65535)
      out.push_back(
          {ViolationCode::kInvalidRnti, "ue " + std::to_string(ue.ue_id)});
    else if (!rntis.insert(ue.rnti).second)
      out.push_back(
          {ViolationCode::kDuplicateRnti, "rnti " + std::to_string(ue.rnti)});
    if (ue.mcs < 0 || ue.mcs > kMaxMcs)
      out.push_back(
          {ViolationCode::kInvalidMcs, "ue " + std::to_string(ue.ue_id)});
    if (ue.target_bler < 0.0 || ue.target_bler >= 1.0)
      out.push_back(
          {ViolationCode::kInvalidBler, "ue " + std::to_string(ue.ue_id)});

    std::set<Snssai> ue_slices;
    std::set<std::uint32_t> pdu_ids;
    for (const auto& sess : ue.sessions) {
      if (sess.pdu_id < kMinPduId || sess.pdu_id > kMaxPduId)
        out.push_back({ViolationCode::kInvalidPduId,
                       "ue " + std::to_string(ue.ue_id) + " pdu " +
                           std::to_string(sess.pdu_id)});
      else if (!pdu_ids.insert(sess.pdu_id).second)
        out.push_back({ViolationCode::kDuplicatePduId,
                       "ue " + std::to_string(ue.ue_id) + " pdu " +
                           std::to_string(sess.pdu_id)});
      if (!configured.contains(sess.snssai))
        out.push_back({ViolationCode::kUnknownSliceForSession,
                       "ue " + std::to_string(ue.ue_id) + " slice " +
                           sess.snssai.to_string()});
      ue_slices.insert(sess.snssai);
    }
    if (ue_slices.size() > kMaxSlicesPerUe)
      out.push_back({ViolationCode::kTooManySlicesPerUe,
                     "ue " + std::to_string(ue.ue_id) + " has " +
                         std::to_string(ue_slices.size()) + " slices"});
  }
  return out;
}

}  // namespace slicesim
