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

#ifndef SLICESIM_MAC_SCHEDULER_HPP
#define SLICESIM_MAC_SCHEDULER_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "slicesim/slicing_model.hpp"

namespace slicesim {

constexpr double kPfEpsilonBps = 1e-3;
constexpr double kDefaultPfAlpha = 0.01;

/// Per-slot PRB allotment for one slice produced by the inter-slice tier.
/// granted_prbs includes the dedicated share.
struct SliceBudget {
  Snssai snssai;
  unsigned dedicated_prbs = 0;
  unsigned granted_prbs = 0;
};

/// Slice config plus the slice-aggregate served-rate EWMA used by the
/// inter-slice tier.
struct SliceState {
  SliceConfig config;
  double pf_avg_bps = 0.0;
};

struct Grant {
  std::uint32_t ue_id = 0;
  std::uint32_t pdu_id = 0;
  Snssai snssai;
  unsigned prbs = 0;
  std::uint64_t tb_bytes = 0;
};

struct Allocation {
  std::uint64_t slot_index = 0;
  std::vector<Grant> grants;
};

/// Inter-slice tier. Three stages, deterministic:
///   (1) dedicated shares, reserved whether used or not;
///   (2) prioritized top-up to min(floor(min% * N), demand, cap) for slices
///       with demand, proportional with largest-remainder rounding when the
///       remaining PRBs cannot cover all guarantees;
///   (3) shared pool to slices with unmet demand below their cap, ordered by
///       demand_prbs / max(pf_avg_bps, eps), ties by ascending (sst, sd).
/// Returns one budget per slice in ascending (sst, sd) order.
std::vector<SliceBudget> compute_slice_budgets(
    const std::vector<SliceState>& slices,
    const std::map<Snssai, std::uint64_t>& demand_prbs, unsigned total_prbs);

/// Two-tier downlink scheduler for one cell. Single-threaded; advanced by
/// the simulation clock, with policy updates applied between slots.
class CellScheduler {
 public:
  CellScheduler(std::vector<SliceConfig> slices, std::vector<UeContext> ues,
                unsigned total_prbs, LinkModel link,
                double slot_duration_s = 0.0005,
                double pf_alpha = kDefaultPfAlpha);

  /// Replaces one slice's policy atomically; PF state is preserved and the
  /// new policy takes effect at the next schedule_slot call.
  void apply_rrm_policy(const Snssai& snssai, const RrmPolicyRatio& policy);

  /// Runs both tiers for one slot and returns the per-flow grants.
  Allocation schedule_slot(std::uint64_t slot_index);

  /// EWMA update of flow and slice served-rate averages from a slot's
  /// grants (zero service for unscheduled flows).
  void update_pf_averages(const Allocation& alloc);

  /// PRB-denominated demand of one slice: sum over its backlogged flows of
  /// ceil(backlog / bytes_per_prb).
  std::uint64_t demand_prbs(const Snssai& snssai) const;
  std::map<Snssai, std::uint64_t> all_demands() const;

  // Session lifecycle, driven by the scenario timeline.
  void establish_pdu(std::uint32_t ue_id, std::uint32_t pdu_id,
                     const Snssai& snssai, const TrafficProfile& traffic);
  void release_pdu(std::uint32_t ue_id, std::uint32_t pdu_id);
  void set_traffic(std::uint32_t ue_id, std::uint32_t pdu_id,
                   const TrafficProfile& profile);

  std::vector<UeContext>& ues() { return ues_; }
  const std::vector<UeContext>& ues() const { return ues_; }
  const std::vector<SliceState>& slices() const { return slices_; }
  unsigned total_prbs() const { return total_prbs_; }
  const LinkModel& link() const { return link_; }
  double slot_duration_s() const { return slot_duration_s_; }
  double pf_alpha() const { return pf_alpha_; }

  /// Budgets of the most recent schedule_slot call, for telemetry.
  const std::vector<SliceBudget>& last_budgets() const { return last_budgets_; }

 private:
  std::vector<SliceConfig> configs() const;
  PduSession* find_session(std::uint32_t ue_id, std::uint32_t pdu_id);

  std::vector<SliceState> slices_;
  std::vector<UeContext> ues_;
  unsigned total_prbs_;
  LinkModel link_;
  double slot_duration_s_;
  double pf_alpha_;
  std::vector<SliceBudget> last_budgets_;
};

}  // namespace slicesim

#endif  // SLICESIM_MAC_SCHEDULER_HPP
