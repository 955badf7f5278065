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

#include "slicesim/mac_scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace slicesim {

namespace {

unsigned ratio_prbs(int pct, unsigned total) {
  return static_cast<unsigned>(
      (static_cast<std::uint64_t>(pct) * total) / 100);
}

std::string join_codes(const std::vector<Violation>& vs) {
  std::string s;
  for (const auto& v : vs) {
    if (!s.empty()) s += ",";
    s += to_string(v.code);
  }
  return s;
}

}  // namespace

std::vector<SliceBudget> compute_slice_budgets(
    const std::vector<SliceState>& slices,
    const std::map<Snssai, std::uint64_t>& demand_prbs, unsigned total_prbs) {
  if (total_prbs == 0) throw SimError("TotalPrbsZero", "cell has no PRBs");

  struct Item {
    Snssai snssai;
    std::uint64_t demand = 0;
    unsigned dedicated = 0;
    unsigned cap = 0;
    unsigned guarantee = 0;
    unsigned granted = 0;
    double pf_avg = 0.0;
  };
  std::vector<Item> items;
  items.reserve(slices.size());
  for (const auto& s : slices) {
    Item it;
    it.snssai = s.config.snssai;
    auto d = demand_prbs.find(it.snssai);
    it.demand = d == demand_prbs.end() ? 0 : d->second;
    it.dedicated = ratio_prbs(s.config.policy.dedicated_pct, total_prbs);
    it.cap = ratio_prbs(s.config.policy.max_pct, total_prbs);
    it.guarantee = ratio_prbs(s.config.policy.min_pct, total_prbs);
    it.pf_avg = s.pf_avg_bps;
    items.push_back(it);
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.snssai < b.snssai; });

  // Stage 1: dedicated shares, consumed whether used or not.
  unsigned remaining = total_prbs;
  for (auto& it : items) {
    it.granted = it.dedicated;
    remaining -= it.dedicated;  // sum of dedicated percentages <= 100
  }

  // Stage 2: prioritized top-up, only for slices with demand.
  std::vector<std::uint64_t> topup(items.size(), 0);
  std::uint64_t total_topup = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    if (it.demand == 0) continue;
    std::uint64_t target = std::min<std::uint64_t>(
        it.guarantee, std::min<std::uint64_t>(it.demand, it.cap));
    if (target > it.granted) topup[i] = target - it.granted;
    total_topup += topup[i];
  }
  if (total_topup <= remaining) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      items[i].granted += static_cast<unsigned>(topup[i]);
      remaining -= static_cast<unsigned>(topup[i]);
    }
  } else {
    // Proportional to shortfall with largest-remainder rounding.
    std::vector<std::uint64_t> base(items.size(), 0);
    std::vector<std::uint64_t> rem(items.size(), 0);
    unsigned assigned = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      std::uint64_t num = static_cast<std::uint64_t>(remaining) * topup[i];
      base[i] = num / total_topup;
      rem[i] = num % total_topup;
      assigned += static_cast<unsigned>(base[i]);
    }
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       if (rem[a] != rem[b]) return rem[a] > rem[b];
                       return items[a].snssai < items[b].snssai;
                     });
    unsigned leftover = remaining - assigned;
    for (std::size_t k = 0; k < order.size() && leftover > 0; ++k) {
      if (rem[order[k]] == 0) break;
      base[order[k]] += 1;
      --leftover;
    }
    for (std::size_t i = 0; i < items.size(); ++i)
      items[i].granted += static_cast<unsigned>(base[i]);
    remaining = leftover;
  }

  // Stage 3: shared pool by slice-level PF metric. The metric is fixed
  // within a slot, so the per-PRB loop collapses to filling slices in
  // metric order.
  while (remaining > 0) {
    Item* best = nullptr;
    double best_metric = -1.0;
    for (auto& it : items) {
      if (it.granted >= it.cap) continue;
      if (it.demand <= it.granted) continue;
      double metric = static_cast<double>(it.demand) /
                      std::max(it.pf_avg, kPfEpsilonBps);
      if (best == nullptr || metric > best_metric) {
        best = &it;
        best_metric = metric;
      }
    }
    if (best == nullptr) break;
    std::uint64_t want = best->demand - best->granted;
    unsigned room = best->cap - best->granted;
    unsigned give = static_cast<unsigned>(
        std::min<std::uint64_t>({remaining, room, want}));
    best->granted += give;
    remaining -= give;
  }

  std::vector<SliceBudget> out;
  out.reserve(items.size());
  for (const auto& it : items)
    out.push_back({it.snssai, it.dedicated, it.granted});
  return out;
}

CellScheduler::CellScheduler(std::vector<SliceConfig> slices,
                             std::vector<UeContext> ues, unsigned total_prbs,
                             LinkModel link, double slot_duration_s,
                             double pf_alpha)
    : ues_(std::move(ues)),
      total_prbs_(total_prbs),
      link_(link),
      slot_duration_s_(slot_duration_s),
      pf_alpha_(pf_alpha) {
  if (total_prbs_ == 0) throw SimError("TotalPrbsZero", "cell has no PRBs");
  if (!(pf_alpha_ > 0.0 && pf_alpha_ < 1.0))
    throw SimError("InvalidAlpha", std::to_string(pf_alpha_));
  auto violations = validate_cell_config(slices, ues_);
  if (!violations.empty())
    throw SimError("InvalidConfig", join_codes(violations));
  std::sort(slices.begin(), slices.end(),
            [](const SliceConfig& a, const SliceConfig& b) {
              return a.snssai < b.snssai;
            });
  for (auto& c : slices) slices_.push_back({c, 0.0});
}

std::vector<SliceConfig> CellScheduler::configs() const {
  std::vector<SliceConfig> out;
  for (const auto& s : slices_) out.push_back(s.config);
  return out;
}

void CellScheduler::apply_rrm_policy(const Snssai& snssai,
                                     const RrmPolicyRatio& policy) {
  SliceState* target = nullptr;
  long dedicated_sum = 0;
  for (auto& s : slices_) {
    if (s.config.snssai == snssai) {
      target = &s;
      dedicated_sum += policy.dedicated_pct;
    } else {
      dedicated_sum += s.config.policy.dedicated_pct;
    }
  }
  if (target == nullptr)
    throw SimError("UnknownSlice", snssai.to_string());
  auto violations = validate_policy(snssai, policy);
  if (dedicated_sum > 100)
    violations.push_back({ViolationCode::kDedicatedSumExceedsCell,
                          "sum " + std::to_string(dedicated_sum)});
  if (!violations.empty())
    throw SimError("InvalidPolicy", join_codes(violations));
  target->config.policy = policy;
}

std::uint64_t CellScheduler::demand_prbs(const Snssai& snssai) const {
  std::uint64_t prbs = 0;
  for (const auto& ue : ues_) {
    unsigned bpp = bytes_per_prb(ue.mcs, link_);
    for (const auto& f : ue.sessions) {
      if (f.snssai != snssai || f.backlog_bytes == 0) continue;
      prbs += (f.backlog_bytes + bpp - 1) / bpp;
    }
  }
  return prbs;
}

std::map<Snssai, std::uint64_t> CellScheduler::all_demands() const {
  std::map<Snssai, std::uint64_t> out;
  for (const auto& s : slices_) out[s.config.snssai] = demand_prbs(s.config.snssai);
  return out;
}

namespace {

struct FlowRef {
  const UeContext* ue;
  PduSession* flow;
  unsigned bpp;
  unsigned prbs = 0;
  std::uint64_t cap_bytes = 0;
};

// Per-PRB proportional fair inside one slice. The denominator folds in
// capacity already granted this slot so equal flows interleave within a
// budget. Returns the number of PRBs actually used.
unsigned fill_slice(std::vector<FlowRef>& flows, unsigned budget,
                    double slot_duration_s) {
  unsigned used = 0;
  while (used < budget) {
    FlowRef* best = nullptr;
    double best_metric = -1.0;
    for (auto& fr : flows) {
      if (fr.cap_bytes >= fr.flow->backlog_bytes) continue;
      double r_inst = fr.bpp * 8.0 / slot_duration_s;
      double in_slot = fr.cap_bytes * 8.0 / slot_duration_s;
      double metric =
          r_inst / std::max(fr.flow->pf_avg_bps + in_slot, kPfEpsilonBps);
      if (best == nullptr || metric > best_metric) {
        best = &fr;
        best_metric = metric;
      }
    }
    if (best == nullptr) break;
    best->prbs += 1;
    best->cap_bytes += best->bpp;
    ++used;
  }
  return used;
}

}  // namespace

Allocation CellScheduler::schedule_slot(std::uint64_t slot_index) {
  auto demands = all_demands();
  last_budgets_ = compute_slice_budgets(slices_, demands, total_prbs_);

  // Flows grouped by slice, in (ue_id, pdu_id) order for tie-breaking.
  std::map<Snssai, std::vector<FlowRef>> by_slice;
  for (const auto& s : slices_) by_slice[s.config.snssai] = {};
  for (auto& ue : ues_) {
    unsigned bpp = bytes_per_prb(ue.mcs, link_);
    for (auto& f : ue.sessions) by_slice[f.snssai].push_back({&ue, &f, bpp});
  }
  for (auto& [snssai, flows] : by_slice)
    std::sort(flows.begin(), flows.end(), [](const FlowRef& a, const FlowRef& b) {
      return std::pair(a.flow->ue_id, a.flow->pdu_id) <
             std::pair(b.flow->ue_id, b.flow->pdu_id);
    });

  struct SliceFill {
    const SliceBudget* budget;
    double pf_avg;
    unsigned used = 0;
    unsigned extra = 0;
  };
  std::vector<SliceFill> fills;
  for (auto& b : last_budgets_) {
    const SliceState* st = nullptr;
    for (const auto& s : slices_)
      if (s.config.snssai == b.snssai) st = &s;
    SliceFill sf{&b, st->pf_avg_bps};
    sf.used = fill_slice(by_slice[b.snssai], b.granted_prbs, slot_duration_s_);
    fills.push_back(sf);
  }

  // Unused non-dedicated budget goes back to the shared pool once.
  // Unused dedicated PRBs stay reserved.
  unsigned pool = 0;
  for (const auto& sf : fills) {
    unsigned unused = sf.budget->granted_prbs - sf.used;
    unsigned idle_dedicated = sf.budget->dedicated_prbs > sf.used
                                  ? sf.budget->dedicated_prbs - sf.used
                                  : 0;
    pool += unused - idle_dedicated;
  }
  auto remaining_demand = [&](const SliceFill& sf) {
    std::uint64_t prbs = 0;
    for (const auto& fr : by_slice[sf.budget->snssai]) {
      if (fr.cap_bytes >= fr.flow->backlog_bytes) continue;
      prbs += (fr.flow->backlog_bytes - fr.cap_bytes + fr.bpp - 1) / fr.bpp;
    }
    return prbs;
  };
  while (pool > 0) {
    SliceFill* best = nullptr;
    double best_metric = -1.0;
    std::uint64_t best_want = 0;
    for (auto& sf : fills) {
      const SliceState* st = nullptr;
      for (const auto& s : slices_)
        if (s.config.snssai == sf.budget->snssai) st = &s;
      unsigned cap_prbs = ratio_prbs(st->config.policy.max_pct, total_prbs_);
      unsigned total_granted = sf.budget->granted_prbs + sf.extra;
      if (total_granted >= cap_prbs) continue;
      std::uint64_t want = remaining_demand(sf);
      if (want == 0) continue;
      double metric = static_cast<double>(want) /
                      std::max(sf.pf_avg, kPfEpsilonBps);
      if (best == nullptr || metric > best_metric) {
        best = &sf;
        best_metric = metric;
        best_want = want;
      }
    }
    if (best == nullptr) break;
    const SliceState* st = nullptr;
    for (const auto& s : slices_)
      if (s.config.snssai == best->budget->snssai) st = &s;
    unsigned cap_prbs = ratio_prbs(st->config.policy.max_pct, total_prbs_);
    unsigned room = cap_prbs - (best->budget->granted_prbs + best->extra);
    unsigned give = static_cast<unsigned>(
        std::min<std::uint64_t>({pool, room, best_want}));
    unsigned used =
        fill_slice(by_slice[best->budget->snssai], give, slot_duration_s_);
    best->extra += used;
    best->used += used;
    pool -= give;
    if (used < give) break;  // demand estimate overshoot; stop cleanly
  }

  Allocation alloc;
  alloc.slot_index = slot_index;
  for (const auto& b : last_budgets_) {
    for (const auto& fr : by_slice[b.snssai]) {
      if (fr.prbs == 0) continue;
      std::uint64_t tb = std::min<std::uint64_t>(fr.flow->backlog_bytes,
                                                 fr.cap_bytes);
      if (tb == 0) continue;
      alloc.grants.push_back(
          {fr.flow->ue_id, fr.flow->pdu_id, b.snssai, fr.prbs, tb});
    }
  }
  return alloc;
}

void CellScheduler::update_pf_averages(const Allocation& alloc) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> served;
  std::map<Snssai, std::uint64_t> slice_served;
  for (const auto& s : slices_) slice_served[s.config.snssai] = 0;
  for (const auto& g : alloc.grants) {
    served[{g.ue_id, g.pdu_id}] += g.tb_bytes;
    slice_served[g.snssai] += g.tb_bytes;
  }
  for (auto& ue : ues_) {
    for (auto& f : ue.sessions) {
      auto it = served.find({f.ue_id, f.pdu_id});
      double bps = it == served.end()
                       ? 0.0
                       : it->second * 8.0 / slot_duration_s_;
      f.pf_avg_bps = (1.0 - pf_alpha_) * f.pf_avg_bps + pf_alpha_ * bps;
    }
  }
  for (auto& s : slices_) {
    double bps = slice_served[s.config.snssai] * 8.0 / slot_duration_s_;
    s.pf_avg_bps = (1.0 - pf_alpha_) * s.pf_avg_bps + pf_alpha_ * bps;
  }
}

PduSession* CellScheduler::find_session(std::uint32_t ue_id,
                                        std::uint32_t pdu_id) {
  for (auto& ue : ues_)
    if (ue.ue_id == ue_id)
      for (auto& f : ue.sessions)
        if (f.pdu_id == pdu_id) return &f;
  return nullptr;
}

void CellScheduler::establish_pdu(std::uint32_t ue_id, std::uint32_t pdu_id,
                                  const Snssai& snssai,
                                  const TrafficProfile& traffic) {
  UeContext* ue = nullptr;
  for (auto& u : ues_)
    if (u.ue_id == ue_id) ue = &u;
  if (ue == nullptr) throw SimError("UnknownUe", std::to_string(ue_id));
  if (pdu_id < kMinPduId || pdu_id > kMaxPduId)
    throw SimError("InvalidPduId", std::to_string(pdu_id));
  for (const auto& f : ue->sessions)
    if (f.pdu_id == pdu_id)
      throw SimError("DuplicatePduId", std::to_string(pdu_id));
  bool known = false;
  for (const auto& s : slices_)
    if (s.config.snssai == snssai) known = true;
  if (!known) throw SimError("UnknownSlice", snssai.to_string());
  std::set<Snssai> ue_slices;
  for (const auto& f : ue->sessions) ue_slices.insert(f.snssai);
  ue_slices.insert(snssai);
  if (ue_slices.size() > kMaxSlicesPerUe)
    throw SimError("TooManySlicesPerUe", std::to_string(ue_id));
  PduSession f;
  f.ue_id = ue_id;
  f.pdu_id = pdu_id;
  f.snssai = snssai;
  f.traffic = traffic;
  ue->sessions.push_back(f);
}

void CellScheduler::release_pdu(std::uint32_t ue_id, std::uint32_t pdu_id) {
  for (auto& ue : ues_) {
    if (ue.ue_id != ue_id) continue;
    auto it = std::find_if(ue.sessions.begin(), ue.sessions.end(),
                           [&](const PduSession& f) {
                             return f.pdu_id == pdu_id;
                           });
    if (it != ue.sessions.end()) {
      ue.sessions.erase(it);
      return;
    }
  }
  throw SimError("UnknownPdu", std::to_string(ue_id) + "/" +
                                   std::to_string(pdu_id));
}

void CellScheduler::set_traffic(std::uint32_t ue_id, std::uint32_t pdu_id,
                                const TrafficProfile& profile) {
  PduSession* f = find_session(ue_id, pdu_id);
  if (f == nullptr)
    throw SimError("UnknownPdu", std::to_string(ue_id) + "/" +
                                     std::to_string(pdu_id));
  f->traffic = profile;
}

}  // namespace slicesim
