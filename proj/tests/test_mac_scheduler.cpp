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

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "slicesim/mac_scheduler.hpp"

using namespace slicesim;

namespace {

// Literal restatement of the budgeting stages, one PRB at a time where the
// production code uses bulk arithmetic. Kept deliberately naive.
std::vector<SliceBudget> budget_oracle(
    const std::vector<SliceState>& slices,
    const std::map<Snssai, std::uint64_t>& demand_map, unsigned total_prbs) {
  struct S {
    Snssai id;
    std::uint64_t demand;
    unsigned ded, cap, min;
    unsigned granted = 0;
    double pf;
  };
  std::vector<S> v;
  for (const auto& s : slices) {
    auto it = demand_map.find(s.config.snssai);
    v.push_back({s.config.snssai,
                 it == demand_map.end() ? 0 : it->second,
                 static_cast<unsigned>(s.config.policy.dedicated_pct *
                                       static_cast<std::uint64_t>(total_prbs) /
                                       100),
                 static_cast<unsigned>(s.config.policy.max_pct *
                                       static_cast<std::uint64_t>(total_prbs) /
                                       100),
                 static_cast<unsigned>(s.config.policy.min_pct *
                                       static_cast<std::uint64_t>(total_prbs) /
                                       100),
                 0, s.pf_avg_bps});
  }
  std::sort(v.begin(), v.end(), [](const S& a, const S& b) { return a.id < b.id; });

  unsigned left = total_prbs;
  for (auto& s : v) {
    s.granted = s.ded;
    left -= s.ded;
  }

  std::vector<std::uint64_t> want(v.size(), 0);
  std::uint64_t want_total = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].demand == 0) continue;
    std::uint64_t t = std::min<std::uint64_t>(
        {v[i].min, v[i].demand, v[i].cap});
    if (t > v[i].granted) want[i] = t - v[i].granted;
    want_total += want[i];
  }
  if (want_total <= left) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i].granted += static_cast<unsigned>(want[i]);
      left -= static_cast<unsigned>(want[i]);
    }
  } else {
    std::vector<std::uint64_t> floor_q(v.size()), frac(v.size());
    unsigned handed = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      floor_q[i] = left * want[i] / want_total;
      frac[i] = left * want[i] % want_total;
      handed += static_cast<unsigned>(floor_q[i]);
    }
    unsigned extra = left - handed;
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (frac[a] != frac[b]) return frac[a] > frac[b];
      return v[a].id < v[b].id;
    });
    for (std::size_t k = 0; k < idx.size() && extra > 0; ++k) {
      if (frac[idx[k]] == 0) break;
      ++floor_q[idx[k]];
      --extra;
    }
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i].granted += static_cast<unsigned>(floor_q[i]);
    left = extra;
  }

  // Stage 3, one PRB per iteration.
  for (; left > 0; --left) {
    S* pick = nullptr;
    double pick_metric = -1.0;
    for (auto& s : v) {
      if (s.granted >= s.cap || s.demand <= s.granted) continue;
      double m = static_cast<double>(s.demand) / std::max(s.pf, kPfEpsilonBps);
      if (pick == nullptr || m > pick_metric) {
        pick = &s;
        pick_metric = m;
      }
    }
    if (pick == nullptr) break;
    pick->granted += 1;
  }

  std::vector<SliceBudget> out;
  for (const auto& s : v) out.push_back({s.id, s.ded, s.granted});
  return out;
}

SliceState slice(std::uint8_t sst, int ded, int min, int max, double pf = 0.0) {
  return {{{sst, std::nullopt}, {ded, min, max}}, pf};
}

UeContext full_buffer_ue(std::uint32_t id, std::uint8_t sst, int mcs = 9,
                         int pdus = 1) {
  UeContext ue;
  ue.ue_id = id;
  ue.rnti = id;
  ue.mcs = mcs;
  for (int p = 1; p <= pdus; ++p) {
    PduSession f;
    f.ue_id = id;
    f.pdu_id = static_cast<std::uint32_t>(p);
    f.snssai = {sst, std::nullopt};
    f.traffic.kind = TrafficKind::kFullBuffer;
    f.backlog_bytes = kFullBufferBacklogBytes;
    ue.sessions.push_back(f);
  }
  return ue;
}

}  // namespace

TEST_CASE("budget stages, worked examples") {
  SUBCASE("dedicated, guarantee, then pool up to the cap") {
    std::vector<SliceState> s = {slice(1, 20, 50, 80), slice(2, 10, 20, 60)};
    std::map<Snssai, std::uint64_t> d = {{{1, std::nullopt}, 100},
                                         {{2, std::nullopt}, 15}};
    auto b = compute_slice_budgets(s, d, 100);
    REQUIRE(b.size() == 2);
    CHECK(b[0].dedicated_prbs == 20);
    CHECK(b[0].granted_prbs == 80);  // capped at floor(0.80 * 100)
    CHECK(b[1].dedicated_prbs == 10);
    CHECK(b[1].granted_prbs == 15);  // demand-limited
  }
  SUBCASE("guarantee shortfall splits proportionally") {
    std::vector<SliceState> s = {slice(1, 0, 60, 100), slice(2, 0, 60, 100)};
    std::map<Snssai, std::uint64_t> d = {{{1, std::nullopt}, 10},
                                         {{2, std::nullopt}, 10}};
    auto b = compute_slice_budgets(s, d, 10);
    CHECK(b[0].granted_prbs == 5);
    CHECK(b[1].granted_prbs == 5);
  }
  SUBCASE("largest remainder breaks the rounding") {
    std::vector<SliceState> s = {slice(1, 0, 50, 100), slice(2, 0, 20, 100),
                                 slice(3, 0, 70, 100)};
    std::map<Snssai, std::uint64_t> d = {{{1, std::nullopt}, 10},
                                         {{2, std::nullopt}, 10},
                                         {{3, std::nullopt}, 10}};
    // Targets 5, 2, 7 against 10 PRBs: quotas 50/14, 20/14, 70/14 ->
    // floors 3, 1, 5 and the one leftover goes to the largest remainder.
    auto b = compute_slice_budgets(s, d, 10);
    CHECK(b[0].granted_prbs == 4);
    CHECK(b[1].granted_prbs == 1);
    CHECK(b[2].granted_prbs == 5);
  }
  SUBCASE("idle dedicated stays reserved") {
    std::vector<SliceState> s = {slice(1, 50, 50, 100), slice(2, 0, 0, 100)};
    std::map<Snssai, std::uint64_t> d = {{{1, std::nullopt}, 0},
                                         {{2, std::nullopt}, 100}};
    auto b = compute_slice_budgets(s, d, 10);
    CHECK(b[0].granted_prbs == 5);  // reserved but unused
    CHECK(b[1].granted_prbs == 5);
  }
  SUBCASE("zero cell size throws") {
    std::vector<SliceState> s = {slice(1, 0, 0, 100)};
    CHECK_THROWS_AS(compute_slice_budgets(s, {}, 0), SimError);
  }
}

TEST_CASE("budgets match the per-PRB oracle on random configurations") {
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<unsigned> n_dist(8, 24);
  std::uniform_int_distribution<int> pct(0, 10);
  std::uniform_int_distribution<int> d_kind(0, 2);
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> pf(0.0, 1e6);

  int cases = 0;
  while (cases < 3000) {
    unsigned n = n_dist(rng);
    int k = count(rng);
    std::vector<SliceState> slices;
    std::map<Snssai, std::uint64_t> demands;
    int ded_sum = 0;
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      int a = pct(rng) * 10, b = pct(rng) * 10, c = pct(rng) * 10;
      int lo = std::min({a, b, c}), hi = std::max({a, b, c});
      int mid = a + b + c - lo - hi;
      ded_sum += lo;
      if (ded_sum > 100) {
        ok = false;
        break;
      }
      Snssai id{static_cast<std::uint8_t>(i + 1), std::nullopt};
      slices.push_back({{id, {lo, mid, hi}}, pf(rng)});
      std::uint64_t dv[] = {0, n / 2, n};
      demands[id] = dv[d_kind(rng)];
    }
    if (!ok) continue;
    ++cases;

    auto got = compute_slice_budgets(slices, demands, n);
    auto want = budget_oracle(slices, demands, n);
    REQUIRE(got.size() == want.size());
    unsigned total = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].snssai == want[i].snssai);
      CHECK(got[i].dedicated_prbs == want[i].dedicated_prbs);
      CHECK(got[i].granted_prbs == want[i].granted_prbs);
      total += got[i].granted_prbs;
    }
    CHECK(total <= n);
  }
}

TEST_CASE("per-prb fairness between identical flows") {
  // One slice, two identical full-buffer flows: cumulative PRBs converge
  // to an even split.
  std::vector<SliceConfig> slices = {{{1, std::nullopt}, {0, 0, 100}}};
  std::vector<UeContext> ues = {full_buffer_ue(1, 1), full_buffer_ue(2, 1)};
  CellScheduler cell(slices, ues, 20, LinkModel{});

  std::map<std::uint32_t, std::uint64_t> prbs;
  for (std::uint64_t slot = 0; slot < 1000; ++slot) {
    for (auto& ue : cell.ues())
      for (auto& f : ue.sessions) f.backlog_bytes = kFullBufferBacklogBytes;
    auto alloc = cell.schedule_slot(slot);
    for (const auto& g : alloc.grants) prbs[g.ue_id] += g.prbs;
    cell.update_pf_averages(alloc);
  }
  CHECK(prbs[1] + prbs[2] == 20000);
  CHECK(std::abs(static_cast<long>(prbs[1]) - 10000) <= 200);  // within 2%
}

TEST_CASE("unused budget is redistributed, idle dedicated is not") {
  std::vector<SliceConfig> slices = {{{1, std::nullopt}, {50, 50, 100}},
                                     {{2, std::nullopt}, {0, 0, 100}}};
  UeContext idle = full_buffer_ue(1, 1);
  idle.sessions[0].backlog_bytes = 0;
  idle.sessions[0].traffic.kind = TrafficKind::kOff;
  std::vector<UeContext> ues = {idle, full_buffer_ue(2, 2)};
  CellScheduler cell(slices, ues, 10, LinkModel{});

  auto alloc = cell.schedule_slot(0);
  unsigned slice2 = 0;
  for (const auto& g : alloc.grants) {
    CHECK(g.snssai == Snssai{2, std::nullopt});
    slice2 += g.prbs;
  }
  CHECK(slice2 == 5);  // the other 5 stay pinned to the idle dedicated share
}

TEST_CASE("grants cover backlog exactly when demand is small") {
  std::vector<SliceConfig> slices = {{{1, std::nullopt}, {0, 0, 100}}};
  UeContext ue = full_buffer_ue(1, 1, 0);  // mcs 0 -> 4 bytes per PRB
  ue.sessions[0].traffic.kind = TrafficKind::kOff;
  ue.sessions[0].backlog_bytes = 6;
  CellScheduler cell(slices, {ue}, 10, LinkModel{});

  CHECK(cell.demand_prbs({1, std::nullopt}) == 2);  // ceil(6 / 4)
  auto alloc = cell.schedule_slot(0);
  REQUIRE(alloc.grants.size() == 1);
  CHECK(alloc.grants[0].prbs == 2);
  CHECK(alloc.grants[0].tb_bytes == 6);  // min(backlog, 2 * 4)
}

TEST_CASE("pf averages follow the ewma") {
  std::vector<SliceConfig> slices = {{{1, std::nullopt}, {0, 0, 100}}};
  std::vector<UeContext> ues = {full_buffer_ue(1, 1, 0)};
  CellScheduler cell(slices, ues, 2, LinkModel{});

  auto alloc = cell.schedule_slot(0);
  REQUIRE(alloc.grants.size() == 1);
  CHECK(alloc.grants[0].tb_bytes == 8);  // 2 PRBs at 4 bytes
  cell.update_pf_averages(alloc);
  // served 8 bytes in 0.5 ms -> 128 kbit/s; EWMA with alpha 0.01.
  CHECK(cell.ues()[0].sessions[0].pf_avg_bps == doctest::Approx(1280.0));
  CHECK(cell.slices()[0].pf_avg_bps == doctest::Approx(1280.0));

  Allocation empty;
  cell.update_pf_averages(empty);
  CHECK(cell.ues()[0].sessions[0].pf_avg_bps == doctest::Approx(1267.2));
}

TEST_CASE("policy replacement") {
  std::vector<SliceConfig> slices = {{{1, std::nullopt}, {0, 10, 100}},
                                     {{2, std::nullopt}, {40, 40, 100}}};
  std::vector<UeContext> ues = {full_buffer_ue(1, 1)};
  CellScheduler cell(slices, ues, 100, LinkModel{});

  cell.apply_rrm_policy({1, std::nullopt}, {10, 20, 90});
  CHECK(cell.slices()[0].config.policy == RrmPolicyRatio{10, 20, 90});

  CHECK_THROWS_AS(cell.apply_rrm_policy({3, std::nullopt}, {0, 0, 100}),
                  SimError);
  CHECK_THROWS_AS(cell.apply_rrm_policy({1, std::nullopt}, {0, 90, 80}),
                  SimError);
  // Replacement may not push the dedicated sum over the cell.
  CHECK_THROWS_AS(cell.apply_rrm_policy({1, std::nullopt}, {70, 70, 100}),
                  SimError);
  CHECK(cell.slices()[0].config.policy == RrmPolicyRatio{10, 20, 90});
}

TEST_CASE("session lifecycle guards") {
  std::vector<SliceConfig> slices = {{{1, std::nullopt}, {0, 0, 100}}};
  std::vector<UeContext> ues = {full_buffer_ue(1, 1)};
  CellScheduler cell(slices, ues, 10, LinkModel{});
  TrafficProfile off{TrafficKind::kOff, 0.0, std::nullopt, std::nullopt};

  CHECK_THROWS_AS(cell.establish_pdu(9, 2, {1, std::nullopt}, off), SimError);
  CHECK_THROWS_AS(cell.establish_pdu(1, 0, {1, std::nullopt}, off), SimError);
  CHECK_THROWS_AS(cell.establish_pdu(1, 16, {1, std::nullopt}, off), SimError);
  CHECK_THROWS_AS(cell.establish_pdu(1, 1, {1, std::nullopt}, off), SimError);
  CHECK_THROWS_AS(cell.establish_pdu(1, 2, {7, std::nullopt}, off), SimError);
  cell.establish_pdu(1, 2, {1, std::nullopt}, off);
  CHECK(cell.ues()[0].sessions.size() == 2);
  cell.release_pdu(1, 2);
  CHECK(cell.ues()[0].sessions.size() == 1);
  CHECK_THROWS_AS(cell.release_pdu(1, 2), SimError);
  CHECK_THROWS_AS(cell.set_traffic(1, 2, off), SimError);
}

TEST_CASE("constructor rejects inadmissible configurations") {
  std::vector<SliceConfig> dup = {{{1, std::nullopt}, {0, 0, 100}},
                                  {{1, std::nullopt}, {0, 0, 100}}};
  CHECK_THROWS_AS(CellScheduler(dup, {}, 10, LinkModel{}), SimError);
  std::vector<SliceConfig> one = {{{1, std::nullopt}, {0, 0, 100}}};
  CHECK_THROWS_AS(CellScheduler(one, {}, 0, LinkModel{}), SimError);
  CHECK_THROWS_AS(CellScheduler(one, {}, 10, LinkModel{}, 0.0005, 0.0),
                  SimError);
}
