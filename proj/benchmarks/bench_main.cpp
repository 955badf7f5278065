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

#include <benchmark/benchmark.h>

#include "slicesim/e2_codec.hpp"
#include "slicesim/mac_scheduler.hpp"

namespace {

using namespace slicesim;

CellScheduler make_cell(unsigned total_prbs, int ue_count) {
  std::vector<SliceConfig> slices = {
      {{1, std::nullopt}, {0, 10, 100}},
      {{2, std::nullopt}, {0, 10, 100}},
  };
  std::vector<UeContext> ues;
  for (int i = 0; i < ue_count; ++i) {
    UeContext ue;
    ue.ue_id = static_cast<std::uint32_t>(i + 1);
    ue.rnti = static_cast<std::uint32_t>(i + 1);
    ue.mcs = 27;
    PduSession s;
    s.ue_id = ue.ue_id;
    s.pdu_id = 1;
    s.snssai = {static_cast<std::uint8_t>(1 + i % 2), std::nullopt};
    s.traffic.kind = TrafficKind::kFullBuffer;
    s.backlog_bytes = kFullBufferBacklogBytes;
    ue.sessions.push_back(s);
    ues.push_back(ue);
  }
  return CellScheduler(slices, ues, total_prbs, LinkModel{});
}

void BM_ScheduleSlot(benchmark::State& state) {
  auto cell = make_cell(static_cast<unsigned>(state.range(0)),
                        static_cast<int>(state.range(1)));
  std::uint64_t slot = 0;
  for (auto _ : state) {
    for (auto& ue : cell.ues())
      for (auto& f : ue.sessions) f.backlog_bytes = kFullBufferBacklogBytes;
    auto alloc = cell.schedule_slot(slot++);
    cell.update_pf_averages(alloc);
    benchmark::DoNotOptimize(alloc);
  }
}
BENCHMARK(BM_ScheduleSlot)->Args({106, 4})->Args({106, 16})->Args({273, 16});

E2Message indication_message(int records) {
  RicIndicationBody body;
  body.ran_node_id = "gnb-0";
  for (int i = 0; i < records; ++i) {
    KpmRecord r;
    r.timestamp_ms = 500;
    r.rnti = static_cast<std::uint32_t>(i + 1);
    r.snssai = {static_cast<std::uint8_t>(1 + i % 2), std::nullopt};
    r.pdu_id = 1;
    r.mcs = 27;
    r.bler = 0.1;
    r.dl_thp_bps = 12345678.5;
    r.dl_prbs = 5300;
    body.records.push_back(r);
  }
  return {MsgType::kRicIndication, 7, body};
}

void BM_Encode(benchmark::State& state) {
  auto msg = indication_message(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto bytes = encode(msg);
    benchmark::DoNotOptimize(bytes);
  }
}
BENCHMARK(BM_Encode)->Arg(2)->Arg(16)->Arg(64);

void BM_Decode(benchmark::State& state) {
  auto bytes = encode(indication_message(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    auto res = decode(bytes);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_Decode)->Arg(2)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
