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

#include "slicesim/kpm_store.hpp"

#include <cmath>

namespace slicesim {

std::vector<std::string> KpmStore::on_indication(
    const RicIndicationBody& body) {
  std::vector<std::string> rejects;
  std::uint64_t latest = 0;
  for (const auto& r : body.records) {
    SeriesKey key{r.snssai, r.rnti, r.pdu_id};
    auto& q = series_[key];
    if (!q.empty() && r.timestamp_ms <= q.back().timestamp_ms) {
      rejects.push_back("NonMonotonicTimestamp rnti=" +
                        std::to_string(r.rnti) + " pdu=" +
                        std::to_string(r.pdu_id) + " t=" +
                        std::to_string(r.timestamp_ms));
      continue;
    }
    q.push_back(r);
    seen_slices_.insert(r.snssai);
    latest = std::max(latest, r.timestamp_ms);
  }
  if (latest > 0) evict(latest);
  return rejects;
}

void KpmStore::evict(std::uint64_t latest_ms) {
  auto horizon = static_cast<std::uint64_t>(
      std::llround(retention_s_ * 1000.0));
  std::uint64_t cutoff = latest_ms > horizon ? latest_ms - horizon : 0;
  for (auto it = series_.begin(); it != series_.end();) {
    auto& q = it->second;
    while (!q.empty() && q.front().timestamp_ms < cutoff) q.pop_front();
    if (q.empty())
      it = series_.erase(it);
    else
      ++it;
  }
}

double KpmStore::avg_slice_throughput(const Snssai& snssai,
                                      std::uint64_t now_ms,
                                      double window_s) const {
  if (window_s <= 0.0) throw SimError("InvalidWindow", format_real(window_s));
  if (!seen_slices_.contains(snssai))
    throw SimError("UnknownSlice", snssai.to_string());
  auto span_ms = static_cast<std::uint64_t>(std::llround(window_s * 1000.0));
  std::uint64_t lo = now_ms > span_ms ? now_ms - span_ms : 0;  // exclusive
  std::map<std::uint64_t, double> per_timestamp;
  for (const auto& [key, q] : series_) {
    if (key.snssai != snssai) continue;
    for (const auto& r : q) {
      if (r.timestamp_ms > lo && r.timestamp_ms <= now_ms)
        per_timestamp[r.timestamp_ms] += r.dl_thp_bps;
    }
  }
  if (per_timestamp.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [t, v] : per_timestamp) sum += v;
  return sum / static_cast<double>(per_timestamp.size());
}

std::size_t KpmStore::record_count() const {
  std::size_t n = 0;
  for (const auto& [k, q] : series_) n += q.size();
  return n;
}

const std::deque<KpmRecord>* KpmStore::series(const SeriesKey& key) const {
  auto it = series_.find(key);
  return it == series_.end() ? nullptr : &it->second;
}

}  // namespace slicesim
