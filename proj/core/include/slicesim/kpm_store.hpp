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

#ifndef SLICESIM_KPM_STORE_HPP
#define SLICESIM_KPM_STORE_HPP

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "slicesim/e2_codec.hpp"

namespace slicesim {

struct SeriesKey {
  Snssai snssai;
  std::uint32_t rnti = 0;
  std::uint32_t pdu_id = 0;
  auto operator<=>(const SeriesKey&) const = default;
};

/// In-process time-series store with the query semantics the slicing xApp
/// needs. Timestamps are strictly increasing per series; records older
/// than the retention window are evicted as new ones arrive. Single
/// writer; queries never mutate.
class KpmStore {
 public:
  explicit KpmStore(double retention_window_s = 60.0)
      : retention_s_(retention_window_s) {}

  /// Appends every record of an indication to its series. Records with a
  /// non-monotonic timestamp are rejected individually; the rejects are
  /// returned as "NonMonotonicTimestamp" details, the rest are kept.
  std::vector<std::string> on_indication(const RicIndicationBody& body);

  /// Mean slice throughput over (now - window, now]: per-timestamp sums
  /// across the slice's flows, averaged over the distinct timestamps.
  /// Returns 0 when the window holds no records. Throws
  /// SimError("UnknownSlice") for a slice never seen.
  double avg_slice_throughput(const Snssai& snssai, std::uint64_t now_ms,
                              double window_s) const;

  bool slice_seen(const Snssai& snssai) const {
    return seen_slices_.contains(snssai);
  }
  std::size_t series_count() const { return series_.size(); }
  std::size_t record_count() const;
  const std::deque<KpmRecord>* series(const SeriesKey& key) const;

 private:
  void evict(std::uint64_t latest_ms);

  std::map<SeriesKey, std::deque<KpmRecord>> series_;
  std::set<Snssai> seen_slices_;
  double retention_s_;
};

}  // namespace slicesim

#endif  // SLICESIM_KPM_STORE_HPP
