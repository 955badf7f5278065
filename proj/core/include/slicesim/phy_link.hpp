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

#ifndef SLICESIM_PHY_LINK_HPP
#define SLICESIM_PHY_LINK_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace slicesim {

/// Thrown for hard contract violations across the library; `code` is a
/// stable machine-readable identifier, what() carries the detail.
class SimError : public std::runtime_error {
 public:
  SimError(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

constexpr int kMaxMcs = 28;

/// OFDM numerology: subcarrier spacing determines slot duration
/// (slot = 1/2^mu ms, scs = 15*2^mu kHz).
struct Numerology {
  unsigned scs_khz = 30;
  unsigned total_prbs = 106;

  double slot_duration_ms() const;

  // 40 MHz and 100 MHz carriers at 30 kHz SCS.
  static Numerology n106_40mhz() { return {30, 106}; }
  static Numerology n273_100mhz() { return {30, 273}; }
};

enum class TrafficKind { kFullBuffer, kCbr, kOff };

struct TrafficProfile {
  TrafficKind kind = TrafficKind::kOff;
  double rate_bps = 0.0;  // cbr only
  std::optional<double> start_s;
  std::optional<double> stop_s;

  bool active_at(double now_s) const;
  bool operator==(const TrafficProfile&) const = default;
};

// Full-buffer backlog pin. Large enough to saturate any supported cell
// for many slots.
constexpr std::uint64_t kFullBufferBacklogBytes = 1u << 20;

/// MCS index -> downlink capacity. Spectral efficiency per MCS with a flat
/// overhead fraction for control/reference signals.
struct LinkModel {
  double overhead_fraction = 0.14;

  static double spectral_efficiency(int mcs);
};

/// Data bytes one PRB carries in one slot at the given MCS (never 0).
unsigned bytes_per_prb(int mcs, const LinkModel& link);

/// Advance one flow's backlog by one slot. Returns the new backlog.
std::uint64_t step_traffic(const TrafficProfile& profile,
                           std::uint64_t backlog_bytes, double now_s,
                           double slot_duration_s);

enum class BlerMode { kDeterministic, kStochastic };

struct BlerResult {
  std::uint64_t delivered_bytes = 0;
  std::uint64_t requeued_bytes = 0;
};

/// Per-TB error model. Deterministic mode scales the TB; stochastic mode
/// fails whole TBs from the given generator.
BlerResult apply_bler(std::uint64_t tb_bytes, double target_bler,
                      BlerMode mode, std::mt19937_64* rng = nullptr);

}  // namespace slicesim

#endif  // SLICESIM_PHY_LINK_HPP
