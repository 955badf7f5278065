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

#include "slicesim/phy_link.hpp"

#include <array>
#include <cmath>

namespace slicesim {

namespace {

// 3GPP TS 38.214 Table 5.1.3.1-1 (64QAM), MCS 0..28, bits/symbol.
constexpr std::array<double, 29> kSpectralEfficiency = {
    0.2344, 0.3066, 0.3770, 0.4902, 0.6016, 0.7402, 0.8770, 1.0273,
    1.1758, 1.3262, 1.3281, 1.4766, 1.6953, 1.9141, 2.1602, 2.4063,
    2.5703, 2.7305, 3.0293, 3.3223, 3.6094, 3.9023, 4.2129, 4.5234,
    4.8164, 5.1152, 5.3320, 5.5547, 5.8906};

constexpr int kSubcarriersPerPrb = 12;
constexpr int kSymbolsPerSlot = 14;

}  // namespace

double Numerology::slot_duration_ms() const {
  switch (scs_khz) {
    case 15:
      return 1.0;
    case 30:
      return 0.5;
    case 60:
      return 0.25;
    default:
      throw SimError("InvalidNumerology",
                     "unsupported SCS " + std::to_string(scs_khz) + " kHz");
  }
}

bool TrafficProfile::active_at(double now_s) const {
  if (kind == TrafficKind::kOff) return false;
  if (start_s && now_s < *start_s) return false;
  if (stop_s && now_s >= *stop_s) return false;
  return true;
}

double LinkModel::spectral_efficiency(int mcs) {
  if (mcs < 0 || mcs > kMaxMcs)
    throw SimError("InvalidMcs", "MCS " + std::to_string(mcs));
  return kSpectralEfficiency[static_cast<std::size_t>(mcs)];
}

unsigned bytes_per_prb(int mcs, const LinkModel& link) {
  double bits = kSubcarriersPerPrb * kSymbolsPerSlot *
                LinkModel::spectral_efficiency(mcs) *
                (1.0 - link.overhead_fraction);
  auto bytes = static_cast<unsigned>(std::floor(bits / 8.0));
  return bytes == 0 ? 1 : bytes;
}

std::uint64_t step_traffic(const TrafficProfile& profile,
                           std::uint64_t backlog_bytes, double now_s,
                           double slot_duration_s) {
  if (!profile.active_at(now_s)) return backlog_bytes;
  switch (profile.kind) {
    case TrafficKind::kFullBuffer:
      return kFullBufferBacklogBytes;
    case TrafficKind::kCbr: {
      auto add = static_cast<std::uint64_t>(
          std::llround(profile.rate_bps * slot_duration_s / 8.0));
      return backlog_bytes + add;
    }
    case TrafficKind::kOff:
      return backlog_bytes;
  }
  return backlog_bytes;
}

BlerResult apply_bler(std::uint64_t tb_bytes, double target_bler,
                      BlerMode mode, std::mt19937_64* rng) {
  if (target_bler < 0.0 || target_bler >= 1.0)
    throw SimError("InvalidBler", std::to_string(target_bler));
  BlerResult r;
  if (mode == BlerMode::kDeterministic) {
    r.delivered_bytes = static_cast<std::uint64_t>(
        std::llround(static_cast<double>(tb_bytes) * (1.0 - target_bler)));
  } else {
    if (rng == nullptr)
      throw SimError("MissingRng", "stochastic BLER needs a seeded generator");
    std::bernoulli_distribution fail(target_bler);
    r.delivered_bytes = fail(*rng) ? 0 : tb_bytes;
  }
  r.requeued_bytes = tb_bytes - r.delivered_bytes;
  return r;
}

}  // namespace slicesim
