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
//
// E2-style application protocol codec. Frames are a 4-byte big-endian
// length followed by canonical UTF-8 JSON: keys sorted, no insignificant
// whitespace, integers undecorated, reals with at most 6 fractional
// digits. Encoding is injective on valid messages; decode is strict and
// never throws on arbitrary input.

#ifndef SLICESIM_E2_CODEC_HPP
#define SLICESIM_E2_CODEC_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "slicesim/slicing_model.hpp"

namespace slicesim {

enum class MsgType {
  kE2SetupRequest,
  kE2SetupResponse,
  kRicSubscriptionRequest,
  kRicSubscriptionResponse,
  kRicIndication,
  kRicControlRequest,
  kRicControlAck,
  kRicControlFailure,
};

const char* to_string(MsgType t);
std::optional<MsgType> msg_type_from_string(const std::string& s);

struct E2SetupRequestBody {
  std::string ran_node_id;
  unsigned total_prbs = 0;
  std::vector<SliceConfig> slices;
  bool operator==(const E2SetupRequestBody&) const = default;
};

struct E2SetupResponseBody {
  std::string ric_id;
  bool operator==(const E2SetupResponseBody&) const = default;
};

struct RicSubscriptionRequestBody {
  std::uint64_t report_period_ms = 500;
  bool operator==(const RicSubscriptionRequestBody&) const = default;
};

struct RicIndicationBody {
  std::string ran_node_id;
  std::vector<KpmRecord> records;  // non-empty
  bool operator==(const RicIndicationBody&) const = default;
};

struct RicControlBody {
  std::string ran_node_id;
  std::vector<SliceConfig> entries;  // non-empty, distinct SNSSAIs
  bool operator==(const RicControlBody&) const = default;
};

struct RicControlFailureBody {
  std::vector<std::string> violations;
  bool operator==(const RicControlFailureBody&) const = default;
};

using E2Body =
    std::variant<std::monostate, E2SetupRequestBody, E2SetupResponseBody,
                 RicSubscriptionRequestBody, RicIndicationBody, RicControlBody,
                 RicControlFailureBody>;

struct E2Message {
  MsgType msg_type = MsgType::kRicControlAck;
  std::uint64_t transaction_id = 0;
  E2Body body;
  bool operator==(const E2Message&) const = default;
};

constexpr std::size_t kFrameHeaderBytes = 4;
constexpr std::size_t kMaxFramePayloadBytes = 16u << 20;

/// Serializes one message to a length-prefixed canonical frame.
/// Throws SimError("InvalidMessage") if the message violates its type
/// invariants.
std::vector<std::uint8_t> encode(const E2Message& msg);

enum class DecodeStatus { kOk, kTruncated, kMalformed, kUnknownType };

struct DecodeResult {
  DecodeStatus status = DecodeStatus::kMalformed;
  std::size_t consumed = 0;   // bytes of one whole frame on kOk
  std::size_t needed = 0;     // minimum total bytes on kTruncated
  std::size_t offset = 0;     // error position on kMalformed
  std::string error;
  std::optional<E2Message> message;
};

/// Parses one frame from the front of `bytes`. Structured errors, never
/// throws or crashes regardless of input.
DecodeResult decode(std::span<const std::uint8_t> bytes);

/// Canonical real formatting shared with the CSV writers: at most six
/// fractional digits, trailing zeros stripped.
std::string format_real(double v);

}  // namespace slicesim

#endif  // SLICESIM_E2_CODEC_HPP
