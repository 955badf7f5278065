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

#ifndef SLICESIM_E2_SESSION_HPP
#define SLICESIM_E2_SESSION_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "slicesim/e2_codec.hpp"

namespace slicesim {

/// Reassembles length-prefixed frames from an ordered byte stream.
class FrameBuffer {
 public:
  void append(std::span<const std::uint8_t> bytes);

  /// Decodes the next complete frame, or returns kTruncated when more
  /// bytes are needed. Consumed bytes are removed from the buffer.
  DecodeResult next();

  std::size_t pending_bytes() const { return buf_.size(); }

 private:
  std::vector<std::uint8_t> buf_;
};

enum class E2Role { kGnb, kRic };

/// One side of an E2 connection over a reliable ordered byte stream.
/// Transport-agnostic: outbound frames go through the send callback,
/// inbound bytes come in via feed(). Enforces the setup handshake,
/// request/response transaction matching, and strictly increasing
/// transaction ids per sender.
class E2Session {
 public:
  using SendFn = std::function<void(const std::vector<std::uint8_t>&)>;
  using MessageHandler = std::function<void(const E2Message&)>;

  E2Session(E2Role role, SendFn send);

  /// gNB only: sends the E2SetupRequest that opens the session.
  void start_setup(E2SetupRequestBody body);

  /// Pushes transport bytes in; dispatches every complete, protocol-valid
  /// message to the handler. Throws SimError("ProtocolViolation") on
  /// malformed frames, unmatched responses, or non-increasing ids.
  void feed(std::span<const std::uint8_t> bytes);

  std::uint64_t send_request(MsgType type, E2Body body);
  void send_response(MsgType type, std::uint64_t transaction_id, E2Body body);

  bool setup_complete() const { return setup_done_; }
  E2Role role() const { return role_; }
  void set_handler(MessageHandler h) { handler_ = std::move(h); }

 private:
  void dispatch(const E2Message& msg);
  void send(const E2Message& msg);

  E2Role role_;
  SendFn send_;
  MessageHandler handler_;
  FrameBuffer rx_;
  std::uint64_t next_txn_ = 1;
  std::uint64_t last_sent_txn_ = 0;
  std::uint64_t last_peer_request_txn_ = 0;
  bool has_peer_request_ = false;
  std::map<std::uint64_t, MsgType> pending_;  // our requests awaiting reply
  bool setup_done_ = false;
};

bool is_request(MsgType t);
bool is_response(MsgType t);

/// Valid response types for a request type.
bool response_matches(MsgType request, MsgType response);

}  // namespace slicesim

#endif  // SLICESIM_E2_SESSION_HPP
