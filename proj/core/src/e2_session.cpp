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

#include "slicesim/e2_session.hpp"

namespace slicesim {

void FrameBuffer::append(std::span<const std::uint8_t> bytes) {
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

DecodeResult FrameBuffer::next() {
  DecodeResult res = decode(buf_);
  if (res.status == DecodeStatus::kOk)
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<long>(res.consumed));
  return res;
}

bool is_request(MsgType t) {
  switch (t) {
    case MsgType::kE2SetupRequest:
    case MsgType::kRicSubscriptionRequest:
    case MsgType::kRicControlRequest:
    case MsgType::kRicIndication:  // fire-and-forget, still a sender message
      return true;
    default:
      return false;
  }
}

bool is_response(MsgType t) { return !is_request(t); }

bool response_matches(MsgType request, MsgType response) {
  switch (request) {
    case MsgType::kE2SetupRequest:
      return response == MsgType::kE2SetupResponse;
    case MsgType::kRicSubscriptionRequest:
      return response == MsgType::kRicSubscriptionResponse;
    case MsgType::kRicControlRequest:
      return response == MsgType::kRicControlAck ||
             response == MsgType::kRicControlFailure;
    default:
      return false;
  }
}

E2Session::E2Session(E2Role role, SendFn send)
    : role_(role), send_(std::move(send)) {}

void E2Session::send(const E2Message& msg) { send_(encode(msg)); }

void E2Session::start_setup(E2SetupRequestBody body) {
  if (role_ != E2Role::kGnb)
    throw SimError("ProtocolViolation", "only the gNB initiates setup");
  send_request(MsgType::kE2SetupRequest, std::move(body));
}

std::uint64_t E2Session::send_request(MsgType type, E2Body body) {
  if (!is_request(type))
    throw SimError("ProtocolViolation",
                   std::string("not a request type: ") + to_string(type));
  E2Message msg{type, next_txn_++, std::move(body)};
  last_sent_txn_ = msg.transaction_id;
  if (type != MsgType::kRicIndication) pending_[msg.transaction_id] = type;
  send(msg);
  return msg.transaction_id;
}

void E2Session::send_response(MsgType type, std::uint64_t transaction_id,
                              E2Body body) {
  if (!is_response(type))
    throw SimError("ProtocolViolation",
                   std::string("not a response type: ") + to_string(type));
  send(E2Message{type, transaction_id, std::move(body)});
  if (role_ == E2Role::kRic && type == MsgType::kE2SetupResponse)
    setup_done_ = true;
}

void E2Session::feed(std::span<const std::uint8_t> bytes) {
  rx_.append(bytes);
  for (;;) {
    DecodeResult res = rx_.next();
    if (res.status == DecodeStatus::kTruncated) return;
    if (res.status != DecodeStatus::kOk)
      throw SimError("ProtocolViolation", "bad frame: " + res.error);
    dispatch(*res.message);
  }
}

void E2Session::dispatch(const E2Message& msg) {
  if (is_response(msg.msg_type)) {
    auto it = pending_.find(msg.transaction_id);
    if (it == pending_.end())
      throw SimError("ProtocolViolation",
                     "response with unmatched transaction_id " +
                         std::to_string(msg.transaction_id));
    if (!response_matches(it->second, msg.msg_type))
      throw SimError("ProtocolViolation",
                     std::string("unexpected response type ") +
                         to_string(msg.msg_type));
    if (it->second == MsgType::kE2SetupRequest) setup_done_ = true;
    pending_.erase(it);
  } else {
    if (has_peer_request_ && msg.transaction_id <= last_peer_request_txn_)
      throw SimError("ProtocolViolation",
                     "transaction ids must strictly increase");
    last_peer_request_txn_ = msg.transaction_id;
    has_peer_request_ = true;
    if (role_ == E2Role::kRic && msg.msg_type == MsgType::kE2SetupRequest) {
      // handled by the runtime, which must respond
    } else if (!setup_done_ && msg.msg_type != MsgType::kE2SetupRequest) {
      throw SimError("ProtocolViolation", "message before setup completed");
    }
  }
  if (handler_) handler_(msg);
}

}  // namespace slicesim
