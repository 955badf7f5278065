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

#include <vector>

#include "slicesim/e2_session.hpp"

using namespace slicesim;

namespace {

E2SetupRequestBody setup_body() {
  E2SetupRequestBody b;
  b.ran_node_id = "gnb-0";
  b.total_prbs = 106;
  b.slices = {{{1, std::nullopt}, {0, 10, 90}}};
  return b;
}

struct Pipe {
  std::vector<std::uint8_t> bytes;
  void push(const std::vector<std::uint8_t>& b) {
    bytes.insert(bytes.end(), b.begin(), b.end());
  }
  std::vector<std::uint8_t> drain() {
    std::vector<std::uint8_t> out;
    out.swap(bytes);
    return out;
  }
};

}  // namespace

TEST_CASE("frame buffer reassembles byte-dribbled frames") {
  auto frame = encode({MsgType::kRicControlAck, 7, std::monostate{}});
  FrameBuffer fb;
  for (std::size_t i = 0; i + 1 < frame.size(); ++i) {
    fb.append(std::span(&frame[i], 1));
    CHECK(fb.next().status == DecodeStatus::kTruncated);
  }
  fb.append(std::span(&frame.back(), 1));
  auto res = fb.next();
  REQUIRE(res.status == DecodeStatus::kOk);
  CHECK(res.message->msg_type == MsgType::kRicControlAck);
  CHECK(fb.pending_bytes() == 0);
}

TEST_CASE("frame buffer yields multiple frames from one append") {
  auto a = encode({MsgType::kRicControlAck, 7, std::monostate{}});
  auto b = encode({MsgType::kRicControlAck, 9, std::monostate{}});
  std::vector<std::uint8_t> both = a;
  both.insert(both.end(), b.begin(), b.end());
  FrameBuffer fb;
  fb.append(both);
  CHECK(fb.next().message->transaction_id == 7);
  CHECK(fb.next().message->transaction_id == 9);
  CHECK(fb.next().status == DecodeStatus::kTruncated);
}

TEST_CASE("request and response classification") {
  CHECK(is_request(MsgType::kE2SetupRequest));
  CHECK(is_request(MsgType::kRicIndication));
  CHECK(is_response(MsgType::kRicControlAck));
  CHECK(response_matches(MsgType::kRicControlRequest,
                         MsgType::kRicControlFailure));
  CHECK(response_matches(MsgType::kE2SetupRequest, MsgType::kE2SetupResponse));
  CHECK_FALSE(
      response_matches(MsgType::kE2SetupRequest, MsgType::kRicControlAck));
}

TEST_CASE("setup handshake completes both sides") {
  Pipe to_ric, to_gnb;
  E2Session gnb(E2Role::kGnb, [&](const auto& b) { to_ric.push(b); });
  E2Session ric(E2Role::kRic, [&](const auto& b) { to_gnb.push(b); });
  ric.set_handler([&](const E2Message& m) {
    if (m.msg_type == MsgType::kE2SetupRequest)
      ric.send_response(MsgType::kE2SetupResponse, m.transaction_id,
                        E2SetupResponseBody{"ric-0"});
  });

  CHECK_FALSE(gnb.setup_complete());
  gnb.start_setup(setup_body());
  ric.feed(to_ric.drain());
  CHECK(ric.setup_complete());
  gnb.feed(to_gnb.drain());
  CHECK(gnb.setup_complete());
}

TEST_CASE("only the gNB initiates setup") {
  E2Session ric(E2Role::kRic, [](const auto&) {});
  CHECK_THROWS_AS(ric.start_setup(setup_body()), SimError);
}

TEST_CASE("responses must match a pending request") {
  E2Session gnb(E2Role::kGnb, [](const auto&) {});
  gnb.start_setup(setup_body());

  SUBCASE("unmatched transaction id") {
    auto bogus = encode({MsgType::kE2SetupResponse, 42,
                         E2SetupResponseBody{"ric-0"}});
    CHECK_THROWS_AS(gnb.feed(bogus), SimError);
  }
  SUBCASE("wrong response type") {
    auto wrong = encode({MsgType::kRicControlAck, 1, std::monostate{}});
    CHECK_THROWS_AS(gnb.feed(wrong), SimError);
  }
  SUBCASE("matching response settles the transaction") {
    auto ok = encode({MsgType::kE2SetupResponse, 1,
                      E2SetupResponseBody{"ric-0"}});
    gnb.feed(ok);
    CHECK(gnb.setup_complete());
    CHECK_THROWS_AS(gnb.feed(ok), SimError);  // second reply is unmatched
  }
}

TEST_CASE("peer request ids must strictly increase") {
  E2Session ric(E2Role::kRic, [](const auto&) {});
  ric.set_handler([&](const E2Message& m) {
    if (m.msg_type == MsgType::kE2SetupRequest)
      ric.send_response(MsgType::kE2SetupResponse, m.transaction_id,
                        E2SetupResponseBody{"ric-0"});
  });
  auto setup = encode({MsgType::kE2SetupRequest, 5, setup_body()});
  ric.feed(setup);
  auto replay = encode({MsgType::kE2SetupRequest, 5, setup_body()});
  CHECK_THROWS_AS(ric.feed(replay), SimError);
}

TEST_CASE("messages before setup are rejected") {
  E2Session gnb(E2Role::kGnb, [](const auto&) {});
  RicSubscriptionRequestBody sub;
  auto frame = encode({MsgType::kRicSubscriptionRequest, 1, sub});
  CHECK_THROWS_AS(gnb.feed(frame), SimError);
}

TEST_CASE("malformed bytes raise a protocol violation") {
  E2Session gnb(E2Role::kGnb, [](const auto&) {});
  std::vector<std::uint8_t> junk = {0, 0, 0, 2, '{', '}'};
  CHECK_THROWS_AS(gnb.feed(junk), SimError);
}

TEST_CASE("indications carry no pending transaction") {
  Pipe to_ric, to_gnb;
  E2Session gnb(E2Role::kGnb, [&](const auto& b) { to_ric.push(b); });
  E2Session ric(E2Role::kRic, [&](const auto& b) { to_gnb.push(b); });
  ric.set_handler([&](const E2Message& m) {
    if (m.msg_type == MsgType::kE2SetupRequest)
      ric.send_response(MsgType::kE2SetupResponse, m.transaction_id,
                        E2SetupResponseBody{"ric-0"});
  });
  gnb.start_setup(setup_body());
  ric.feed(to_ric.drain());
  gnb.feed(to_gnb.drain());

  RicIndicationBody ind;
  ind.ran_node_id = "gnb-0";
  KpmRecord r;
  r.timestamp_ms = 500;
  r.rnti = 1;
  r.snssai = {1, std::nullopt};
  r.pdu_id = 1;
  ind.records = {r};
  auto txn = gnb.send_request(MsgType::kRicIndication, ind);
  CHECK(txn == 2);
  ric.feed(to_ric.drain());  // no response expected, nothing to throw
  CHECK(to_gnb.bytes.empty());
}
