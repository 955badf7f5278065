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

#include "slicesim/slicing_model.hpp"

using namespace slicesim;

namespace {

bool has_code(const std::vector<Violation>& vs, ViolationCode code) {
  return std::any_of(vs.begin(), vs.end(),
                     [code](const Violation& v) { return v.code == code; });
}

UeContext make_ue(std::uint32_t id, std::uint32_t rnti,
                  std::vector<Snssai> slices) {
  UeContext ue;
  ue.ue_id = id;
  ue.rnti = rnti;
  ue.mcs = 9;
  std::uint32_t pdu = 1;
  for (const auto& s : slices) {
    PduSession f;
    f.ue_id = id;
    f.pdu_id = pdu++;
    f.snssai = s;
    ue.sessions.push_back(f);
  }
  return ue;
}

}  // namespace

TEST_CASE("snssai ordering and formatting") {
  Snssai a{1, std::nullopt}, b{1, 0u}, c{1, 5u}, d{2, std::nullopt};
  CHECK(a < b);  // absent SD sorts before SD=0 and is a distinct identity
  CHECK(b < c);
  CHECK(c < d);
  CHECK(a != b);
  CHECK(a.to_string() == "1");
  CHECK(c.to_string() == "1/5");
}

TEST_CASE("policy ordering rule") {
  CHECK(RrmPolicyRatio{0, 0, 100}.ordered());
  CHECK(RrmPolicyRatio{10, 10, 10}.ordered());
  CHECK_FALSE(RrmPolicyRatio{20, 10, 100}.ordered());
  CHECK_FALSE(RrmPolicyRatio{0, 60, 50}.ordered());
  CHECK_FALSE(RrmPolicyRatio{-1, 0, 100}.ordered());
  CHECK_FALSE(RrmPolicyRatio{0, 0, 101}.ordered());
}

TEST_CASE("validate_policy reports each broken relation") {
  Snssai s{1, std::nullopt};
  CHECK(validate_policy(s, {0, 10, 90}).empty());
  CHECK(has_code(validate_policy(s, {30, 10, 90}),
                 ViolationCode::kDedicatedExceedsMin));
  CHECK(has_code(validate_policy(s, {0, 95, 90}),
                 ViolationCode::kMinExceedsMax));
  CHECK(has_code(validate_policy(s, {0, 0, 101}),
                 ViolationCode::kRatioOutOfRange));
  CHECK(has_code(validate_policy(s, {-5, 0, 100}),
                 ViolationCode::kRatioOutOfRange));
}

TEST_CASE("cell config admission") {
  std::vector<SliceConfig> slices = {
      {{1, std::nullopt}, {20, 30, 90}},
      {{2, std::nullopt}, {40, 50, 100}},
  };
  std::vector<UeContext> ues = {
      make_ue(1, 100, {{1, std::nullopt}}),
      make_ue(2, 101, {{2, std::nullopt}}),
  };

  SUBCASE("admissible") { CHECK(validate_cell_config(slices, ues).empty()); }

  SUBCASE("duplicate snssai") {
    slices.push_back({{1, std::nullopt}, {0, 0, 100}});
    CHECK(has_code(validate_cell_config(slices, ues),
                   ViolationCode::kDuplicateSnssai));
  }
  SUBCASE("dedicated sum above the cell") {
    slices[0].policy = {70, 70, 90};
    CHECK(has_code(validate_cell_config(slices, ues),
                   ViolationCode::kDedicatedSumExceedsCell));
  }
  SUBCASE("duplicate rnti") {
    ues[1].rnti = 100;
    CHECK(has_code(validate_cell_config(slices, ues),
                   ViolationCode::kDuplicateRnti));
  }
  SUBCASE("rnti range") {
    ues[0].rnti = 0;
    CHECK(has_code(validate_cell_config(slices, ues),
                   ViolationCode::kInvalidRnti));
    ues[0].rnti = 65536;
    CHECK(has_code(validate_cell_config(slices, ues),
                   ViolationCode::kInvalidRnti));
  }
  SUBCASE("pdu id range") {
    ues[0].sessions[0].pdu_id = 0;
    CHECK(has_code(validate_cell_config(slices, ues),
                   ViolationCode::kInvalidPduId));
    ues[0].sessions[0].pdu_id = 16;
    CHECK(has_code(validate_cell_config(slices, ues),
                   ViolationCode::kInvalidPduId));
  }
  SUBCASE("duplicate pdu id within a ue") {
    ues[0].sessions.push_back(ues[0].sessions[0]);
    CHECK(has_code(validate_cell_config(slices, ues),
                   ViolationCode::kDuplicatePduId));
  }
  SUBCASE("session bound to unknown slice") {
    ues[0].sessions[0].snssai = {9, std::nullopt};
    CHECK(has_code(validate_cell_config(slices, ues),
                   ViolationCode::kUnknownSliceForSession));
  }
  SUBCASE("mcs range") {
    ues[0].mcs = 29;
    CHECK(has_code(validate_cell_config(slices, ues),
                   ViolationCode::kInvalidMcs));
  }
  SUBCASE("bler range") {
    ues[0].target_bler = 1.0;
    CHECK(has_code(validate_cell_config(slices, ues),
                   ViolationCode::kInvalidBler));
  }
  SUBCASE("per-ue slice fan-out limit") {
    std::vector<SliceConfig> many;
    std::vector<Snssai> ids;
    for (std::uint8_t i = 1; i <= 9; ++i) {
      many.push_back({{i, std::nullopt}, {0, 0, 100}});
      ids.push_back({i, std::nullopt});
    }
    std::vector<UeContext> one = {make_ue(1, 100, ids)};
    CHECK(has_code(validate_cell_config(many, one),
                   ViolationCode::kTooManySlicesPerUe));
    // Exactly 8 distinct slices is allowed.
    ids.pop_back();
    one = {make_ue(1, 100, ids)};
    CHECK_FALSE(has_code(validate_cell_config(many, one),
                         ViolationCode::kTooManySlicesPerUe));
  }
}
