//  Copyright 2026 The iconf Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#include <gtest/gtest.h>

#include "iconf/build.hpp"
#include "iconf/catalog.hpp"
#include "iconf/history.hpp"

namespace iconf {
namespace {

namespace b = build;

Workload row(std::size_t k) { return row_workloads().at(k).workload; }

TEST(Dynamic, UniquenessWithChosenIdsFindsCounterexample) {
  auto w = row(2);
  auto v = check_dynamic(w, 1000, 1, 42);
  ASSERT_TRUE(v.found());
  const auto& c = *v.counterexample;
  EXPECT_TRUE(validate_counterexample(c, w));
  EXPECT_TRUE(is_valid(workload_invariant(w), c.h1.end_state()).valid);
  EXPECT_TRUE(is_valid(workload_invariant(w), c.h2.end_state()).valid);
  EXPECT_FALSE(is_valid(workload_invariant(w), c.merged).valid);
  // Depth 1: one hire per branch, same id on both sides.
  EXPECT_EQ(c.h1.transactions(), 1u);
  EXPECT_EQ(c.h2.transactions(), 1u);
  EXPECT_EQ(c.h1.nodes[0].txn.args.at("id"), c.h2.nodes[0].txn.args.at("id"));
  EXPECT_NE(narrative(c).find("duplicated"), std::string::npos);
}

TEST(Dynamic, InequalityHasNoCounterexample) {
  auto v = check_dynamic(row(1), 2000, 4, 7);
  EXPECT_FALSE(v.found());
  EXPECT_EQ(v.trials, 2000u);
}

TEST(Dynamic, TwoIncrementsBreakLessThanTwo) {
  auto w = row(11);
  auto v = check_dynamic(w, 1000, 2, 3);
  ASSERT_TRUE(v.found());
  EXPECT_GE(visible_state(v.counterexample->merged).counter("c"), 2);
}

TEST(Dynamic, ForeignKeyInsertHasNoCounterexample) {
  EXPECT_FALSE(check_dynamic(row(5), 2000, 2, 11).found());
}

TEST(Dynamic, SameSeedSameVerdict) {
  auto a = check_dynamic(row(6), 300, 2, 99);
  auto c = check_dynamic(row(6), 300, 2, 99);
  ASSERT_EQ(a.found(), c.found());
  EXPECT_EQ(a.trials, c.trials);
  if (a.found()) EXPECT_EQ(narrative(*a.counterexample), narrative(*c.counterexample));
}

TEST(History, ReplayMatchesGenerator) {
  for (std::size_t r = 0; r < rule_table().size(); ++r) {
    auto w = row(r);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto pair = generate_divergent_pair(w, 3, mix_seed(seed, r));
      EXPECT_EQ(replay(pair.h1, w), pair.h1.end_state()) << w.name;
      EXPECT_EQ(replay(pair.h2, w), pair.h2.end_state()) << w.name;
    }
  }
}

TEST(History, TamperedReplayIsRejected) {
  auto w = row(2);
  auto pair = generate_divergent_pair(w, 2, 5);
  ASSERT_FALSE(pair.h1.nodes.empty());
  auto h = pair.h1;
  h.nodes[0].txn.operations.push_back(b::abort_if(b::lit(1)));
  try {
    replay(h, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ReplayInvalid);
  }
}

TEST(History, BranchStatesAreValid) {
  auto w = row(12);
  auto inv = workload_invariant(w);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto pair = generate_divergent_pair(w, 3, seed);
    EXPECT_TRUE(is_valid(inv, pair.ancestor).valid);
    for (const auto& n : pair.h1.nodes) EXPECT_TRUE(is_valid(inv, n.state).valid);
    for (const auto& n : pair.h2.nodes) EXPECT_TRUE(is_valid(inv, n.state).valid);
  }
}

}  // namespace
}  // namespace iconf
