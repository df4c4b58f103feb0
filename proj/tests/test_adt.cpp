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

#include <map>
#include <set>

#include "iconf/adt.hpp"
#include "support.hpp"

namespace iconf {
namespace {

using testing::Batch;
using testing::v;

TEST(Counter, IncIncDec) {
  auto s = testing::join({Batch(1, 1).inc("c").state(), Batch(1, 2).inc("c").state(), Batch(2, 1).dec("c").state()});
  EXPECT_EQ(counter_value(s, "c"), 1);
}

TEST(Counter, MissingIsZero) { EXPECT_EQ(counter_value(DatabaseState{}, "c"), 0); }

TEST(Counter, AssignBaseThenLaterDeltas) {
  auto s = testing::join({Batch(1, 1, 1).inc("c", 5).state(), Batch(1, 2, 2).assign("c", 10).state(),
                          Batch(2, 1, 3).dec("c", 4).state()});
  EXPECT_EQ(counter_value(s, "c"), 6);
}

TEST(Counter, RecountOracle) {
  testing::VersionPool pool(21);
  for (int k = 0; k < 500; ++k) {
    auto s = pool.draw();
    std::int64_t expect = 0;
    for (const auto& p : s) {
      if (p->item != "c") continue;
      if (p->kind == VersionKind::CounterInc) expect += p->amount;
      if (p->kind == VersionKind::CounterDec) expect -= p->amount;
    }
    EXPECT_EQ(counter_value(s, "c"), expect);
  }
}

TEST(Counter, MergeCountsUnionOfEvents) {
  auto ancestor = Batch(1, 1).inc("c", 3).state();
  auto a = merge(ancestor, Batch(2, 1).inc("c", 2).state());
  auto b = merge(ancestor, Batch(3, 1).dec("c", 1).state());
  EXPECT_EQ(counter_value(merge(a, b), "c"), counter_value(a, "c") + counter_value(b, "c") - counter_value(ancestor, "c"));
}

TEST(Collection, SizeAndContains) {
  EXPECT_EQ(collection_size(Batch(1, 1).add("l", v("x")).state(), "l"), 1);
  auto s = testing::join({Batch(1, 1).add("l", v("xi")).state(), Batch(1, 2).del("l", v("xi")).state(),
                          Batch(2, 1).add("l", v("xa")).state()});
  EXPECT_EQ(collection_size(s, "l"), 1);
  EXPECT_FALSE(collection_contains(s, "l", v("xi")));
  EXPECT_TRUE(collection_contains(s, "l", v("xa")));
  EXPECT_EQ(collection_size(DatabaseState{}, "l"), 0);
}

TEST(Collection, TallyOracle) {
  testing::VersionPool pool(33);
  for (int k = 0; k < 500; ++k) {
    auto s = pool.draw();
    std::set<Value> added;
    std::set<Value> deleted;
    for (const auto& p : s) {
      if (p->item != "l") continue;
      (p->kind == VersionKind::CollectionAdd ? added : deleted).insert(p->payload);
    }
    EXPECT_EQ(collection_size(s, "l"), static_cast<std::int64_t>(added.size()) - static_cast<std::int64_t>(deleted.size()));
    for (std::int64_t x = 0; x < 4; ++x) {
      EXPECT_EQ(collection_contains(s, "l", v(x)), added.count(v(x)) > 0 && deleted.count(v(x)) == 0);
    }
  }
}

TEST(Collection, ListOrderIsLexicographic) {
  auto s = Batch(1, 1).add("l", v("b")).add("l", v("a")).state();
  EXPECT_EQ(list_order(s, "l"), (std::vector<Value>{v("a"), v("b")}));
  EXPECT_TRUE(list_order(DatabaseState{}, "l").empty());
}

TEST(Collection, MergedHeadIsHeadOfAnInput) {
  auto a = Batch(1, 1).add("l", v("a")).add("l", v("d")).state();
  auto b = Batch(2, 1).add("l", v("c")).add("l", v("e")).state();
  auto merged = list_order(merge(a, b), "l");
  EXPECT_EQ(merged.front(), list_order(a, "l").front());
  EXPECT_EQ(merged.back(), list_order(b, "l").back());
}

TEST(Nonce, SequentialOnOneReplica) {
  ReplicaState r;
  r.id = 4;
  auto [first, r1] = nonce(r);
  auto [second, r2] = nonce(r1);
  EXPECT_EQ(first, (NonceValue{4, 0}));
  EXPECT_EQ(second, (NonceValue{4, 1}));
  EXPECT_EQ(r2.nonce_counter, 2u);
}

TEST(Nonce, DistinctAcrossReplicas) {
  std::vector<ReplicaState> rs(8);
  for (ReplicaId k = 0; k < 8; ++k) rs[k].id = k;
  std::vector<Value> seen;
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10000; ++k) {
    auto& r = rs[rng() % 8];
    auto [n, next] = nonce(r);
    r = next;
    seen.push_back(n.to_value());
  }
  // Exhaustive pairwise check.
  std::size_t dup = 0;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    for (std::size_t j = i + 1; j < seen.size(); ++j) dup += seen[i] == seen[j];
  }
  EXPECT_EQ(dup, 0u);
}

}  // namespace
}  // namespace iconf
