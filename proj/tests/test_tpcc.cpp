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

#include "iconf/tpcc.hpp"

namespace iconf {
namespace {

const tpcc::Scale kScale{1, 20, 3, 100};

ReplicaState replica(ReplicaId id) {
  ReplicaState r;
  r.id = id;
  r.local = tpcc::initial_state(kScale);
  return r;
}

tpcc::NewOrderRequest order(int d, int lines) {
  tpcc::NewOrderRequest req{1, d, 1, {}};
  for (int k = 0; k < lines; ++k) req.lines.push_back({1, 1 + k, 2});
  return req;
}

TEST(Tpcc, ClassificationTable) {
  auto rows = tpcc::classify_tpcc();
  ASSERT_EQ(rows.size(), 12u);
  int yes = 0;
  for (const auto& r : rows) {
    yes += r.verdict == Verdict::IConfluent;
    if (r.number == 2 || r.number == 3) {
      EXPECT_EQ(r.verdict, Verdict::NotIConfluent) << r.number;
      EXPECT_FALSE(r.offending.empty());
    }
  }
  EXPECT_EQ(yes, 10);
  EXPECT_EQ(rows[0].type, "MV");
  EXPECT_EQ(rows[0].txns, "P");
  EXPECT_EQ(rows[2].type, "S_ID");
  EXPECT_EQ(rows[2].txns, "N, D");
}

TEST(Tpcc, InitialStateSatisfiesAllConditions) {
  for (const auto& spec : tpcc::all_specs()) {
    EXPECT_TRUE(evaluate(spec, tpcc::initial_state(kScale)).valid) << spec.label();
  }
  EXPECT_FALSE(tpcc::gap_free(tpcc::initial_state(kScale)));
}

TEST(Tpcc, OrderIsPendingUntilHomeAssigns) {
  auto client = replica(0);
  auto home = replica(1);
  auto inv = make_invariant(tpcc::confluent_specs());
  auto r = tpcc::new_order_coordination_avoiding(order(1, 5), client, home, inv);
  ASSERT_TRUE(r.local.committed());
  ASSERT_TRUE(r.real);
  EXPECT_EQ(*r.real, 1);
  // The client has the order but not the mapping yet.
  EXPECT_FALSE(tpcc::resolve_order_id(visible_state(client.local), r.tmp));
  absorb(client, home.local);
  EXPECT_EQ(tpcc::resolve_order_id(visible_state(client.local), r.tmp), 1);
  for (const auto& spec : tpcc::all_specs()) EXPECT_TRUE(evaluate(spec, client.local).valid) << spec.label();
}

TEST(Tpcc, ConcurrentOrdersGetConsecutiveIds) {
  auto a = replica(0);
  auto bb = replica(2);
  auto home = replica(1);
  auto inv = make_invariant(tpcc::confluent_specs());
  auto r1 = tpcc::new_order_coordination_avoiding(order(3, 2), a, home, inv);
  auto r2 = tpcc::new_order_coordination_avoiding(order(3, 3), bb, home, inv);
  ASSERT_TRUE(r1.real && r2.real);
  EXPECT_EQ(*r2.real - *r1.real, 1);
  auto merged = merge(merge(a.local, bb.local), home.local);
  EXPECT_FALSE(tpcc::gap_free(merged));
  for (const auto& spec : tpcc::all_specs()) EXPECT_TRUE(evaluate(spec, merged).valid) << spec.label();
}

TEST(Tpcc, MissingRowsRaiseItemNotFound) {
  auto client = replica(0);
  auto home = replica(1);
  auto req = order(1, 1);
  req.lines[0].item = 999;
  try {
    tpcc::new_order_coordination_avoiding(req, client, home, Invariant{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ItemNotFound);
  }
}

TEST(Tpcc, GapIsDetected) {
  auto client = replica(0);
  auto home = replica(1);
  auto inv = make_invariant(tpcc::confluent_specs());
  tpcc::new_order_coordination_avoiding(order(2, 1), client, home, inv);
  // Skip a real id by assigning twice for one order on a second home copy.
  auto stray = replica(1);
  auto extra = tpcc::new_order_coordination_avoiding(order(2, 1), client, stray, inv);
  ASSERT_TRUE(extra.real);
  auto merged = merge(merge(client.local, home.local), stray.local);
  EXPECT_TRUE(tpcc::gap_free(merged).has_value());
}

TEST(Tpcc, DeliveryKeepsConditions) {
  auto client = replica(0);
  auto home = replica(0);
  auto inv = make_invariant(tpcc::confluent_specs());
  auto r = tpcc::new_order_coordination_avoiding(order(4, 3), client, home, inv);
  absorb(client, home.local);
  auto txn = tpcc::delivery(visible_state(client.local), r.tmp, 7);
  ASSERT_TRUE(txn);
  auto [out, next] = apply_transaction(*txn, client, make_invariant(tpcc::all_specs()), {});
  ASSERT_TRUE(out.committed());
  auto view = visible_state(next.local);
  EXPECT_TRUE(view.table("new_order").empty());
  for (const auto& spec : tpcc::all_specs()) EXPECT_TRUE(evaluate(spec, next.local).valid) << spec.label();
}

TEST(Tpcc, PaymentKeepsConditions) {
  auto r = replica(0);
  auto [out, next] =
      apply_transaction(tpcc::payment(1, 2, tpcc::customer_key(1, 2, 1), 50), r, make_invariant(tpcc::all_specs()), {});
  ASSERT_TRUE(out.committed());
  EXPECT_EQ(visible_state(next.local).record("warehouse/1")->get("ytd"), Value{std::int64_t{50}});
}

TEST(Tpcc, SmallRunHoldsEverything) {
  for (auto strategy : {Strategy::CoordinationFree, Strategy::Coordinated2PL}) {
    auto cfg = tpcc::default_config(2);
    cfg.sim.duration = 60;
    cfg.sim.strategy = strategy;
    cfg.distributed_fraction = 0.3;
    auto r = tpcc::run_tpcc(cfg);
    EXPECT_GT(r.orders, 0u);
    EXPECT_TRUE(r.all_hold());
    EXPECT_TRUE(r.gap_free) << r.gap_detail;
    EXPECT_EQ(r.metrics.violations, 0u);
    EXPECT_TRUE(r.metrics.converged);
    EXPECT_TRUE(r.metrics.serializable);
  }
}

TEST(Tpcc, WorkloadFormIsValid) {
  auto w = tpcc::workload();
  EXPECT_TRUE(is_valid(workload_invariant(w), iconf::initial_state(w)).valid);
  EXPECT_EQ(w.transactions.size(), 3u);
}

}  // namespace
}  // namespace iconf
