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
#include "iconf/classify.hpp"

namespace iconf {
namespace {

namespace b = build;
using IC = InvariantClass;
using OC = OperationClass;

TEST(Static, RowLookups) {
  EXPECT_EQ(classify_static(IC::Uniqueness, OC::WriteAnyValue), (Classification{Verdict::NotIConfluent, 3}));
  EXPECT_EQ(classify_static(IC::Uniqueness, OC::WriteChosenUnique), (Classification{Verdict::IConfluent, 4}));
  EXPECT_EQ(classify_static(IC::ForeignKey, OC::CascadeDelete), (Classification{Verdict::IConfluent, 8}));
  EXPECT_EQ(classify_static(IC::CounterGreaterThan, OC::CounterDecrement),
            (Classification{Verdict::NotIConfluent, 13}));
}

TEST(Static, OutsideTableIsUnknown) {
  EXPECT_EQ(classify_static(IC::Sequentiality, OC::CollectionAdd).verdict, Verdict::Unknown);
  EXPECT_FALSE(classify_static(IC::Sequentiality, OC::CollectionAdd).proof);
  EXPECT_EQ(classify_static(IC::Recency, OC::Read).verdict, Verdict::NotIConfluent);
}

TEST(Static, EveryRowAgreesWithLookup) {
  for (const auto& row : rule_table()) {
    EXPECT_EQ(classify_static(row.inv, row.op).verdict, row.verdict) << row.invariant << " / " << row.operation;
  }
}

TEST(Tags, DerivedFromOperations) {
  auto t = b::txn("t", {b::insert(b::ref("x", b::nonce()), {{"id", b::nonce("v")}}), b::dec(b::ref("c"))});
  auto tags = operation_classes(t);
  EXPECT_TRUE(tags.count(OC::Insert));
  EXPECT_TRUE(tags.count(OC::WriteChosenUnique));
  EXPECT_TRUE(tags.count(OC::CounterDecrement));
  EXPECT_TRUE(operation_classes(b::txn("n", {b::abort_if(b::lit(0))})).empty());
}

TEST(Transaction, InsertOnlyUnderForeignKeyIsFree) {
  auto t = b::txn("hire", {b::insert(b::ref("emp", b::nonce()), {{"dept", b::par("d")}})});
  auto r = classify_transaction(t, {b::foreign_key("emp", "dept", "dept", "@key")});
  EXPECT_TRUE(r.coordination_free());
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].op_class, OC::Insert);
}

TEST(Transaction, ArbitraryIdUnderUniquenessIsFlagged) {
  auto t = b::txn("hire", {b::insert(b::ref("emp", b::nonce()), {{"id", b::par("id")}})});
  auto r = classify_transaction(t, {b::unique("emp", "id")});
  ASSERT_EQ(r.offending.size(), 1u);
  EXPECT_EQ(r.offending[0].op_class, OC::WriteAnyValue);
  EXPECT_EQ(r.offending[0].classification.proof, 3);
}

TEST(Transaction, DeleteFromReferencingSideIsIrrelevant) {
  auto t = b::txn("fire", {b::remove(b::ref("emp", b::par("k")))});
  auto r = classify_transaction(t, {b::foreign_key("emp", "dept", "dept", "@key"), b::unique("emp", "id")});
  EXPECT_TRUE(r.pairs.empty());
  EXPECT_TRUE(r.coordination_free());
}

TEST(Transaction, DeleteOfReferencedRowIsFlagged) {
  auto t = b::txn("close", {b::remove(b::ref("dept", b::par("k")))});
  auto r = classify_transaction(t, {b::foreign_key("emp", "dept", "dept", "@key")});
  ASSERT_EQ(r.offending.size(), 1u);
  EXPECT_EQ(r.offending[0].op_class, OC::Delete);
}

TEST(Catalog, RowWorkloadsClassifyAsTheirRow) {
  auto rows = row_workloads();
  ASSERT_EQ(rows.size(), rule_table().size());
  for (const auto& rw : rows) {
    bool offending = false;
    for (const auto& t : rw.workload.transactions) {
      offending = offending || !classify_transaction(t.txn, rw.workload.invariants).coordination_free();
    }
    EXPECT_EQ(offending, rw.expected == Verdict::NotIConfluent) << rw.workload.name;
  }
}

TEST(Names, RoundTrip) {
  for (auto c : all_operation_classes()) EXPECT_EQ(operation_class_from_string(to_string(c)), c);
  for (auto c : all_invariant_classes()) EXPECT_EQ(invariant_class_from_string(to_string(c)), c);
}

}  // namespace
}  // namespace iconf
