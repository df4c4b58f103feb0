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

#include <algorithm>

#include "iconf/catalog.hpp"
#include "iconf/classify.hpp"
#include "iconf/tpcc.hpp"
#include "iconf/workload_io.hpp"

namespace iconf {
namespace {

std::string spec_path(const char* name) { return std::string(ICONF_SPECS_DIR) + "/" + name; }

std::vector<Diagnostic> diagnostics_of(std::string_view text) {
  try {
    parse_spec(text);
  } catch (const SpecError& e) {
    return e.diagnostics();
  }
  return {};
}

bool has_warning(const std::vector<std::string>& ws, const std::string& needle) {
  return std::any_of(ws.begin(), ws.end(), [&](const auto& w) { return w.find(needle) != std::string::npos; });
}

TEST(Spec, PayrollParses) {
  auto w = load_spec(spec_path("payroll.json"));
  EXPECT_EQ(w.name, "payroll");
  EXPECT_EQ(w.invariants.size(), 2u);
  ASSERT_EQ(w.transactions.size(), 3u);
  EXPECT_FALSE(classify_transaction(w.transactions[0].txn, w.invariants).coordination_free());
  EXPECT_TRUE(classify_transaction(w.transactions[1].txn, w.invariants).coordination_free());
}

TEST(Spec, BundledSpecsRoundTrip) {
  for (const char* name : {"payroll.json", "bank.json", "tpcc.json"}) {
    auto w = load_spec(spec_path(name));
    EXPECT_EQ(parse_spec(serialize(w)), w) << name;
  }
}

TEST(Spec, TpccFileMatchesEncoding) { EXPECT_EQ(load_spec(spec_path("tpcc.json")), tpcc::workload()); }

TEST(Spec, CatalogWorkloadsRoundTrip) {
  for (const auto& rw : row_workloads()) EXPECT_EQ(parse_spec(serialize(rw.workload)), rw.workload) << rw.workload.name;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto w = random_confluent_workload(seed);
    EXPECT_EQ(parse_spec(serialize(w)), w) << w.name;
  }
}

TEST(Spec, MissingTableIsUnresolved) {
  auto ds = diagnostics_of(R"({"name": "x", "schema": {"tables": {"emp": {"fields": ["dept"]}}},
    "invariants": [{"class": "foreign-key", "table": "emp", "field": "dept", "to_table": "dept", "to_field": "@key"}],
    "transactions": []})");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, ErrorCode::UnresolvedReference);
  EXPECT_EQ(ds[0].location, "/invariants/0/to_table");
  EXPECT_NE(ds[0].message.find("dept"), std::string::npos);
}

TEST(Spec, AllErrorsAreReported) {
  auto ds = diagnostics_of(R"({"schema": {"tables": {"t": {"fields": ["a"]}}},
    "invariants": [{"class": "uniqueness", "table": "t", "field": "b"}],
    "transactions": [{"name": "w", "operations": [
      {"op": "insert", "table": "u", "key": 1},
      {"op": "update", "table": "t", "key": {"param": "k"}, "fields": {"a": 1}}]}]})");
  ASSERT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds[0].location, "/invariants/0/field");
  EXPECT_EQ(ds[1].location, "/transactions/0/operations/0/table");
  EXPECT_EQ(ds[2].location, "/transactions/0/operations/1/key");
}

TEST(Spec, SyntaxErrorHasLineAndColumn) {
  auto ds = diagnostics_of("{\n  \"name\": \"x\",\n  \"schema\": }\n");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, ErrorCode::SyntaxError);
  EXPECT_EQ(ds[0].location, "3:13");
}

TEST(Spec, StructuralErrorsAreLocated) {
  auto ds = diagnostics_of(R"({"schema": {"tables": {}}, "transactions": [{"name": "w", "operations": [{"op": "fly"}]}],
    "invariants": [{"class": "nonsense"}]})");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].location, "/invariants/0/class");
  EXPECT_EQ(ds[1].location, "/transactions/0/operations/0/op");
  EXPECT_FALSE(diagnostics_of("[]").empty());
  EXPECT_FALSE(diagnostics_of("").empty());
  EXPECT_FALSE(diagnostics_of(R"({"schema": 3})").empty());
}

TEST(Spec, InvalidInitialState) {
  auto ds = diagnostics_of(R"({"schema": {"tables": {}, "counters": ["c"]},
    "invariants": [{"class": "counter-greater-than", "item": "c", "bound": 0}],
    "transactions": [], "initial": [{"counter": "c", "value": 0}]})");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, ErrorCode::InvalidInitialState);
}

TEST(Spec, MissingFileIsIo) {
  try {
    load_spec(spec_path("does-not-exist.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(Lint, FullyCoveredSpecIsClean) { EXPECT_TRUE(validate_spec(load_spec(spec_path("bank.json"))).empty()); }

TEST(Lint, NeverExercisedInvariant) {
  auto w = load_spec(spec_path("bank.json"));
  w.schema.counters.push_back("other");
  w.invariants.push_back(InvariantSpec{});
  w.invariants.back().cls = InvariantClass::CounterLessThan;
  w.invariants.back().item = "other";
  w.invariants.back().bound = 5;
  EXPECT_TRUE(has_warning(validate_spec(w), "never exercised"));
}

TEST(Lint, WriteOutsideDeclaredWriteSet) {
  auto w = load_spec(spec_path("payroll.json"));
  w.transactions[0].txn.declared_writeset = {"dept"};
  EXPECT_TRUE(has_warning(validate_spec(w), "outside its declared write set"));
}

TEST(Lint, UncoveredWriteAndEmptyTransaction) {
  auto w = load_spec(spec_path("tpcc.json"));
  EXPECT_TRUE(has_warning(validate_spec(w), "'stock'"));
  auto bank = load_spec(spec_path("bank.json"));
  bank.transactions.push_back(TransactionTemplate{});
  bank.transactions.back().txn.name = "noop";
  EXPECT_TRUE(has_warning(validate_spec(bank), "has no operation classes"));
}

}  // namespace
}  // namespace iconf
