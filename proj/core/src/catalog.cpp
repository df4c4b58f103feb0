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

#include "iconf/catalog.hpp"

#include <functional>

#include "iconf/build.hpp"

namespace iconf {

namespace {

using namespace build;

// Shape knobs for the row builders; the fixed row workloads use defaults.
struct Knobs {
  std::int64_t domain = 3;   // size of small integer parameter domains
  std::int64_t records = 2;  // preloaded records
  std::int64_t bound = 0;    // counter bound offset
};

TransactionTemplate tmpl(Transaction t, std::map<std::string, ParamDomain> params = {},
                         double weight = 1.0) {
  return TransactionTemplate{std::move(t), std::move(params), weight};
}

InitialEntry record(ItemId item, FieldMap fields) {
  return InitialEntry{InitialEntry::Kind::Record, std::move(item), std::move(fields), 0, {}};
}

Value s(const char* v) { return Value{std::string(v)}; }
Value i(std::int64_t v) { return Value{v}; }

std::vector<Value> letters(std::int64_t n) {
  std::vector<Value> out;
  for (std::int64_t k = 0; k < n; ++k) out.push_back(Value{std::string(1, static_cast<char>('a' + k))});
  return out;
}

Workload attribute_equality(const Knobs& k) {
  Workload w;
  w.name = "attribute-equality";
  w.schema.tables["item"] = TableSchema{{"status"}, {}};
  w.invariants = {equality("item", "status", s("ok"))};
  auto statuses = ParamDomain::choice({s("ok"), s("bad")});
  w.transactions = {
      tmpl(txn("put", {insert(ref("item", par("k")), {{"status", par("s")}})}),
           {{"k", ParamDomain::range(1, k.domain)}, {"s", statuses}}),
      tmpl(txn("set", {update(ref("item", par("k")), {{"status", par("s")}})}),
           {{"k", ParamDomain::range(1, k.domain)}, {"s", statuses}}),
  };
  return w;
}

Workload attribute_inequality(const Knobs& k) {
  Workload w;
  w.name = "attribute-inequality";
  w.schema.tables["x"] = TableSchema{{"v"}, {}};
  w.invariants = {inequality("x", "v", i(2))};
  w.transactions = {
      tmpl(txn("put", {insert(ref("x", par("k")), {{"v", par("v")}})}),
           {{"k", ParamDomain::range(1, k.domain)}, {"v", ParamDomain::range(0, 3)}}),
      tmpl(txn("set", {update(ref("x", par("k")), {{"v", par("v")}})}),
           {{"k", ParamDomain::range(1, k.domain)}, {"v", ParamDomain::range(0, 3)}}),
  };
  return w;
}

Workload uniqueness_specific(const Knobs& k) {
  Workload w;
  w.name = "uniqueness-specific";
  w.schema.tables["employee"] = TableSchema{{"id"}, {}};
  w.invariants = {unique("employee", "id")};
  w.transactions = {
      tmpl(txn("hire", {insert(ref("employee", nonce("row")), {{"id", par("id")}})}),
           {{"id", ParamDomain::range(1, k.domain)}}),
  };
  return w;
}

Workload uniqueness_nonce(const Knobs&) {
  Workload w;
  w.name = "uniqueness-nonce";
  w.schema.tables["employee"] = TableSchema{{"id"}, {}};
  w.invariants = {unique("employee", "id")};
  w.transactions = {
      tmpl(txn("hire", {insert(ref("employee", nonce("row")), {{"id", nonce("id")}})})),
  };
  return w;
}

Workload auto_increment(const Knobs&) {
  Workload w;
  w.name = "auto-increment";
  w.schema.tables["x"] = TableSchema{{"id"}, {}};
  w.schema.tables["seq"] = TableSchema{{"next"}, {}};
  auto spec = sequential("x", "id");
  spec.next_table = "seq";
  spec.next_field = "next";
  w.invariants = {spec};
  w.initial = {record("seq/*", {{"next", i(1)}})};
  w.transactions = {
      tmpl(txn("append", {assign_sequential(ref("x", nonce()), "id", ref("seq", lit("*")), "next")})),
  };
  return w;
}

Workload fk_insert(const Knobs& k) {
  Workload w;
  w.name = "foreign-key-insert";
  w.schema.tables["emp"] = TableSchema{{"dept"}, {}};
  w.schema.tables["dept"] = TableSchema{{"name"}, {}};
  w.invariants = {foreign_key("emp", "dept", "dept", kKeyField)};
  for (std::int64_t d = 1; d <= k.records; ++d) {
    w.initial.push_back(record(record_item("dept", std::to_string(d)), {{"name", s("d")}}));
  }
  w.transactions = {
      tmpl(txn("hire", {insert(ref("emp", nonce()), {{"dept", par("d")}})}),
           {{"d", ParamDomain::range(1, k.records + 1)}}),
      tmpl(txn("open", {insert(ref("dept", par("d")), {{"name", lit("new")}})}),
           {{"d", ParamDomain::range(1, k.records + k.domain)}}),
  };
  return w;
}

Workload fk_delete(const Knobs&) {
  Workload w;
  w.name = "foreign-key-delete";
  w.schema.tables["emp"] = TableSchema{{"dept"}, {}};
  w.schema.tables["dept"] = TableSchema{{"name"}, {}};
  w.invariants = {foreign_key("emp", "dept", "dept", kKeyField)};
  w.initial = {record("dept/1", {{"name", s("d")}})};
  w.transactions = {
      tmpl(txn("hire", {insert(ref("emp", nonce()), {{"dept", lit(1)}})})),
      tmpl(txn("close", {remove(ref("dept", lit(1)))})),
  };
  return w;
}

Workload fk_cascade(const Knobs& k) {
  Workload w;
  w.name = "foreign-key-cascade";
  w.schema.tables["emp"] = TableSchema{{"dept"}, {}};
  w.schema.tables["dept"] = TableSchema{{"name"}, {}};
  w.invariants = {foreign_key("emp", "dept", "dept", kKeyField, true)};
  for (std::int64_t d = 1; d <= k.records; ++d) {
    w.initial.push_back(record(record_item("dept", std::to_string(d)), {{"name", s("d")}}));
  }
  w.transactions = {
      tmpl(txn("hire", {insert(ref("emp", nonce()), {{"dept", par("d")}})}),
           {{"d", ParamDomain::range(1, k.records)}}),
      tmpl(txn("close", {cascade({"dept.@key", "emp.dept"}, par("d"))}),
           {{"d", ParamDomain::range(1, k.records)}}),
  };
  return w;
}

Workload secondary_indexing(const Knobs& k) {
  Workload w;
  w.name = "secondary-index";
  w.schema.tables["user"] = TableSchema{{"email"}, {}};
  w.schema.tables["email_idx"] = TableSchema{{"value"}, {}};
  w.invariants = {secondary_index("user", "email", "email_idx")};
  const auto emails = letters(k.domain + 1);
  for (std::int64_t u = 1; u <= k.records; ++u) {
    const auto key = std::to_string(u);
    const Value e = emails[static_cast<std::size_t>((u - 1) % (k.domain + 1))];
    w.initial.push_back(record(record_item("user", key), {{"email", e}}));
    w.initial.push_back(record(record_item("email_idx", key), {{"value", e}}));
  }
  w.transactions = {
      tmpl(txn("rename", {update_indexed(ref("user", par("u")), {{"email", par("e")}}, "email_idx",
                                         "email")}),
           {{"u", ParamDomain::range(1, k.records)}, {"e", ParamDomain::choice(emails)}}),
  };
  return w;
}

Workload materialized_view(const Knobs& k) {
  Workload w;
  w.name = "materialized-view";
  w.schema.tables["sale"] = TableSchema{{"region", "amount"}, {}};
  w.schema.tables["region_total"] = TableSchema{{"total"}, {}};
  ViewFunction vf{"region totals", sum("sale", "amount", {"region"}), "region_total", "total", false};
  w.views = {vf};
  w.invariants = {vf.spec()};
  const auto regions = letters(2);
  for (std::int64_t r = 1; r <= k.records; ++r) {
    w.initial.push_back(record(record_item("sale", std::to_string(r)),
                               {{"region", regions[static_cast<std::size_t>(r % 2)]}, {"amount", i(r)}}));
  }
  auto keys = ParamDomain::range(1, k.records);
  w.transactions = {
      tmpl(txn("sell", {insert(ref("sale", nonce()), {{"region", par("r")}, {"amount", par("a")}})}),
           {{"r", ParamDomain::choice(regions)}, {"a", ParamDomain::range(1, 5)}}),
      tmpl(txn("adjust", {update(ref("sale", par("k")), {{"amount", par("a")}})}),
           {{"k", keys}, {"a", ParamDomain::range(0, 5)}}),
      tmpl(txn("refund", {remove(ref("sale", par("k")))}), {{"k", keys}}),
  };
  return w;
}

Workload counter_workload(const char* name, InvariantSpec spec, bool increment) {
  Workload w;
  w.name = name;
  w.schema.counters = {"c"};
  w.invariants = {std::move(spec)};
  w.transactions = {tmpl(txn(increment ? "inc" : "dec", {increment ? inc(ref("c")) : dec(ref("c"))}))};
  return w;
}

Workload containment(const Knobs& k) {
  Workload w;
  w.name = "containment";
  w.schema.collections = {"l"};
  w.invariants = {contains("l", s("k")), not_contains("l", s("z"))};
  w.initial = {InitialEntry{InitialEntry::Kind::Collection, "l", {}, 0, {s("k")}}};
  auto values = letters(k.domain);
  values.push_back(s("k"));
  values.push_back(s("z"));
  auto domain = ParamDomain::choice(values);
  w.transactions = {
      tmpl(txn("add", {add(ref("l"), par("v"))}), {{"v", domain}}),
      tmpl(txn("del", {del(ref("l"), par("v"))}), {{"v", domain}}),
  };
  return w;
}

Workload size_equality(const Knobs&) {
  Workload w;
  w.name = "size-equality";
  w.schema.collections = {"l"};
  w.invariants = {size_equals("l", 1)};
  w.initial = {InitialEntry{InitialEntry::Kind::Collection, "l", {}, 0, {s("i")}}};
  auto domain = ParamDomain::choice({s("i"), s("a"), s("b")});
  w.transactions = {
      tmpl(txn("swap", {del(ref("l"), par("x")), add(ref("l"), par("y"))}), {{"x", domain}, {"y", domain}}),
  };
  return w;
}

using Builder = std::function<Workload(const Knobs&)>;

std::vector<Builder> builders() {
  return {
      attribute_equality,
      attribute_inequality,
      uniqueness_specific,
      uniqueness_nonce,
      auto_increment,
      fk_insert,
      fk_delete,
      fk_cascade,
      secondary_indexing,
      materialized_view,
      [](const Knobs& k) { return counter_workload("counter-gt-inc", counter_gt("c", -1 - k.bound), true); },
      [](const Knobs&) { return counter_workload("counter-lt-inc", counter_lt("c", 2), true); },
      [](const Knobs&) { return counter_workload("counter-gt-dec", counter_gt("c", -2), false); },
      [](const Knobs& k) { return counter_workload("counter-lt-dec", counter_lt("c", 1 + k.bound), false); },
      containment,
      size_equality,
  };
}

}  // namespace

std::vector<RowWorkload> row_workloads() {
  const auto& rows = rule_table();
  const auto bs = builders();
  std::vector<RowWorkload> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.push_back(RowWorkload{r, rows[r].verdict, bs[r](Knobs{})});
  }
  return out;
}

Workload random_confluent_workload(std::uint64_t seed) {
  Rng rng(seed);
  const auto& rows = rule_table();
  const auto bs = builders();
  std::vector<std::size_t> yes;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].verdict == Verdict::IConfluent) yes.push_back(r);
  }
  std::uniform_int_distribution<std::size_t> pick_row(0, yes.size() - 1);
  std::uniform_int_distribution<std::int64_t> small(1, 5);
  const std::size_t row = yes[pick_row(rng)];
  Knobs k{small(rng) + 1, small(rng), small(rng) - 1};
  Workload w = bs[row](k);
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  for (auto& t : w.transactions) t.weight = weight(rng);
  w.name += "#" + std::to_string(seed % 100000);
  return w;
}

}  // namespace iconf
