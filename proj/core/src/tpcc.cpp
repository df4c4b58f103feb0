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

#include "iconf/tpcc.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>

#include "iconf/build.hpp"

namespace iconf::tpcc {

using namespace build;

namespace {

Value v(std::int64_t n) { return Value{n}; }
Value v(std::string s) { return Value{std::move(s)}; }

std::vector<InvariantSpec> named(std::vector<InvariantSpec> specs, const std::string& name) {
  for (std::size_t k = 0; k < specs.size(); ++k) {
    specs[k].name = specs.size() == 1 ? name : name + " (" + std::string(1, static_cast<char>('a' + k)) + ")";
  }
  return specs;
}

InvariantSpec with_filters(InvariantSpec s, std::vector<Filter> filter, std::vector<Filter> to_filter) {
  s.filter = std::move(filter);
  s.to_filter = std::move(to_filter);
  return s;
}

InvariantSpec resolved_sequence(std::string table, std::string field, std::string next_table,
                                std::string next_field) {
  InvariantSpec s = sequential(std::move(table), std::move(field), {"district"});
  s.resolve_table = "idmap";
  s.resolve_field = "real";
  s.next_table = std::move(next_table);
  s.next_field = std::move(next_field);
  return s;
}

std::vector<ConsistencyCondition> build_conditions() {
  std::vector<ConsistencyCondition> out;
  auto add = [&](int n, std::string desc, std::string type, std::string txns, std::vector<InvariantSpec> specs) {
    out.push_back({n, desc, std::move(type), std::move(txns),
                   named(std::move(specs), "tpcc-" + std::to_string(n) + " " + desc)});
  };
  add(1, "YTD wh sales = sum(YTD district sales)", "MV", "P",
      {view({sum("warehouse", "ytd", {kKeyField})}, {sum("district", "d_ytd", {"w"})})});
  add(2, "Per-district order IDs are sequential", "S_ID+FK", "N, D",
      {resolved_sequence("order", kKeyField, "district", "next_o_id"),
       foreign_key("idmap", kKeyField, "order", kKeyField)});
  add(3, "New order IDs are sequentially assigned", "S_ID", "N, D",
      {resolved_sequence("new_order", "o_id", "", "")});
  add(4, "Per-district, item order count = roll-up", "MV", "N",
      {view({sum("order", "ol_cnt", {"district"})}, {count("order_line", {"district"})})});
  add(5, "Order carrier is set iff order is pending", "FK", "N, D",
      {with_filters(foreign_key("order", kKeyField, "new_order", "o_id", true), {build::is_null("carrier")}, {}),
       with_filters(foreign_key("new_order", "o_id", "order", kKeyField, true), {}, {build::is_null("carrier")})});
  add(6, "Per-order item count = line item roll-up", "MV", "N",
      {view({sum("order", "ol_cnt", {kKeyField})}, {count("order_line", {"o_id"})})});
  add(7, "Delivery date set iff carrier ID set", "FK", "D",
      {with_filters(foreign_key("order_line", "o_id", "order", kKeyField, true), {not_null("delivery_d")},
                    {not_null("carrier")}),
       with_filters(foreign_key("order_line", "o_id", "order", kKeyField, true), {build::is_null("delivery_d")},
                    {build::is_null("carrier")})});
  add(8, "YTD wh = sum(historical wh)", "MV", "D",
      {view({sum("warehouse", "ytd", {kKeyField})}, {sum("history", "amount", {"w"})})});
  add(9, "YTD district = sum(historical district)", "MV", "P",
      {view({sum("district", "d_ytd", {kKeyField})}, {sum("history", "amount", {"district"})})});
  add(10, "Customer balance matches expenditures", "MV", "P, D",
      {view({sum("customer", "balance", {kKeyField})},
            {sum("order_line", "amount", {"customer"}, {not_null("delivery_d")}),
             sum("history", "amount", {"customer"}, {}, -1)})});
  add(11, "Orders reference New-Orders table", "FK", "N",
      {foreign_key("new_order", "o_id", "order", kKeyField)});
  add(12, "Per-customer balance = cust. expenditures", "MV", "P, D",
      {view({sum("customer", "balance", {kKeyField}), sum("customer", "ytd_payment", {kKeyField})},
            {sum("order_line", "amount", {"customer"}, {not_null("delivery_d")})})});
  return out;
}

std::optional<int> leading_int(std::string_view s) {
  int n = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc{} || p == s.data()) return std::nullopt;
  return n;
}

const Schema& static_schema() {
  static const Schema s = schema();
  return s;
}

std::vector<Operation> new_order_body(const NewOrderRequest& req) {
  const std::string dk = district_key(req.w, req.d);
  const std::string ck = customer_key(req.w, req.d, req.c);
  std::vector<Operation> ops = {
      read(ref("warehouse", lit(req.w))),
      read(ref("district", lit(dk))),
      read(ref("customer", lit(ck))),
      insert(ref("order", nonce("id")), {{"district", lit(dk)},
                                         {"customer", lit(ck)},
                                         {"ol_cnt", lit(static_cast<int>(req.lines.size()))},
                                         {"carrier", lit(Value{})}}),
      insert(ref("new_order", nonce("id")), {{"o_id", nonce("id")}, {"district", lit(dk)}}),
  };
  int number = 0;
  for (const auto& line : req.lines) {
    ++number;
    const std::string sk = stock_key(line.supply_w, line.item);
    const std::int64_t amount = std::int64_t{line.qty} * (1 + line.item % 50);
    ops.push_back(insert(ref("order_line", nonce("l" + std::to_string(number))),
                         {{"o_id", nonce("id")},
                          {"number", lit(number)},
                          {"district", lit(dk)},
                          {"customer", lit(ck)},
                          {"item", lit(sk)},
                          {"qty", lit(line.qty)},
                          {"amount", lit(v(amount))},
                          {"delivery_d", lit(Value{})}}));
    ops.push_back(dec(ref("stock", lit(sk)), "quantity", lit(line.qty)));
    ops.push_back(inc(ref("stock", lit(sk)), "ytd", lit(line.qty)));
    ops.push_back(inc(ref("stock", lit(sk)), "order_cnt"));
  }
  return ops;
}

Operation assign_op(Operand key, Operand district) {
  return assign_sequential(ref("idmap", std::move(key)), "real", ref("district", district), "next_o_id",
                           {{"district", district}});
}

Transaction delivery_from(const RecordView& order, const std::vector<const RecordView*>& lines, int carrier) {
  const Value tmp = key_value(order.key);
  std::vector<Operation> ops = {
      update(ref("order", lit(tmp)), {{"carrier", lit(carrier)}}),
      cascade({"new_order.o_id"}, lit(tmp)),
  };
  std::int64_t total = 0;
  for (const auto* line : lines) {
    ops.push_back(update(ref("order_line", lit(key_value(line->key))), {{"delivery_d", lit(1)}}));
    total += as_int(line->get("amount")).value_or(0);
  }
  ops.push_back(inc(ref("customer", lit(order.get("customer"))), "balance", lit(v(total))));
  return txn("delivery", std::move(ops));
}

}  // namespace

Schema schema() {
  Schema s;
  s.tables["warehouse"] = {{"name"}, {"ytd"}};
  s.tables["district"] = {{"w", "next_o_id"}, {"d_ytd"}};
  s.tables["customer"] = {{"w", "district"}, {"balance", "ytd_payment"}};
  s.tables["order"] = {{"district", "customer", "ol_cnt", "carrier"}, {}};
  s.tables["new_order"] = {{"o_id", "district"}, {}};
  s.tables["order_line"] = {
      {"o_id", "number", "district", "customer", "item", "qty", "amount", "delivery_d"}, {}};
  s.tables["idmap"] = {{"real", "district"}, {}};
  s.tables["stock"] = {{"w", "item"}, {"quantity", "ytd", "order_cnt"}};
  s.tables["history"] = {{"w", "district", "customer", "amount"}, {}};
  return s;
}

std::string district_key(int w, int d) { return std::to_string(w) + "." + std::to_string(d); }
std::string customer_key(int w, int d, int c) { return district_key(w, d) + "." + std::to_string(c); }
std::string stock_key(int w, int item) { return std::to_string(w) + "." + std::to_string(item); }

std::vector<InitialEntry> initial_entries(const Scale& scale) {
  std::vector<InitialEntry> out;
  auto record = [&](ItemId item, FieldMap fields) {
    InitialEntry e;
    e.item = std::move(item);
    e.fields = std::move(fields);
    out.push_back(std::move(e));
  };
  for (int w = 1; w <= scale.warehouses; ++w) {
    record(record_item("warehouse", std::to_string(w)), {{"name", v("W" + std::to_string(w))}});
    for (int d = 1; d <= kDistricts; ++d) {
      record(record_item("district", district_key(w, d)), {{"w", v(w)}, {"next_o_id", v(1)}});
      for (int c = 1; c <= scale.customers; ++c) {
        record(record_item("customer", customer_key(w, d, c)), {{"w", v(w)}, {"district", v(district_key(w, d))}});
      }
    }
    for (int i = 1; i <= scale.items; ++i) {
      const ItemId item = record_item("stock", stock_key(w, i));
      record(item, {{"w", v(w)}, {"item", v(i)}});
      InitialEntry q;
      q.kind = InitialEntry::Kind::Counter;
      q.item = counter_field_item(item, "quantity");
      q.value = scale.initial_stock;
      out.push_back(std::move(q));
    }
  }
  return out;
}

DatabaseState initial_state(const Scale& scale) {
  Workload w;
  w.schema = schema();
  w.initial = initial_entries(scale);
  return iconf::initial_state(w);
}

const std::vector<ConsistencyCondition>& conditions() {
  static const std::vector<ConsistencyCondition> rows = build_conditions();
  return rows;
}

std::vector<InvariantSpec> all_specs() {
  std::vector<InvariantSpec> out;
  for (const auto& c : conditions()) out.insert(out.end(), c.specs.begin(), c.specs.end());
  return out;
}

std::vector<InvariantSpec> confluent_specs() {
  std::vector<InvariantSpec> out;
  for (const auto& c : classify_tpcc()) {
    if (c.verdict != Verdict::IConfluent) continue;
    const auto& specs = conditions()[static_cast<std::size_t>(c.number - 1)].specs;
    out.insert(out.end(), specs.begin(), specs.end());
  }
  return out;
}

Transaction new_order_logical(int lines) {
  std::vector<Operation> ops = {
      read(ref("warehouse", par("w"))),
      read(ref("district", par("d"))),
      read(ref("customer", par("c"))),
      insert(ref("order", nonce("id")),
             {{"district", par("d")}, {"customer", par("c")}, {"ol_cnt", lit(lines)}, {"carrier", lit(Value{})}}),
      insert(ref("new_order", nonce("id")), {{"o_id", nonce("id")}, {"district", par("d")}}),
  };
  for (int k = 1; k <= lines; ++k) {
    const std::string n = std::to_string(k);
    ops.push_back(insert(ref("order_line", nonce("l" + n)), {{"o_id", nonce("id")},
                                                            {"number", lit(k)},
                                                            {"district", par("d")},
                                                            {"customer", par("c")},
                                                            {"item", par("s" + n)},
                                                            {"qty", par("q" + n)},
                                                            {"amount", par("a" + n)},
                                                            {"delivery_d", lit(Value{})}}));
    ops.push_back(dec(ref("stock", par("s" + n)), "quantity", par("q" + n)));
    ops.push_back(inc(ref("stock", par("s" + n)), "ytd", par("q" + n)));
    ops.push_back(inc(ref("stock", par("s" + n)), "order_cnt"));
  }
  ops.push_back(assign_op(nonce("id"), par("d")));
  return txn("new-order", std::move(ops));
}

Transaction payment_logical() {
  return txn("payment", {
                            read(ref("warehouse", par("w"))),
                            read(ref("district", par("d"))),
                            read(ref("customer", par("c"))),
                            inc(ref("warehouse", par("w")), "ytd", par("amount")),
                            inc(ref("district", par("d")), "d_ytd", par("amount")),
                            dec(ref("customer", par("c")), "balance", par("amount")),
                            inc(ref("customer", par("c")), "ytd_payment", par("amount")),
                            insert(ref("history", nonce("h")), {{"w", par("w")},
                                                                {"district", par("d")},
                                                                {"customer", par("c")},
                                                                {"amount", par("amount")}}),
                        });
}

Transaction delivery_logical(int lines) {
  std::vector<Operation> ops = {
      update(ref("order", par("o")), {{"carrier", par("carrier")}}),
      cascade({"new_order.o_id"}, par("o")),
  };
  for (int k = 1; k <= lines; ++k) {
    ops.push_back(update(ref("order_line", par("l" + std::to_string(k))), {{"delivery_d", lit(1)}}));
  }
  ops.push_back(inc(ref("customer", par("c")), "balance", par("total")));
  return txn("delivery", std::move(ops));
}

std::vector<ClassifiedCondition> classify_tpcc() {
  const std::map<std::string, Transaction> txns = {
      {"N", new_order_logical()}, {"P", payment_logical()}, {"D", delivery_logical()}};
  std::vector<ClassifiedCondition> out;
  for (const auto& c : conditions()) {
    ClassifiedCondition row{c.number, c.description, c.type, c.txns, Verdict::IConfluent, {}};
    for (const auto& [letter, t] : txns) {
      if (c.txns.find(letter) == std::string::npos) continue;
      const auto report = classify_transaction(t, c.specs);
      for (const auto& p : report.offending) {
        row.offending.push_back(t.name + ": " + p.operation + " (" + std::string(to_string(p.op_class)) + ")");
      }
    }
    if (!row.offending.empty()) row.verdict = Verdict::NotIConfluent;
    out.push_back(std::move(row));
  }
  return out;
}

Transaction new_order_local(const NewOrderRequest& req) {
  auto t = txn("new-order", new_order_body(req));
  t.args["w"] = v(req.w);
  t.args["district"] = v(district_key(req.w, req.d));
  return t;
}

Transaction assign_order_id(const Value& tmp, const std::string& district) {
  return txn("assign-order-id", {assign_op(lit(tmp), lit(district))});
}

Transaction new_order_serial(const NewOrderRequest& req) {
  auto t = new_order_local(req);
  t.operations.push_back(assign_op(nonce("id"), lit(district_key(req.w, req.d))));
  return t;
}

Transaction payment(int w, int d, const std::string& customer, std::int64_t amount) {
  const std::string dk = district_key(w, d);
  auto t = txn("payment", {
                              read(ref("warehouse", lit(w))),
                              read(ref("district", lit(dk))),
                              read(ref("customer", lit(customer))),
                              inc(ref("warehouse", lit(w)), "ytd", lit(v(amount))),
                              inc(ref("district", lit(dk)), "d_ytd", lit(v(amount))),
                              dec(ref("customer", lit(customer)), "balance", lit(v(amount))),
                              inc(ref("customer", lit(customer)), "ytd_payment", lit(v(amount))),
                              insert(ref("history", nonce("h")), {{"w", lit(w)},
                                                                  {"district", lit(dk)},
                                                                  {"customer", lit(customer)},
                                                                  {"amount", lit(v(amount))}}),
                          });
  t.args["w"] = v(w);
  return t;
}

std::optional<Transaction> delivery(const LogicalView& view, const Value& tmp, int carrier) {
  const auto* order = view.record(record_item("order", to_string(tmp)));
  if (order == nullptr) return std::nullopt;
  bool pending = false;
  for (const auto* no : view.table("new_order")) {
    if (no->get("o_id") == tmp) pending = true;
  }
  if (!pending) return std::nullopt;
  std::vector<const RecordView*> lines;
  for (const auto* line : view.table("order_line")) {
    if (line->get("o_id") == tmp) lines.push_back(line);
  }
  return delivery_from(*order, lines, carrier);
}

std::optional<Value> order_tmp_id(const TransactionOutcome& outcome) {
  for (const auto& ver : outcome.produced) {
    if (ver.kind == VersionKind::Write && table_of(ver.item) == "order") {
      return Value{std::string(key_of(ver.item))};
    }
  }
  return std::nullopt;
}

std::optional<std::int64_t> resolve_order_id(const LogicalView& view, const Value& tmp) {
  const auto* m = view.record(record_item("idmap", to_string(tmp)));
  if (m == nullptr) return std::nullopt;
  return as_int(m->get("real"));
}

NewOrderResult new_order_coordination_avoiding(const NewOrderRequest& req, ReplicaState& client,
                                               ReplicaState& home, const Invariant& commit_invariant) {
  {
    const LogicalView view = visible_state(client.local);
    auto need = [&](const ItemId& item) {
      if (view.record(item) == nullptr) throw Error(ErrorCode::ItemNotFound, "no such row " + item);
    };
    need(record_item("warehouse", std::to_string(req.w)));
    need(record_item("district", district_key(req.w, req.d)));
    need(record_item("customer", customer_key(req.w, req.d, req.c)));
    for (const auto& line : req.lines) need(record_item("stock", stock_key(line.supply_w, line.item)));
  }
  ExecutionContext ctx;
  ctx.schema = &static_schema();
  NewOrderResult out;
  auto [outcome, next] = apply_transaction(new_order_local(req), std::move(client), commit_invariant, ctx);
  client = std::move(next);
  out.local = std::move(outcome);
  if (!out.local.committed()) return out;
  out.tmp = *order_tmp_id(out.local);
  auto [assigned, home_next] =
      apply_transaction(assign_order_id(out.tmp, district_key(req.w, req.d)), std::move(home), commit_invariant, ctx);
  home = std::move(home_next);
  if (assigned.committed()) out.real = resolve_order_id(visible_state(home.local), out.tmp);
  return out;
}

std::optional<std::string> gap_free(const DatabaseState& s) {
  const LogicalView view = visible_state(s);
  std::map<std::string, std::vector<std::int64_t>> reals;
  for (const auto* order : view.table("order")) {
    const std::string district = to_string(order->get("district"));
    auto real = resolve_order_id(view, key_value(order->key));
    if (!real) return "order " + order->key + " has no real id";
    reals[district].push_back(*real);
  }
  for (const auto* d : view.table("district")) {
    auto& ids = reals[d->key];
    std::sort(ids.begin(), ids.end());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (ids[k] != static_cast<std::int64_t>(k) + 1) {
        return "district " + d->key + ": expected id " + std::to_string(k + 1) + ", found " +
               std::to_string(ids[k]);
      }
    }
    const auto next = as_int(d->get("next_o_id"));
    if (!next || *next != static_cast<std::int64_t>(ids.size()) + 1) {
      return "district " + d->key + ": next_o_id " + to_string(d->get("next_o_id")) + " after " +
             std::to_string(ids.size()) + " orders";
    }
  }
  return std::nullopt;
}

Workload workload(const Scale& scale_in) {
  Scale scale = scale_in;
  scale.warehouses = 1;
  Workload w;
  w.name = "tpcc";
  w.schema = schema();
  w.invariants = all_specs();
  w.initial = initial_entries(scale);

  std::vector<Value> districts;
  std::vector<Value> customers;
  std::vector<Value> stock;
  for (int d = 1; d <= kDistricts; ++d) {
    districts.push_back(v(district_key(1, d)));
    for (int c = 1; c <= scale.customers; ++c) customers.push_back(v(customer_key(1, d, c)));
  }
  for (int i = 1; i <= scale.items; ++i) stock.push_back(v(stock_key(1, i)));

  const int lines = 5;
  TransactionTemplate no{new_order_logical(lines), {}, 0.8};
  no.params["w"] = ParamDomain::range(1, 1);
  no.params["d"] = ParamDomain::choice(districts);
  no.params["c"] = ParamDomain::choice(customers);
  for (int k = 1; k <= lines; ++k) {
    const std::string n = std::to_string(k);
    no.params["s" + n] = ParamDomain::choice(stock);
    no.params["q" + n] = ParamDomain::range(1, 10);
    no.params["a" + n] = ParamDomain::range(1, 100);
  }
  TransactionTemplate pay{payment_logical(), {}, 0.2};
  pay.params["w"] = ParamDomain::range(1, 1);
  pay.params["d"] = ParamDomain::choice(districts);
  pay.params["c"] = ParamDomain::choice(customers);
  pay.params["amount"] = ParamDomain::range(1, 5000);
  // Delivery is listed for analysis only; it needs concrete pending orders.
  TransactionTemplate del{delivery_logical(lines), {}, 0.0};
  del.params["o"] = ParamDomain::choice({v("none")});
  for (int k = 1; k <= lines; ++k) del.params["l" + std::to_string(k)] = ParamDomain::choice({v("none")});
  del.params["c"] = ParamDomain::choice(customers);
  del.params["carrier"] = ParamDomain::range(1, 10);
  del.params["total"] = ParamDomain::range(0, 0);
  w.transactions = {no, pay, del};
  return w;
}

Config default_config(int servers) {
  Config cfg;
  cfg.scale.warehouses = servers;
  cfg.sim.replicas = static_cast<std::size_t>(servers);
  cfg.sim.clients = static_cast<std::size_t>(servers) * 4;
  cfg.sim.duration = 100;
  cfg.sim.exec_cost = 1.0;
  cfg.sim.anti_entropy_interval = 20;
  cfg.sim.network.base_delay = 20;
  cfg.sim.network.jitter = LatencyDistribution::uniform(0, 5);
  return cfg;
}

Driver::Driver(Config cfg) : cfg_(std::move(cfg)), schema_(schema()) {
  if (cfg_.scale.warehouses < 1 || cfg_.scale.items < 1 || cfg_.scale.customers < 1) {
    throw Error(ErrorCode::ConfigInvalid, "tpcc scale needs at least one warehouse, item and customer");
  }
  if (cfg_.min_lines < 1 || cfg_.max_lines < cfg_.min_lines || cfg_.max_lines > cfg_.scale.items) {
    throw Error(ErrorCode::ConfigInvalid, "tpcc order line bounds are invalid");
  }
  if (cfg_.distributed_fraction < 0 || cfg_.distributed_fraction > 1 || cfg_.payment_fraction < 0 ||
      cfg_.payment_fraction > 1 || cfg_.delivery_fraction < 0 || cfg_.delivery_fraction > 1) {
    throw Error(ErrorCode::ConfigInvalid, "tpcc fractions must lie in [0, 1]");
  }
  initial_ = initial_state(cfg_.scale);
  confluent_ = make_invariant(confluent_specs(), "tpcc confluent conditions");
  all_ = make_invariant(all_specs(), "tpcc conditions");
  ctx_.schema = &schema_;
}

ReplicaId Driver::warehouse_home(int w, std::size_t replicas) const {
  return static_cast<ReplicaId>(static_cast<std::size_t>(w - 1) % replicas);
}

ReplicaId Driver::client_replica(std::size_t client, std::size_t replicas) const {
  const int w = static_cast<int>(client % static_cast<std::size_t>(cfg_.scale.warehouses)) + 1;
  return warehouse_home(w, replicas);
}

ReplicaId Driver::home(const ItemId& item, std::size_t replicas) const {
  const auto table = table_of(item);
  if (table == "warehouse" || table == "district" || table == "customer" || table == "stock") {
    if (auto w = leading_int(key_of(item)); w && *w >= 1) return warehouse_home(*w, replicas);
  }
  return 0;
}

Transaction Driver::next(std::size_t client, ReplicaId, bool coordinated, Rng& rng) {
  const int warehouses = cfg_.scale.warehouses;
  const int w = static_cast<int>(client % static_cast<std::size_t>(warehouses)) + 1;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> district(1, kDistricts);
  std::uniform_int_distribution<int> customer(1, cfg_.scale.customers);
  auto other_warehouse = [&] {
    std::uniform_int_distribution<int> pick(1, warehouses - 1);
    const int o = pick(rng);
    return o >= w ? o + 1 : o;
  };
  const bool payment_txn = unit(rng) < cfg_.payment_fraction;
  const bool distributed = unit(rng) < cfg_.distributed_fraction && warehouses > 1;
  if (payment_txn) {
    const int d = district(rng);
    const int cw = distributed ? other_warehouse() : w;
    const std::string ck = customer_key(cw, district(rng), customer(rng));
    std::uniform_int_distribution<std::int64_t> amount(1, 5000);
    return payment(w, d, ck, amount(rng));
  }
  NewOrderRequest req;
  req.w = w;
  req.d = district(rng);
  req.c = customer(rng);
  std::uniform_int_distribution<int> nlines(cfg_.min_lines, cfg_.max_lines);
  const int n = nlines(rng);
  std::vector<int> items(static_cast<std::size_t>(cfg_.scale.items));
  std::iota(items.begin(), items.end(), 1);
  std::uniform_int_distribution<int> qty(1, 10);
  for (int k = 0; k < n; ++k) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), items.size() - 1);
    std::swap(items[static_cast<std::size_t>(k)], items[pick(rng)]);
    req.lines.push_back(OrderLine{w, items[static_cast<std::size_t>(k)], qty(rng)});
  }
  if (distributed) {
    std::uniform_int_distribution<std::size_t> which(0, req.lines.size() - 1);
    req.lines[which(rng)].supply_w = other_warehouse();
  }
  return coordinated ? new_order_serial(req) : new_order_local(req);
}

std::optional<SiteRequest> Driver::site_step(const Transaction& txn, const TransactionOutcome& outcome,
                                             ReplicaId, std::size_t replicas) {
  if (txn.name != "new-order") return std::nullopt;
  if (std::holds_alternative<op::AssignSequential>(txn.operations.back())) return std::nullopt;
  auto tmp = order_tmp_id(outcome);
  if (!tmp) return std::nullopt;
  const int w = static_cast<int>(*as_int(txn.args.at("w")));
  const std::string district = std::get<std::string>(txn.args.at("district"));
  return SiteRequest{warehouse_home(w, replicas), assign_order_id(*tmp, district)};
}

std::vector<SiteRequest> Driver::finish(const std::vector<ReplicaState>& replicas) {
  std::vector<SiteRequest> out;
  std::map<ReplicaId, LogicalView> views;
  for (int w = 1; w <= cfg_.scale.warehouses; ++w) {
    const ReplicaId h = warehouse_home(w, replicas.size());
    auto it = views.find(h);
    if (it == views.end()) it = views.emplace(h, visible_state(replicas[h].local)).first;
    const LogicalView& view = it->second;

    std::map<std::string, std::vector<const RecordView*>> lines;
    for (const auto* line : view.table("order_line")) lines[to_string(line->get("o_id"))].push_back(line);

    std::map<std::string, std::vector<std::pair<std::int64_t, const RecordView*>>> pending;
    for (const auto* no : view.table("new_order")) {
      const Value tmp = no->get("o_id");
      const auto* order = view.record(record_item("order", to_string(tmp)));
      const auto real = resolve_order_id(view, tmp);
      if (order == nullptr || !real) continue;
      const std::string district = to_string(no->get("district"));
      if (leading_int(district) != w) continue;
      pending[district].emplace_back(*real, order);
    }
    for (auto& [district, orders] : pending) {
      std::sort(orders.begin(), orders.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      const auto n = static_cast<std::size_t>(cfg_.delivery_fraction * static_cast<double>(orders.size()));
      for (std::size_t k = 0; k < n; ++k) {
        const auto& [real, order] = orders[k];
        out.push_back(SiteRequest{h, delivery_from(*order, lines[order->key], static_cast<int>(1 + real % 10))});
      }
    }
  }
  return out;
}

bool Result::all_hold() const {
  return gap_free && std::all_of(audit.begin(), audit.end(), [](const auto& a) { return a.holds; });
}

Result run_tpcc(const Config& cfg) {
  Driver driver(cfg);
  Result r;
  r.metrics = simulate(driver, cfg.sim);
  const LogicalView view = visible_state(r.metrics.final_state);
  for (const auto& c : conditions()) {
    auto verdict = evaluate(c.specs, view);
    r.audit.push_back(ConditionAudit{c.number, verdict.valid, verdict.witness});
  }
  auto gap = gap_free(r.metrics.final_state);
  r.gap_free = !gap;
  r.gap_detail = gap.value_or("");
  r.orders = view.table("order").size();
  return r;
}

}  // namespace iconf::tpcc
