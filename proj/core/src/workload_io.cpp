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

#include "iconf/workload_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "iconf/classify.hpp"
#include "json.hpp"

namespace iconf {

using Json = nlohmann::ordered_json;

namespace {

std::string join(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "\n";
    out += d.location + ": " + std::string(to_string(d.code)) + ": " + d.message;
  }
  return out;
}

// ---- serialization ----

Json value_json(const Value& v) {
  if (auto i = as_int(v)) return *i;
  if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
  return nullptr;
}

Json operand_json(const Operand& o) {
  switch (o.kind) {
    case Operand::Kind::Literal: return value_json(o.literal);
    case Operand::Kind::Param: return Json{{"param", o.name}};
    case Operand::Kind::Nonce: return Json{{"nonce", o.name}};
  }
  return nullptr;
}

Json fields_json(const FieldWrites& ws) {
  Json out = Json::object();
  for (const auto& [field, operand] : ws) out[field] = operand_json(operand);
  return out;
}

void put_ref(Json& j, const ItemRef& r, const char* table = "table", const char* key = "key") {
  j[table] = r.table;
  if (r.key) j[key] = operand_json(*r.key);
}

std::string_view counter_op(op::CounterKind k) {
  switch (k) {
    case op::CounterKind::Increment: return "increment";
    case op::CounterKind::Decrement: return "decrement";
    case op::CounterKind::Assign: return "assign";
  }
  return "increment";
}

Json operation_json(const Operation& operation) {
  Json j = Json::object();
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, op::Read>) {
          j["op"] = "read";
          put_ref(j, o.item);
        } else if constexpr (std::is_same_v<T, op::Insert>) {
          j["op"] = "insert";
          put_ref(j, o.item);
          j["fields"] = fields_json(o.fields);
        } else if constexpr (std::is_same_v<T, op::Update>) {
          j["op"] = "update";
          put_ref(j, o.item);
          j["fields"] = fields_json(o.fields);
          if (!o.index_table.empty()) {
            j["index_table"] = o.index_table;
            j["index_field"] = o.index_field;
          }
        } else if constexpr (std::is_same_v<T, op::Delete>) {
          j["op"] = "delete";
          put_ref(j, o.item);
        } else if constexpr (std::is_same_v<T, op::CascadeDelete>) {
          j["op"] = "cascade_delete";
          j["targets"] = o.targets;
          j["value"] = operand_json(o.value);
        } else if constexpr (std::is_same_v<T, op::Counter>) {
          j["op"] = counter_op(o.kind);
          put_ref(j, o.item);
          if (!o.field.empty()) j["field"] = o.field;
          if (!(o.amount == Operand::lit(std::int64_t{1}))) j["amount"] = operand_json(o.amount);
        } else if constexpr (std::is_same_v<T, op::Collection>) {
          j["op"] = o.kind == op::CollectionKind::Add ? "add" : "del";
          put_ref(j, o.item);
          j["element"] = operand_json(o.element);
        } else if constexpr (std::is_same_v<T, op::AbortIf>) {
          j["op"] = "abort_if";
          j["condition"] = operand_json(o.condition);
        } else if constexpr (std::is_same_v<T, op::AssignSequential>) {
          j["op"] = "assign_sequential";
          put_ref(j, o.item);
          j["field"] = o.field;
          j["fields"] = fields_json(o.fields);
          put_ref(j, o.counter_item, "counter_table", "counter_key");
          j["counter_field"] = o.counter_field;
        }
      },
      operation);
  return j;
}

std::string_view filter_op(Filter::Op op) {
  switch (op) {
    case Filter::Op::Eq: return "eq";
    case Filter::Op::Ne: return "ne";
    case Filter::Op::IsNull: return "is_null";
    case Filter::Op::NotNull: return "not_null";
  }
  return "eq";
}

Json filters_json(const std::vector<Filter>& fs) {
  Json out = Json::array();
  for (const auto& f : fs) {
    Json j{{"field", f.field}, {"op", filter_op(f.op)}};
    if (f.op == Filter::Op::Eq || f.op == Filter::Op::Ne) j["value"] = value_json(f.value);
    out.push_back(std::move(j));
  }
  return out;
}

Json aggregate_json(const Aggregate& a) {
  Json j{{"table", a.table}, {"fn", a.fn == Aggregate::Fn::Count ? "count" : "sum"}};
  if (!a.field.empty()) j["field"] = a.field;
  if (!a.group_by.empty()) j["group_by"] = a.group_by;
  if (!a.filter.empty()) j["filter"] = filters_json(a.filter);
  if (a.coefficient != 1) j["coefficient"] = a.coefficient;
  return j;
}

Json aggregates_json(const std::vector<Aggregate>& as) {
  Json out = Json::array();
  for (const auto& a : as) out.push_back(aggregate_json(a));
  return out;
}

Json spec_json(const InvariantSpec& s) {
  Json j{{"class", to_string(s.cls)}};
  auto str = [&](const char* k, const std::string& v) {
    if (!v.empty()) j[k] = v;
  };
  str("name", s.name);
  str("table", s.table);
  str("field", s.field);
  if (!s.filter.empty()) j["filter"] = filters_json(s.filter);
  if (!s.group_by.empty()) j["group_by"] = s.group_by;
  if (!is_null(s.constant)) j["constant"] = value_json(s.constant);
  if (s.bound != 0) j["bound"] = s.bound;
  str("item", s.item);
  str("resolve_table", s.resolve_table);
  str("resolve_field", s.resolve_field);
  str("next_table", s.next_table);
  str("next_field", s.next_field);
  str("to_table", s.to_table);
  str("to_field", s.to_field);
  if (!s.to_filter.empty()) j["to_filter"] = filters_json(s.to_filter);
  if (s.cascade) j["cascade"] = true;
  str("index_table", s.index_table);
  if (!s.lhs.empty()) j["lhs"] = aggregates_json(s.lhs);
  if (!s.rhs.empty()) j["rhs"] = aggregates_json(s.rhs);
  return j;
}

Json domain_json(const ParamDomain& d) {
  if (d.kind == ParamDomain::Kind::Range) return Json{{"range", Json::array({d.lo, d.hi})}};
  Json choices = Json::array();
  for (const auto& v : d.choices) choices.push_back(value_json(v));
  return Json{{"choice", choices}};
}

Json field_map_json(const FieldMap& fields) {
  Json out = Json::object();
  for (const auto& [k, v] : fields) out[k] = value_json(v);
  return out;
}

// ---- parsing ----

class Parser {
 public:
  std::vector<Diagnostic> diags;

  void error(ErrorCode code, const std::string& at, const std::string& msg) {
    diags.push_back(Diagnostic{code, at.empty() ? "/" : at, msg});
  }
  void syntax(const std::string& at, const std::string& msg) { error(ErrorCode::SyntaxError, at, msg); }

  const Json* member(const Json& j, const char* key, const std::string& at, bool required) {
    if (!j.is_object()) {
      syntax(at, "expected an object");
      return nullptr;
    }
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) syntax(at, std::string("missing '") + key + "'");
      return nullptr;
    }
    return &*it;
  }

  std::string str(const Json& j, const char* key, const std::string& at, bool required = true) {
    const Json* v = member(j, key, at, required);
    if (v == nullptr) return {};
    if (!v->is_string()) {
      syntax(at + "/" + key, "expected a string");
      return {};
    }
    return v->get<std::string>();
  }

  std::vector<std::string> strings(const Json& j, const char* key, const std::string& at) {
    std::vector<std::string> out;
    const Json* v = member(j, key, at, false);
    if (v == nullptr) return out;
    if (!v->is_array()) {
      syntax(at + "/" + key, "expected an array of strings");
      return out;
    }
    for (std::size_t k = 0; k < v->size(); ++k) {
      if (!(*v)[k].is_string()) {
        syntax(at + "/" + key + "/" + std::to_string(k), "expected a string");
        continue;
      }
      out.push_back((*v)[k].get<std::string>());
    }
    return out;
  }

  std::int64_t integer(const Json& j, const char* key, const std::string& at, std::int64_t def) {
    const Json* v = member(j, key, at, false);
    if (v == nullptr) return def;
    if (!v->is_number_integer()) {
      syntax(at + "/" + key, "expected an integer");
      return def;
    }
    return v->get<std::int64_t>();
  }

  Value value(const Json& j, const std::string& at) {
    if (j.is_null()) return Value{};
    if (j.is_number_integer()) return Value{j.get<std::int64_t>()};
    if (j.is_string()) return Value{j.get<std::string>()};
    syntax(at, "expected null, an integer or a string");
    return Value{};
  }

  Operand operand(const Json& j, const std::string& at) {
    if (j.is_object()) {
      if (j.size() == 1 && j.contains("param") && j["param"].is_string()) {
        return Operand::param(j["param"].get<std::string>());
      }
      if (j.size() == 1 && j.contains("nonce") && j["nonce"].is_string()) {
        return Operand::nonce(j["nonce"].get<std::string>());
      }
      syntax(at, "operand object must be {\"param\": name} or {\"nonce\": slot}");
      return Operand{};
    }
    return Operand::lit(value(j, at));
  }

  FieldWrites field_writes(const Json& j, const char* key, const std::string& at) {
    FieldWrites out;
    const Json* v = member(j, key, at, false);
    if (v == nullptr) return out;
    if (!v->is_object()) {
      syntax(at + "/" + key, "expected an object of field operands");
      return out;
    }
    for (auto it = v->begin(); it != v->end(); ++it) {
      out.emplace_back(it.key(), operand(it.value(), at + "/" + key + "/" + it.key()));
    }
    return out;
  }

  ItemRef item_ref(const Json& j, const std::string& at, const char* table = "table", const char* key = "key") {
    ItemRef r;
    r.table = str(j, table, at);
    if (const Json* k = member(j, key, at, false)) r.key = operand(*k, at + "/" + key);
    return r;
  }

  Operation operation(const Json& j, const std::string& at) {
    const std::string kind = str(j, "op", at);
    if (kind == "read") return op::Read{item_ref(j, at)};
    if (kind == "insert") return op::Insert{item_ref(j, at), field_writes(j, "fields", at)};
    if (kind == "update") {
      op::Update u{item_ref(j, at), field_writes(j, "fields", at), str(j, "index_table", at, false),
                   str(j, "index_field", at, false)};
      return u;
    }
    if (kind == "delete") return op::Delete{item_ref(j, at)};
    if (kind == "cascade_delete") {
      op::CascadeDelete c;
      c.targets = strings(j, "targets", at);
      if (const Json* v = member(j, "value", at, true)) c.value = operand(*v, at + "/value");
      return c;
    }
    if (kind == "increment" || kind == "decrement" || kind == "assign") {
      op::Counter c;
      c.item = item_ref(j, at);
      c.field = str(j, "field", at, false);
      c.kind = kind == "increment"   ? op::CounterKind::Increment
               : kind == "decrement" ? op::CounterKind::Decrement
                                     : op::CounterKind::Assign;
      if (const Json* v = member(j, "amount", at, false)) c.amount = operand(*v, at + "/amount");
      return c;
    }
    if (kind == "add" || kind == "del") {
      op::Collection c;
      c.item = item_ref(j, at);
      c.kind = kind == "add" ? op::CollectionKind::Add : op::CollectionKind::Del;
      if (const Json* v = member(j, "element", at, true)) c.element = operand(*v, at + "/element");
      return c;
    }
    if (kind == "abort_if") {
      op::AbortIf a;
      if (const Json* v = member(j, "condition", at, true)) a.condition = operand(*v, at + "/condition");
      return a;
    }
    if (kind == "assign_sequential") {
      op::AssignSequential a;
      a.item = item_ref(j, at);
      a.field = str(j, "field", at);
      a.fields = field_writes(j, "fields", at);
      a.counter_item = item_ref(j, at, "counter_table", "counter_key");
      a.counter_field = str(j, "counter_field", at);
      return a;
    }
    if (!kind.empty()) syntax(at + "/op", "unknown operation '" + kind + "'");
    return op::Read{};
  }

  std::vector<Filter> filters(const Json& j, const char* key, const std::string& at) {
    std::vector<Filter> out;
    const Json* v = member(j, key, at, false);
    if (v == nullptr) return out;
    if (!v->is_array()) {
      syntax(at + "/" + key, "expected an array");
      return out;
    }
    for (std::size_t k = 0; k < v->size(); ++k) {
      const std::string here = at + "/" + key + "/" + std::to_string(k);
      Filter f;
      f.field = str((*v)[k], "field", here);
      const std::string op = str((*v)[k], "op", here);
      if (op == "eq") {
        f.op = Filter::Op::Eq;
      } else if (op == "ne") {
        f.op = Filter::Op::Ne;
      } else if (op == "is_null") {
        f.op = Filter::Op::IsNull;
      } else if (op == "not_null") {
        f.op = Filter::Op::NotNull;
      } else if (!op.empty()) {
        syntax(here + "/op", "unknown filter '" + op + "'");
      }
      if (const Json* val = member((*v)[k], "value", here, false)) f.value = value(*val, here + "/value");
      out.push_back(std::move(f));
    }
    return out;
  }

  Aggregate aggregate(const Json& j, const std::string& at) {
    Aggregate a;
    a.table = str(j, "table", at);
    const std::string fn = str(j, "fn", at);
    if (fn == "sum") {
      a.fn = Aggregate::Fn::Sum;
    } else if (fn != "count" && !fn.empty()) {
      syntax(at + "/fn", "unknown aggregate '" + fn + "'");
    }
    a.field = str(j, "field", at, false);
    a.group_by = strings(j, "group_by", at);
    a.filter = filters(j, "filter", at);
    a.coefficient = integer(j, "coefficient", at, 1);
    return a;
  }

  std::vector<Aggregate> aggregates(const Json& j, const char* key, const std::string& at) {
    std::vector<Aggregate> out;
    const Json* v = member(j, key, at, false);
    if (v == nullptr) return out;
    if (!v->is_array()) {
      syntax(at + "/" + key, "expected an array");
      return out;
    }
    for (std::size_t k = 0; k < v->size(); ++k) {
      out.push_back(aggregate((*v)[k], at + "/" + key + "/" + std::to_string(k)));
    }
    return out;
  }

  InvariantSpec spec(const Json& j, const std::string& at) {
    InvariantSpec s;
    const std::string cls = str(j, "class", at);
    if (auto c = invariant_class_from_string(cls)) {
      s.cls = *c;
    } else if (!cls.empty()) {
      syntax(at + "/class", "unknown invariant class '" + cls + "'");
    }
    s.name = str(j, "name", at, false);
    s.table = str(j, "table", at, false);
    s.field = str(j, "field", at, false);
    s.filter = filters(j, "filter", at);
    s.group_by = strings(j, "group_by", at);
    if (const Json* v = member(j, "constant", at, false)) s.constant = value(*v, at + "/constant");
    s.bound = integer(j, "bound", at, 0);
    s.item = str(j, "item", at, false);
    s.resolve_table = str(j, "resolve_table", at, false);
    s.resolve_field = str(j, "resolve_field", at, false);
    s.next_table = str(j, "next_table", at, false);
    s.next_field = str(j, "next_field", at, false);
    s.to_table = str(j, "to_table", at, false);
    s.to_field = str(j, "to_field", at, false);
    s.to_filter = filters(j, "to_filter", at);
    if (const Json* v = member(j, "cascade", at, false)) {
      if (v->is_boolean()) {
        s.cascade = v->get<bool>();
      } else {
        syntax(at + "/cascade", "expected a boolean");
      }
    }
    s.index_table = str(j, "index_table", at, false);
    s.lhs = aggregates(j, "lhs", at);
    s.rhs = aggregates(j, "rhs", at);
    return s;
  }

  ParamDomain domain(const Json& j, const std::string& at) {
    if (j.is_object() && j.contains("range")) {
      const Json& r = j["range"];
      if (r.is_array() && r.size() == 2 && r[0].is_number_integer() && r[1].is_number_integer() &&
          r[0].get<std::int64_t>() <= r[1].get<std::int64_t>()) {
        return ParamDomain::range(r[0].get<std::int64_t>(), r[1].get<std::int64_t>());
      }
      syntax(at + "/range", "expected [lo, hi] with lo <= hi");
      return {};
    }
    if (j.is_object() && j.contains("choice")) {
      const Json& c = j["choice"];
      if (!c.is_array() || c.empty()) {
        syntax(at + "/choice", "expected a nonempty array");
        return {};
      }
      std::vector<Value> values;
      for (std::size_t k = 0; k < c.size(); ++k) values.push_back(value(c[k], at + "/choice/" + std::to_string(k)));
      return ParamDomain::choice(std::move(values));
    }
    syntax(at, "parameter domain must be {\"range\": [lo, hi]} or {\"choice\": [...]}");
    return {};
  }

  FieldMap field_map(const Json& j, const std::string& at) {
    FieldMap out;
    if (!j.is_object()) {
      syntax(at, "expected an object");
      return out;
    }
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = value(it.value(), at + "/" + it.key());
    return out;
  }

  Workload workload(const Json& root) {
    Workload w;
    if (!root.is_object()) {
      syntax("/", "document must be an object");
      return w;
    }
    w.name = str(root, "name", "", false);

    if (const Json* s = member(root, "schema", "", true)) {
      if (const Json* tables = member(*s, "tables", "/schema", false)) {
        if (tables->is_object()) {
          for (auto it = tables->begin(); it != tables->end(); ++it) {
            const std::string at = "/schema/tables/" + it.key();
            TableSchema ts;
            ts.fields = strings(it.value(), "fields", at);
            ts.counter_fields = strings(it.value(), "counters", at);
            w.schema.tables[it.key()] = std::move(ts);
          }
        } else {
          syntax("/schema/tables", "expected an object");
        }
      }
      w.schema.counters = strings(*s, "counters", "/schema");
      w.schema.collections = strings(*s, "collections", "/schema");
    }

    if (const Json* inv = member(root, "invariants", "", false)) {
      if (inv->is_array()) {
        for (std::size_t k = 0; k < inv->size(); ++k) {
          w.invariants.push_back(spec((*inv)[k], "/invariants/" + std::to_string(k)));
        }
      } else {
        syntax("/invariants", "expected an array");
      }
    }

    if (const Json* views = member(root, "views", "", false)) {
      if (views->is_array()) {
        for (std::size_t k = 0; k < views->size(); ++k) {
          const std::string at = "/views/" + std::to_string(k);
          const Json& j = (*views)[k];
          ViewFunction vf;
          vf.name = str(j, "name", at, false);
          if (const Json* src = member(j, "source", at, true)) vf.source = aggregate(*src, at + "/source");
          vf.view_table = str(j, "view_table", at);
          vf.view_field = str(j, "view_field", at);
          if (const Json* c = member(j, "counter", at, false); c != nullptr && c->is_boolean()) {
            vf.counter = c->get<bool>();
          }
          w.views.push_back(std::move(vf));
        }
      } else {
        syntax("/views", "expected an array");
      }
    }

    if (const Json* txns = member(root, "transactions", "", false)) {
      if (txns->is_array()) {
        for (std::size_t k = 0; k < txns->size(); ++k) {
          const std::string at = "/transactions/" + std::to_string(k);
          const Json& j = (*txns)[k];
          TransactionTemplate t;
          t.txn.name = str(j, "name", at);
          if (const Json* wt = member(j, "weight", at, false)) {
            if (wt->is_number() && wt->get<double>() >= 0) {
              t.weight = wt->get<double>();
            } else {
              syntax(at + "/weight", "expected a nonnegative number");
            }
          }
          t.txn.declared_writeset = strings(j, "writeset", at);
          if (const Json* params = member(j, "params", at, false)) {
            if (params->is_object()) {
              for (auto it = params->begin(); it != params->end(); ++it) {
                t.params[it.key()] = domain(it.value(), at + "/params/" + it.key());
              }
            } else {
              syntax(at + "/params", "expected an object");
            }
          }
          if (const Json* args = member(j, "args", at, false)) {
            if (args->is_object()) {
              for (auto it = args->begin(); it != args->end(); ++it) {
                t.txn.args[it.key()] = value(it.value(), at + "/args/" + it.key());
              }
            } else {
              syntax(at + "/args", "expected an object");
            }
          }
          if (const Json* ops = member(j, "operations", at, true)) {
            if (ops->is_array()) {
              for (std::size_t n = 0; n < ops->size(); ++n) {
                t.txn.operations.push_back(operation((*ops)[n], at + "/operations/" + std::to_string(n)));
              }
            } else {
              syntax(at + "/operations", "expected an array");
            }
          }
          w.transactions.push_back(std::move(t));
        }
      } else {
        syntax("/transactions", "expected an array");
      }
    }

    if (const Json* init = member(root, "initial", "", false)) {
      if (init->is_array()) {
        for (std::size_t k = 0; k < init->size(); ++k) {
          const std::string at = "/initial/" + std::to_string(k);
          const Json& j = (*init)[k];
          InitialEntry e;
          if (j.is_object() && j.contains("record")) {
            e.kind = InitialEntry::Kind::Record;
            e.item = str(j, "record", at);
            if (const Json* f = member(j, "fields", at, false)) e.fields = field_map(*f, at + "/fields");
          } else if (j.is_object() && j.contains("counter")) {
            e.kind = InitialEntry::Kind::Counter;
            e.item = str(j, "counter", at);
            e.value = integer(j, "value", at, 0);
          } else if (j.is_object() && j.contains("collection")) {
            e.kind = InitialEntry::Kind::Collection;
            e.item = str(j, "collection", at);
            if (const Json* el = member(j, "elements", at, false); el != nullptr && el->is_array()) {
              for (std::size_t n = 0; n < el->size(); ++n) {
                e.elements.push_back(value((*el)[n], at + "/elements/" + std::to_string(n)));
              }
            }
          } else {
            syntax(at, "initial entry needs one of 'record', 'counter', 'collection'");
            continue;
          }
          w.initial.push_back(std::move(e));
        }
      } else {
        syntax("/initial", "expected an array");
      }
    }
    return w;
  }

  // ---- reference resolution ----

  void unresolved(const std::string& at, const std::string& msg) {
    error(ErrorCode::UnresolvedReference, at, msg);
  }

  void need_table(const Schema& s, const std::string& t, const std::string& at) {
    if (!t.empty() && !s.has_table(t)) unresolved(at, "unknown table '" + t + "'");
  }

  void need_field(const Schema& s, const std::string& t, const std::string& f, const std::string& at) {
    if (t.empty() || f.empty() || f == kKeyField) return;
    if (!s.has_table(t)) {
      unresolved(at, "unknown table '" + t + "'");
      return;
    }
    if (s.tables.count(t) > 0 && !s.has_field(t, f)) unresolved(at, "unknown field '" + f + "' of table '" + t + "'");
  }

  void need_counter_field(const Schema& s, const std::string& t, const std::string& f, const std::string& at) {
    auto it = s.tables.find(t);
    if (it == s.tables.end()) return;
    const auto& cf = it->second.counter_fields;
    if (std::find(cf.begin(), cf.end(), f) == cf.end()) {
      unresolved(at, "field '" + f + "' of table '" + t + "' is not a counter");
    }
  }

  void check_spec_refs(const Schema& s, const InvariantSpec& spec, const std::string& at) {
    need_table(s, spec.table, at + "/table");
    need_field(s, spec.table, spec.field, at + "/field");
    for (std::size_t k = 0; k < spec.filter.size(); ++k) {
      need_field(s, spec.table, spec.filter[k].field, at + "/filter/" + std::to_string(k) + "/field");
    }
    for (std::size_t k = 0; k < spec.group_by.size(); ++k) {
      need_field(s, spec.table, spec.group_by[k], at + "/group_by/" + std::to_string(k));
    }
    need_field(s, spec.resolve_table, spec.resolve_field, at + "/resolve_field");
    need_table(s, spec.resolve_table, at + "/resolve_table");
    need_field(s, spec.next_table, spec.next_field, at + "/next_field");
    need_table(s, spec.next_table, at + "/next_table");
    need_table(s, spec.to_table, at + "/to_table");
    need_field(s, spec.to_table, spec.to_field, at + "/to_field");
    for (std::size_t k = 0; k < spec.to_filter.size(); ++k) {
      need_field(s, spec.to_table, spec.to_filter[k].field, at + "/to_filter/" + std::to_string(k) + "/field");
    }
    need_table(s, spec.index_table, at + "/index_table");
    if (!spec.item.empty()) {
      const std::string base = spec.item.substr(0, spec.item.find('#'));
      need_table(s, std::string(table_of(base)), at + "/item");
    }
    for (const auto* side : {"lhs", "rhs"}) {
      const auto& terms = std::string(side) == "lhs" ? spec.lhs : spec.rhs;
      for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string here = at + "/" + side + "/" + std::to_string(k);
        need_table(s, terms[k].table, here + "/table");
        need_field(s, terms[k].table, terms[k].field, here + "/field");
        for (std::size_t g = 0; g < terms[k].group_by.size(); ++g) {
          need_field(s, terms[k].table, terms[k].group_by[g], here + "/group_by/" + std::to_string(g));
        }
        for (std::size_t f = 0; f < terms[k].filter.size(); ++f) {
          need_field(s, terms[k].table, terms[k].filter[f].field, here + "/filter/" + std::to_string(f) + "/field");
        }
      }
    }
  }

  void check_operand(const TransactionTemplate& t, const Operand& o, const std::string& at) {
    if (o.kind == Operand::Kind::Param && t.params.count(o.name) == 0 && t.txn.args.count(o.name) == 0) {
      unresolved(at, "unbound parameter '" + o.name + "'");
    }
  }

  void check_writes(const Schema& s, const TransactionTemplate& t, const std::string& table,
                    const FieldWrites& ws, const std::string& at) {
    for (const auto& [field, operand] : ws) {
      need_field(s, table, field, at + "/fields/" + field);
      check_operand(t, operand, at + "/fields/" + field);
    }
  }

  void check_ref(const Schema& s, const TransactionTemplate& t, const ItemRef& r, const std::string& at,
                 const char* table = "table", const char* key = "key") {
    need_table(s, r.table, at + "/" + table);
    if (r.key) check_operand(t, *r.key, at + "/" + key);
  }

  void check_txn_refs(const Schema& s, const TransactionTemplate& t, const std::string& at) {
    for (std::size_t k = 0; k < t.txn.operations.size(); ++k) {
      const std::string here = at + "/operations/" + std::to_string(k);
      std::visit(
          [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, op::Read> || std::is_same_v<T, op::Delete>) {
              check_ref(s, t, o.item, here);
            } else if constexpr (std::is_same_v<T, op::Insert>) {
              check_ref(s, t, o.item, here);
              check_writes(s, t, o.item.table, o.fields, here);
            } else if constexpr (std::is_same_v<T, op::Update>) {
              check_ref(s, t, o.item, here);
              check_writes(s, t, o.item.table, o.fields, here);
              if (!o.index_table.empty()) {
                need_table(s, o.index_table, here + "/index_table");
                need_field(s, o.item.table, o.index_field, here + "/index_field");
              }
            } else if constexpr (std::is_same_v<T, op::CascadeDelete>) {
              for (std::size_t n = 0; n < o.targets.size(); ++n) {
                const auto& target = o.targets[n];
                const auto dot = target.find('.');
                const std::string where = here + "/targets/" + std::to_string(n);
                if (dot == std::string::npos) {
                  unresolved(where, "cascade target '" + target + "' is not table.field");
                  continue;
                }
                need_field(s, target.substr(0, dot), target.substr(dot + 1), where);
              }
              check_operand(t, o.value, here + "/value");
            } else if constexpr (std::is_same_v<T, op::Counter>) {
              check_ref(s, t, o.item, here);
              if (!o.field.empty()) {
                need_field(s, o.item.table, o.field, here + "/field");
                need_counter_field(s, o.item.table, o.field, here + "/field");
              }
              check_operand(t, o.amount, here + "/amount");
            } else if constexpr (std::is_same_v<T, op::Collection>) {
              check_ref(s, t, o.item, here);
              check_operand(t, o.element, here + "/element");
            } else if constexpr (std::is_same_v<T, op::AbortIf>) {
              check_operand(t, o.condition, here + "/condition");
            } else if constexpr (std::is_same_v<T, op::AssignSequential>) {
              check_ref(s, t, o.item, here);
              need_field(s, o.item.table, o.field, here + "/field");
              check_writes(s, t, o.item.table, o.fields, here);
              check_ref(s, t, o.counter_item, here, "counter_table", "counter_key");
              need_field(s, o.counter_item.table, o.counter_field, here + "/counter_field");
            }
          },
          t.txn.operations[k]);
    }
  }

  void resolve(const Workload& w) {
    for (std::size_t k = 0; k < w.invariants.size(); ++k) {
      check_spec_refs(w.schema, w.invariants[k], "/invariants/" + std::to_string(k));
    }
    for (std::size_t k = 0; k < w.views.size(); ++k) {
      const std::string at = "/views/" + std::to_string(k);
      const auto& vf = w.views[k];
      need_table(w.schema, vf.source.table, at + "/source/table");
      need_field(w.schema, vf.source.table, vf.source.field, at + "/source/field");
      need_table(w.schema, vf.view_table, at + "/view_table");
      need_field(w.schema, vf.view_table, vf.view_field, at + "/view_field");
    }
    for (std::size_t k = 0; k < w.transactions.size(); ++k) {
      check_txn_refs(w.schema, w.transactions[k], "/transactions/" + std::to_string(k));
    }
    for (std::size_t k = 0; k < w.initial.size(); ++k) {
      const auto& e = w.initial[k];
      const std::string at = "/initial/" + std::to_string(k);
      const std::string base = e.item.substr(0, e.item.find('#'));
      need_table(w.schema, std::string(table_of(base)), at);
      if (e.kind == InitialEntry::Kind::Record) {
        for (const auto& [field, _] : e.fields) {
          need_field(w.schema, std::string(table_of(e.item)), field, at + "/fields/" + field);
        }
      }
    }
  }
};

}  // namespace

SpecError::SpecError(std::vector<Diagnostic> diagnostics)
    : Error(diagnostics.empty() ? ErrorCode::SyntaxError : diagnostics.front().code, join(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

std::string serialize(const Workload& w) {
  Json root = Json::object();
  root["name"] = w.name;

  Json tables = Json::object();
  for (const auto& [name, ts] : w.schema.tables) {
    Json t{{"fields", ts.fields}};
    if (!ts.counter_fields.empty()) t["counters"] = ts.counter_fields;
    tables[name] = std::move(t);
  }
  Json schema{{"tables", tables}};
  if (!w.schema.counters.empty()) schema["counters"] = w.schema.counters;
  if (!w.schema.collections.empty()) schema["collections"] = w.schema.collections;
  root["schema"] = std::move(schema);

  Json invariants = Json::array();
  for (const auto& s : w.invariants) invariants.push_back(spec_json(s));
  root["invariants"] = std::move(invariants);

  if (!w.views.empty()) {
    Json views = Json::array();
    for (const auto& vf : w.views) {
      Json j = Json::object();
      if (!vf.name.empty()) j["name"] = vf.name;
      j["source"] = aggregate_json(vf.source);
      j["view_table"] = vf.view_table;
      j["view_field"] = vf.view_field;
      if (vf.counter) j["counter"] = true;
      views.push_back(std::move(j));
    }
    root["views"] = std::move(views);
  }

  Json txns = Json::array();
  for (const auto& t : w.transactions) {
    Json j{{"name", t.txn.name}};
    if (t.weight != 1.0) j["weight"] = t.weight;
    if (!t.txn.declared_writeset.empty()) j["writeset"] = t.txn.declared_writeset;
    if (!t.params.empty()) {
      Json params = Json::object();
      for (const auto& [name, d] : t.params) params[name] = domain_json(d);
      j["params"] = std::move(params);
    }
    if (!t.txn.args.empty()) {
      Json args = Json::object();
      for (const auto& [name, v] : t.txn.args) args[name] = value_json(v);
      j["args"] = std::move(args);
    }
    Json ops = Json::array();
    for (const auto& o : t.txn.operations) ops.push_back(operation_json(o));
    j["operations"] = std::move(ops);
    txns.push_back(std::move(j));
  }
  root["transactions"] = std::move(txns);

  Json initial = Json::array();
  for (const auto& e : w.initial) {
    switch (e.kind) {
      case InitialEntry::Kind::Record:
        initial.push_back(Json{{"record", e.item}, {"fields", field_map_json(e.fields)}});
        break;
      case InitialEntry::Kind::Counter:
        initial.push_back(Json{{"counter", e.item}, {"value", e.value}});
        break;
      case InitialEntry::Kind::Collection: {
        Json el = Json::array();
        for (const auto& v : e.elements) el.push_back(value_json(v));
        initial.push_back(Json{{"collection", e.item}, {"elements", el}});
        break;
      }
    }
  }
  root["initial"] = std::move(initial);
  return root.dump(2) + "\n";
}

Workload parse_spec(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Convert the byte offset into line:column.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
    throw SpecError({Diagnostic{ErrorCode::SyntaxError, std::to_string(line) + ":" + std::to_string(col), msg}});
  }
  Parser p;
  Workload w = p.workload(root);
  if (!p.diags.empty()) throw SpecError(std::move(p.diags));
  p.resolve(w);
  if (!p.diags.empty()) throw SpecError(std::move(p.diags));

  DatabaseState d0;
  try {
    d0 = initial_state(w);
  } catch (const Error& e) {
    throw SpecError({Diagnostic{ErrorCode::InvalidInitialState, "/initial", e.what()}});
  }
  auto verdict = is_valid(workload_invariant(w), d0);
  if (!verdict.valid) {
    std::string msg = "initial state violates invariants";
    if (verdict.witness) msg += ": " + verdict.witness->invariant + ": " + verdict.witness->detail;
    throw SpecError({Diagnostic{ErrorCode::InvalidInitialState, "/initial", msg}});
  }
  return w;
}

Workload load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read spec '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::vector<std::string> validate_spec(const Workload& w) {
  std::vector<std::string> out;
  std::set<std::string> covered;
  for (const auto& s : w.invariants) {
    for (const auto& t : spec_tables(s)) covered.insert(t);
  }
  for (const auto& vf : w.views) {
    covered.insert(vf.view_table);
    covered.insert(vf.source.table);
  }
  std::vector<bool> exercised(w.invariants.size(), false);
  for (const auto& t : w.transactions) {
    if (operation_classes(t.txn).empty()) {
      out.push_back("transaction '" + t.txn.name + "' has no operation classes");
    }
    for (std::size_t k = 0; k < w.invariants.size(); ++k) {
      if (!classify_transaction(t.txn, {w.invariants[k]}).pairs.empty()) exercised[k] = true;
    }
    const auto written = written_tables(t.txn);
    for (const auto& table : written) {
      if (covered.count(table) == 0) {
        out.push_back("transaction '" + t.txn.name + "' writes '" + table + "', which no invariant covers");
      }
    }
    if (!t.txn.declared_writeset.empty()) {
      for (const auto& table : written) {
        if (std::find(t.txn.declared_writeset.begin(), t.txn.declared_writeset.end(), table) ==
            t.txn.declared_writeset.end()) {
          out.push_back("transaction '" + t.txn.name + "' writes '" + table + "' outside its declared write set");
        }
      }
    }
  }
  for (std::size_t k = 0; k < w.invariants.size(); ++k) {
    if (!exercised[k]) out.push_back("invariant '" + w.invariants[k].label() + "' never exercised");
  }
  return out;
}

}  // namespace iconf
