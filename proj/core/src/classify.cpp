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

#include "iconf/classify.hpp"

#include <algorithm>
#include <array>

namespace iconf {

namespace {

using IC = InvariantClass;
using OC = OperationClass;

constexpr std::array<std::pair<OC, std::string_view>, 13> kOpNames{{
    {OC::Read, "read"},
    {OC::WriteAnyValue, "write-any-value"},
    {OC::WriteChosenUnique, "write-chosen-unique"},
    {OC::Insert, "insert"},
    {OC::Delete, "delete"},
    {OC::CascadeDelete, "cascade-delete"},
    {OC::UpdateIndexed, "update-indexed"},
    {OC::ViewUpdate, "view-update"},
    {OC::CounterIncrement, "counter-increment"},
    {OC::CounterDecrement, "counter-decrement"},
    {OC::CounterAssign, "counter-assign"},
    {OC::CollectionAdd, "collection-add"},
    {OC::CollectionDel, "collection-del"},
}};

Classification yes(int proof) { return {Verdict::IConfluent, proof}; }
Classification no(int proof) { return {Verdict::NotIConfluent, proof}; }

bool is_nonce(const Operand& o) { return o.kind == Operand::Kind::Nonce; }

const Operand* written(const FieldWrites& ws, const std::string& field) {
  for (const auto& [name, operand] : ws) {
    if (name == field) return &operand;
  }
  return nullptr;
}

bool writes_any(const FieldWrites& ws, const std::vector<Filter>& filters,
                const std::vector<std::string>& extra = {}) {
  for (const auto& [name, _] : ws) {
    for (const auto& f : filters) {
      if (f.field == name) return true;
    }
    if (std::find(extra.begin(), extra.end(), name) != extra.end()) return true;
  }
  return false;
}

std::string target_table(const std::string& target) { return target.substr(0, target.find('.')); }

std::string target_field(const std::string& target) {
  auto dot = target.find('.');
  return dot == std::string::npos ? std::string{} : target.substr(dot + 1);
}

// Class of a write of `field` through `operand` under value-choosing specs.
OC value_class(const Operand* operand) {
  return operand != nullptr && is_nonce(*operand) ? OC::WriteChosenUnique : OC::WriteAnyValue;
}

OC counter_class(op::CounterKind k) {
  switch (k) {
    case op::CounterKind::Increment: return OC::CounterIncrement;
    case op::CounterKind::Decrement: return OC::CounterDecrement;
    case op::CounterKind::Assign: return OC::CounterAssign;
  }
  return OC::CounterAssign;
}

std::set<std::string> op_tables(const Operation& op) {
  Transaction single;
  single.operations = {op};
  auto out = written_tables(single);
  for (auto& t : read_tables(single)) out.insert(t);
  return out;
}

// Non-insert modification of table by some operation of t.
bool modifies(const Transaction& t, const std::string& table) {
  for (const auto& op : t.operations) {
    if (const auto* u = std::get_if<op::Update>(&op); u && u->item.table == table) return true;
    if (const auto* d = std::get_if<op::Delete>(&op); d && d->item.table == table) return true;
    if (const auto* c = std::get_if<op::CascadeDelete>(&op)) {
      for (const auto& target : c->targets) {
        if (target_table(target) == table) return true;
      }
    }
  }
  return false;
}

std::optional<OC> rel_uniqueness(const Operation& op, const InvariantSpec& s) {
  const bool key = s.field == kKeyField;
  if (const auto* o = std::get_if<op::Insert>(&op); o && o->item.table == s.table) {
    const Operand* w = key ? (o->item.key ? &*o->item.key : nullptr) : written(o->fields, s.field);
    if (w == nullptr) return std::nullopt;
    return value_class(w);
  }
  if (const auto* o = std::get_if<op::Update>(&op)) {
    if (o->item.table == s.table) {
      if (const Operand* w = written(o->fields, s.field)) return value_class(w);
      if (writes_any(o->fields, s.filter, s.group_by)) return OC::WriteAnyValue;
    }
    if (o->index_table == s.table && s.field == "value") return OC::WriteAnyValue;
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::AssignSequential>(&op)) {
    if (o->item.table == s.table) {
      if (o->field == s.field) return OC::WriteAnyValue;
      if (key) return value_class(o->item.key ? &*o->item.key : nullptr);
      if (const Operand* w = written(o->fields, s.field)) return value_class(w);
    }
    if (o->counter_item.table == s.table && o->counter_field == s.field) return OC::WriteAnyValue;
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::Counter>(&op); o && o->item.table == s.table && o->field == s.field) {
    return OC::WriteAnyValue;
  }
  return std::nullopt;
}

std::optional<OC> rel_sequentiality(const Operation& op, const InvariantSpec& s) {
  auto in = [&](const std::string& t) {
    return t == s.table || (!s.resolve_table.empty() && t == s.resolve_table) ||
           (!s.next_table.empty() && t == s.next_table);
  };
  if (const auto* o = std::get_if<op::Insert>(&op); o && in(o->item.table)) {
    if (o->item.table == s.table) {
      const Operand* w = s.field == kKeyField ? (o->item.key ? &*o->item.key : nullptr)
                                              : written(o->fields, s.field);
      if (w != nullptr && is_nonce(*w)) return OC::WriteChosenUnique;
    }
    return OC::Insert;
  }
  if (const auto* o = std::get_if<op::AssignSequential>(&op)) {
    if (in(o->item.table) || in(o->counter_item.table)) return OC::Insert;
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::Update>(&op); o && in(o->item.table)) {
    const auto& t = o->item.table;
    const bool hit = (t == s.table && (written(o->fields, s.field) ||
                                       writes_any(o->fields, s.filter, s.group_by))) ||
                     (t == s.resolve_table && written(o->fields, s.resolve_field)) ||
                     (t == s.next_table && written(o->fields, s.next_field));
    if (hit) return OC::WriteAnyValue;
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::Delete>(&op); o && in(o->item.table)) return OC::Delete;
  if (const auto* o = std::get_if<op::CascadeDelete>(&op)) {
    for (const auto& target : o->targets) {
      if (in(target_table(target))) return OC::CascadeDelete;
    }
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::Counter>(&op); o && in(o->item.table)) {
    const auto& t = o->item.table;
    const bool hit = (t == s.table && (o->field == s.field ||
                                       std::any_of(s.filter.begin(), s.filter.end(),
                                                   [&](const Filter& f) { return f.field == o->field; }))) ||
                     (t == s.resolve_table && o->field == s.resolve_field) ||
                     (t == s.next_table && o->field == s.next_field);
    if (hit) return counter_class(o->kind);
  }
  return std::nullopt;
}

std::optional<OC> rel_foreign_key(const Operation& op, const Transaction& t, const InvariantSpec& s) {
  const bool from_to_both = modifies(t, s.table) && modifies(t, s.to_table);
  auto mutation = [&]() -> OC {
    return s.cascade && from_to_both ? OC::CascadeDelete : OC::WriteAnyValue;
  };
  if (const auto* o = std::get_if<op::Insert>(&op)) {
    if (o->item.table == s.table || o->item.table == s.to_table) return OC::Insert;
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::AssignSequential>(&op)) {
    if (o->item.table == s.table || o->item.table == s.to_table) return OC::Insert;
    if ((o->counter_item.table == s.table && o->counter_field == s.field) ||
        (o->counter_item.table == s.to_table && o->counter_field == s.to_field)) {
      return mutation();
    }
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::Delete>(&op)) {
    if (o->item.table == s.to_table) return OC::Delete;
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::CascadeDelete>(&op)) {
    bool referenced = false;
    bool guarded = false;
    for (const auto& target : o->targets) {
      if (target_table(target) != s.to_table) continue;
      referenced = true;
      if (target_field(target) == s.to_field) guarded = true;
    }
    if (!referenced) return std::nullopt;
    return s.cascade && guarded ? OC::CascadeDelete : OC::Delete;
  }
  if (const auto* o = std::get_if<op::Update>(&op)) {
    const bool from = o->item.table == s.table &&
                      (written(o->fields, s.field) || writes_any(o->fields, s.filter));
    const bool to = o->item.table == s.to_table &&
                    (written(o->fields, s.to_field) || writes_any(o->fields, s.to_filter));
    if (from || to) return mutation();
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::Counter>(&op)) {
    if ((o->item.table == s.table && o->field == s.field) ||
        (o->item.table == s.to_table && o->field == s.to_field)) {
      return mutation();
    }
  }
  return std::nullopt;
}

std::optional<OC> rel_index(const Operation& op, const InvariantSpec& s) {
  if (const auto* o = std::get_if<op::Update>(&op)) {
    if (o->item.table == s.table) {
      if (o->index_table == s.index_table) return OC::UpdateIndexed;
      if (written(o->fields, s.field) || writes_any(o->fields, s.filter)) return OC::WriteAnyValue;
      return std::nullopt;
    }
    if (o->item.table == s.index_table || o->index_table == s.index_table) return OC::WriteAnyValue;
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::Insert>(&op)) {
    if (o->item.table == s.index_table) return OC::Insert;
    if (o->item.table == s.table && written(o->fields, s.field)) return OC::Insert;
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::Delete>(&op); o && o->item.table == s.index_table) {
    return OC::Delete;
  }
  if (const auto* o = std::get_if<op::CascadeDelete>(&op)) {
    for (const auto& target : o->targets) {
      if (target_table(target) == s.index_table) return OC::CascadeDelete;
    }
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::AssignSequential>(&op)) {
    if (o->item.table == s.table || o->item.table == s.index_table) return OC::Insert;
    return std::nullopt;
  }
  if (const auto* o = std::get_if<op::Counter>(&op); o && o->item.table == s.table && o->field == s.field) {
    return OC::WriteAnyValue;
  }
  return std::nullopt;
}

std::optional<OC> rel_view(const Operation& op, const InvariantSpec& s) {
  if (std::holds_alternative<op::Read>(op) || std::holds_alternative<op::AbortIf>(op)) {
    return std::nullopt;
  }
  std::set<std::string> tables;
  for (const auto* side : {&s.lhs, &s.rhs}) {
    for (const auto& a : *side) tables.insert(a.table);
  }
  Transaction single;
  single.operations = {op};
  for (const auto& t : written_tables(single)) {
    if (tables.count(t) > 0) return OC::ViewUpdate;
  }
  return std::nullopt;
}

std::optional<OC> rel_counter(const Operation& op, const InvariantSpec& s) {
  if (const auto* o = std::get_if<op::Counter>(&op)) {
    if (!s.item.empty()) {
      const std::string base = s.item.substr(0, s.item.find('#'));
      const auto hash = s.item.find('#');
      const std::string field = hash == std::string::npos ? std::string{} : s.item.substr(hash + 1);
      if (std::string(table_of(base)) == o->item.table && field == o->field) {
        return counter_class(o->kind);
      }
      return std::nullopt;
    }
    if (o->item.table == s.table && o->field == s.field) return counter_class(o->kind);
    return std::nullopt;
  }
  if (s.item.empty()) {
    if (const auto* o = std::get_if<op::Insert>(&op); o && o->item.table == s.table && written(o->fields, s.field)) {
      return OC::WriteAnyValue;
    }
    if (const auto* o = std::get_if<op::Update>(&op); o && o->item.table == s.table && written(o->fields, s.field)) {
      return OC::WriteAnyValue;
    }
  }
  return std::nullopt;
}

std::optional<OC> rel_collection(const Operation& op, const InvariantSpec& s) {
  if (const auto* o = std::get_if<op::Collection>(&op); o && o->item.table == s.item) {
    return o->kind == op::CollectionKind::Add ? OC::CollectionAdd : OC::CollectionDel;
  }
  return std::nullopt;
}

std::optional<OC> rel_attribute(const Operation& op, const InvariantSpec& s) {
  if (std::holds_alternative<op::Delete>(op) || std::holds_alternative<op::CascadeDelete>(op) ||
      std::holds_alternative<op::Read>(op)) {
    return std::nullopt;
  }
  Transaction single;
  single.operations = {op};
  if (written_tables(single).count(s.table) == 0) return std::nullopt;
  return operation_class(op);
}

}  // namespace

std::string_view to_string(OperationClass c) {
  for (const auto& [k, name] : kOpNames) {
    if (k == c) return name;
  }
  return "?";
}

std::optional<OperationClass> operation_class_from_string(std::string_view s) {
  for (const auto& [k, name] : kOpNames) {
    if (name == s) return k;
  }
  return std::nullopt;
}

const std::vector<OperationClass>& all_operation_classes() {
  static const std::vector<OperationClass> all = [] {
    std::vector<OperationClass> out;
    for (const auto& [k, _] : kOpNames) out.push_back(k);
    return out;
  }();
  return all;
}

const std::vector<InvariantClass>& all_invariant_classes() {
  static const std::vector<InvariantClass> all = {
      IC::AttributeEquality, IC::AttributeInequality, IC::Uniqueness,        IC::Sequentiality,
      IC::ForeignKey,        IC::SecondaryIndex,      IC::MaterializedView,  IC::CounterGreaterThan,
      IC::CounterLessThan,   IC::Contains,            IC::NotContains,       IC::SizeEquals,
      IC::Recency};
  return all;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::IConfluent: return "yes";
    case Verdict::NotIConfluent: return "no";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

Classification classify_static(InvariantClass inv, OperationClass op) {
  switch (inv) {
    case IC::AttributeEquality: return yes(1);
    case IC::AttributeInequality: return yes(2);
    case IC::Uniqueness:
      if (op == OC::WriteAnyValue) return no(3);
      if (op == OC::WriteChosenUnique) return yes(4);
      break;
    case IC::Sequentiality:
      if (op == OC::Insert) return no(5);
      break;
    case IC::ForeignKey:
      if (op == OC::Insert) return yes(6);
      if (op == OC::Delete) return no(7);
      if (op == OC::CascadeDelete) return yes(8);
      break;
    case IC::SecondaryIndex:
      if (op == OC::UpdateIndexed) return yes(9);
      break;
    case IC::MaterializedView:
      if (op == OC::ViewUpdate) return yes(10);
      break;
    case IC::CounterGreaterThan:
      if (op == OC::CounterIncrement) return yes(11);
      if (op == OC::CounterDecrement) return no(13);
      break;
    case IC::CounterLessThan:
      if (op == OC::CounterIncrement) return no(12);
      if (op == OC::CounterDecrement) return yes(14);
      break;
    case IC::Contains: return yes(15);
    case IC::NotContains: return yes(16);
    case IC::SizeEquals:
      if (op == OC::CollectionAdd || op == OC::CollectionDel) return no(17);
      break;
    case IC::Recency: return {Verdict::NotIConfluent, std::nullopt};
  }
  return {};
}

const std::vector<RuleRow>& rule_table() {
  static const std::vector<RuleRow> rows = {
      {"Attribute Equality", "Any", IC::AttributeEquality, OC::WriteAnyValue, Verdict::IConfluent, {1}},
      {"Attribute Inequality", "Any", IC::AttributeInequality, OC::WriteAnyValue, Verdict::IConfluent, {2}},
      {"Uniqueness", "Choose specific value", IC::Uniqueness, OC::WriteAnyValue, Verdict::NotIConfluent, {3}},
      {"Uniqueness", "Choose some value", IC::Uniqueness, OC::WriteChosenUnique, Verdict::IConfluent, {4}},
      {"AUTO_INCREMENT", "Insert", IC::Sequentiality, OC::Insert, Verdict::NotIConfluent, {5}},
      {"Foreign Key", "Insert", IC::ForeignKey, OC::Insert, Verdict::IConfluent, {6}},
      {"Foreign Key", "Delete", IC::ForeignKey, OC::Delete, Verdict::NotIConfluent, {7}},
      {"Foreign Key", "Cascading Delete", IC::ForeignKey, OC::CascadeDelete, Verdict::IConfluent, {8}},
      {"Secondary Indexing", "Update", IC::SecondaryIndex, OC::UpdateIndexed, Verdict::IConfluent, {9}},
      {"Materialized Views", "Update", IC::MaterializedView, OC::ViewUpdate, Verdict::IConfluent, {10}},
      {">", "Increment [Counter]", IC::CounterGreaterThan, OC::CounterIncrement, Verdict::IConfluent, {11}},
      {"<", "Increment [Counter]", IC::CounterLessThan, OC::CounterIncrement, Verdict::NotIConfluent, {12}},
      {">", "Decrement [Counter]", IC::CounterGreaterThan, OC::CounterDecrement, Verdict::NotIConfluent, {13}},
      {"<", "Decrement [Counter]", IC::CounterLessThan, OC::CounterDecrement, Verdict::IConfluent, {14}},
      {"[NOT] CONTAINS", "Any [Set, List, Map]", IC::Contains, OC::CollectionAdd, Verdict::IConfluent, {15, 16}},
      {"SIZE=", "Mutation [Set, List, Map]", IC::SizeEquals, OC::CollectionAdd, Verdict::NotIConfluent, {17}},
  };
  return rows;
}

std::optional<OperationClass> operation_class(const Operation& op) {
  return std::visit(
      [](const auto& o) -> std::optional<OC> {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, op::Read>) return OC::Read;
        if constexpr (std::is_same_v<T, op::Insert>) return OC::Insert;
        if constexpr (std::is_same_v<T, op::Update>) {
          return o.index_table.empty() ? OC::WriteAnyValue : OC::UpdateIndexed;
        }
        if constexpr (std::is_same_v<T, op::Delete>) return OC::Delete;
        if constexpr (std::is_same_v<T, op::CascadeDelete>) return OC::CascadeDelete;
        if constexpr (std::is_same_v<T, op::Counter>) return counter_class(o.kind);
        if constexpr (std::is_same_v<T, op::Collection>) {
          return o.kind == op::CollectionKind::Add ? OC::CollectionAdd : OC::CollectionDel;
        }
        if constexpr (std::is_same_v<T, op::AssignSequential>) return OC::Insert;
        return std::nullopt;
      },
      op);
}

namespace {

bool any_nonce(const Operation& op) {
  auto key = [](const ItemRef& r) { return r.key && is_nonce(*r.key); };
  auto fields = [](const FieldWrites& ws) {
    return std::any_of(ws.begin(), ws.end(), [](const auto& w) { return is_nonce(w.second); });
  };
  return std::visit(
      [&](const auto& o) -> bool {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, op::Insert> || std::is_same_v<T, op::Update>) {
          return key(o.item) || fields(o.fields);
        } else if constexpr (std::is_same_v<T, op::AssignSequential>) {
          return key(o.item) || fields(o.fields);
        } else if constexpr (std::is_same_v<T, op::Collection>) {
          return is_nonce(o.element) || key(o.item);
        } else if constexpr (std::is_same_v<T, op::Counter>) {
          return key(o.item);
        } else {
          return false;
        }
      },
      op);
}

}  // namespace

std::set<OperationClass> operation_classes(const Transaction& t) {
  std::set<OperationClass> out;
  for (const auto& op : t.operations) {
    if (auto c = operation_class(op)) out.insert(*c);
    if (any_nonce(op)) out.insert(OC::WriteChosenUnique);
  }
  return out;
}

std::optional<OperationClass> relative_class(const Operation& op, const Transaction& t,
                                             const InvariantSpec& spec) {
  if (std::holds_alternative<op::AbortIf>(op)) return std::nullopt;
  switch (spec.cls) {
    case IC::AttributeEquality:
    case IC::AttributeInequality: return rel_attribute(op, spec);
    case IC::Uniqueness: return rel_uniqueness(op, spec);
    case IC::Sequentiality: return rel_sequentiality(op, spec);
    case IC::ForeignKey: return rel_foreign_key(op, t, spec);
    case IC::SecondaryIndex: return rel_index(op, spec);
    case IC::MaterializedView: return rel_view(op, spec);
    case IC::CounterGreaterThan:
    case IC::CounterLessThan: return rel_counter(op, spec);
    case IC::Contains:
    case IC::NotContains:
    case IC::SizeEquals: return rel_collection(op, spec);
    case IC::Recency: {
      const auto tables = spec_tables(spec);
      for (const auto& table : op_tables(op)) {
        if (tables.count(table) > 0) return operation_class(op);
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

TransactionReport classify_transaction(const Transaction& t, const std::vector<InvariantSpec>& specs) {
  TransactionReport report;
  report.transaction = t.name;
  for (const auto& spec : specs) {
    for (std::size_t k = 0; k < t.operations.size(); ++k) {
      auto cls = relative_class(t.operations[k], t, spec);
      if (!cls) continue;
      PairClassification pair{spec.label(), k, describe(t.operations[k]), *cls,
                              classify_static(spec.cls, *cls)};
      if (pair.classification.verdict != Verdict::IConfluent) report.offending.push_back(pair);
      report.pairs.push_back(std::move(pair));
    }
  }
  return report;
}

std::string describe(const Operation& op) {
  auto ref = [](const ItemRef& r) {
    if (!r.key) return r.table;
    switch (r.key->kind) {
      case Operand::Kind::Literal: return r.table + "/" + to_string(r.key->literal);
      case Operand::Kind::Param: return r.table + "/$" + r.key->name;
      case Operand::Kind::Nonce: return r.table + "/nonce(" + r.key->name + ")";
    }
    return r.table;
  };
  return std::visit(
      [&](const auto& o) -> std::string {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, op::Read>) return "read " + ref(o.item);
        if constexpr (std::is_same_v<T, op::Insert>) return "insert " + ref(o.item);
        if constexpr (std::is_same_v<T, op::Update>) {
          return "update " + ref(o.item) + (o.index_table.empty() ? "" : " +index " + o.index_table);
        }
        if constexpr (std::is_same_v<T, op::Delete>) return "delete " + ref(o.item);
        if constexpr (std::is_same_v<T, op::CascadeDelete>) {
          std::string s = "cascade-delete";
          for (const auto& target : o.targets) s += " " + target;
          return s;
        }
        if constexpr (std::is_same_v<T, op::Counter>) {
          const char* k = o.kind == op::CounterKind::Increment   ? "inc "
                          : o.kind == op::CounterKind::Decrement ? "dec "
                                                                 : "assign ";
          return k + ref(o.item) + (o.field.empty() ? "" : "." + o.field);
        }
        if constexpr (std::is_same_v<T, op::Collection>) {
          return (o.kind == op::CollectionKind::Add ? "add " : "del ") + ref(o.item);
        }
        if constexpr (std::is_same_v<T, op::AbortIf>) return "abort-if";
        if constexpr (std::is_same_v<T, op::AssignSequential>) {
          return "assign-sequential " + ref(o.item) + "." + o.field;
        }
        return "?";
      },
      op);
}

}  // namespace iconf
