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

#pragma once

// Terse constructors for operations, transactions and invariant specs.

#include <string>
#include <utility>
#include <vector>

#include "iconf/invariants.hpp"
#include "iconf/transaction.hpp"

namespace iconf::build {

inline Operand lit(Value v) { return Operand::lit(std::move(v)); }
inline Operand lit(const char* s) { return Operand::lit(Value{std::string(s)}); }
inline Operand lit(int v) { return Operand::lit(Value{std::int64_t{v}}); }
inline Operand par(std::string name) { return Operand::param(std::move(name)); }
inline Operand nonce(std::string slot = "id") { return Operand::nonce(std::move(slot)); }

inline ItemRef ref(std::string table) { return ItemRef{std::move(table), std::nullopt}; }
inline ItemRef ref(std::string table, Operand key) { return ItemRef{std::move(table), std::move(key)}; }

inline Operation read(ItemRef item) { return op::Read{std::move(item)}; }
inline Operation insert(ItemRef item, FieldWrites fields = {}) {
  return op::Insert{std::move(item), std::move(fields)};
}
inline Operation update(ItemRef item, FieldWrites fields) {
  return op::Update{std::move(item), std::move(fields), {}, {}};
}
inline Operation update_indexed(ItemRef item, FieldWrites fields, std::string index_table,
                                std::string index_field) {
  return op::Update{std::move(item), std::move(fields), std::move(index_table), std::move(index_field)};
}
inline Operation remove(ItemRef item) { return op::Delete{std::move(item)}; }
inline Operation cascade(std::vector<std::string> targets, Operand value) {
  return op::CascadeDelete{std::move(targets), std::move(value)};
}
inline Operation counter(op::CounterKind kind, ItemRef item, std::string field = {},
                         Operand amount = lit(1)) {
  return op::Counter{std::move(item), std::move(field), kind, std::move(amount)};
}
inline Operation inc(ItemRef item, std::string field = {}, Operand amount = lit(1)) {
  return counter(op::CounterKind::Increment, std::move(item), std::move(field), std::move(amount));
}
inline Operation dec(ItemRef item, std::string field = {}, Operand amount = lit(1)) {
  return counter(op::CounterKind::Decrement, std::move(item), std::move(field), std::move(amount));
}
inline Operation add(ItemRef item, Operand element) {
  return op::Collection{std::move(item), op::CollectionKind::Add, std::move(element)};
}
inline Operation del(ItemRef item, Operand element) {
  return op::Collection{std::move(item), op::CollectionKind::Del, std::move(element)};
}
inline Operation abort_if(Operand condition) { return op::AbortIf{std::move(condition)}; }
inline Operation assign_sequential(ItemRef item, std::string field, ItemRef counter_item,
                                   std::string counter_field, FieldWrites fields = {}) {
  return op::AssignSequential{std::move(item), std::move(field), std::move(fields),
                              std::move(counter_item), std::move(counter_field)};
}

inline Transaction txn(std::string name, std::vector<Operation> ops, Args args = {}) {
  return Transaction{std::move(name), std::move(ops), std::move(args), {}};
}

inline Filter eq(std::string field, Value v) { return Filter{std::move(field), Filter::Op::Eq, std::move(v)}; }
inline Filter ne(std::string field, Value v) { return Filter{std::move(field), Filter::Op::Ne, std::move(v)}; }
inline Filter is_null(std::string field) { return Filter{std::move(field), Filter::Op::IsNull, {}}; }
inline Filter not_null(std::string field) { return Filter{std::move(field), Filter::Op::NotNull, {}}; }

inline Aggregate count(std::string table, std::vector<std::string> group_by = {},
                       std::vector<Filter> filter = {}, std::int64_t coefficient = 1) {
  return Aggregate{std::move(table), Aggregate::Fn::Count, {}, std::move(group_by), std::move(filter),
                   coefficient};
}
inline Aggregate sum(std::string table, std::string field, std::vector<std::string> group_by = {},
                     std::vector<Filter> filter = {}, std::int64_t coefficient = 1) {
  return Aggregate{std::move(table), Aggregate::Fn::Sum, std::move(field), std::move(group_by),
                   std::move(filter), coefficient};
}

inline InvariantSpec equality(std::string table, std::string field, Value c) {
  InvariantSpec s;
  s.cls = InvariantClass::AttributeEquality;
  s.table = std::move(table);
  s.field = std::move(field);
  s.constant = std::move(c);
  return s;
}
inline InvariantSpec inequality(std::string table, std::string field, Value c) {
  auto s = equality(std::move(table), std::move(field), std::move(c));
  s.cls = InvariantClass::AttributeInequality;
  return s;
}
inline InvariantSpec unique(std::string table, std::string field, std::vector<std::string> group_by = {}) {
  InvariantSpec s;
  s.cls = InvariantClass::Uniqueness;
  s.table = std::move(table);
  s.field = std::move(field);
  s.group_by = std::move(group_by);
  return s;
}
inline InvariantSpec sequential(std::string table, std::string field,
                                std::vector<std::string> group_by = {}) {
  InvariantSpec s = unique(std::move(table), std::move(field), std::move(group_by));
  s.cls = InvariantClass::Sequentiality;
  return s;
}
inline InvariantSpec foreign_key(std::string table, std::string field, std::string to_table,
                                 std::string to_field, bool cascade = false) {
  InvariantSpec s;
  s.cls = InvariantClass::ForeignKey;
  s.table = std::move(table);
  s.field = std::move(field);
  s.to_table = std::move(to_table);
  s.to_field = std::move(to_field);
  s.cascade = cascade;
  return s;
}
inline InvariantSpec secondary_index(std::string table, std::string field, std::string index_table) {
  InvariantSpec s;
  s.cls = InvariantClass::SecondaryIndex;
  s.table = std::move(table);
  s.field = std::move(field);
  s.index_table = std::move(index_table);
  return s;
}
inline InvariantSpec view(std::vector<Aggregate> lhs, std::vector<Aggregate> rhs, std::string name = {}) {
  InvariantSpec s;
  s.cls = InvariantClass::MaterializedView;
  s.name = std::move(name);
  s.lhs = std::move(lhs);
  s.rhs = std::move(rhs);
  return s;
}
inline InvariantSpec counter_gt(std::string item, std::int64_t k) {
  InvariantSpec s;
  s.cls = InvariantClass::CounterGreaterThan;
  s.item = std::move(item);
  s.bound = k;
  return s;
}
inline InvariantSpec counter_lt(std::string item, std::int64_t k) {
  auto s = counter_gt(std::move(item), k);
  s.cls = InvariantClass::CounterLessThan;
  return s;
}
inline InvariantSpec contains(std::string item, Value v) {
  InvariantSpec s;
  s.cls = InvariantClass::Contains;
  s.item = std::move(item);
  s.constant = std::move(v);
  return s;
}
inline InvariantSpec not_contains(std::string item, Value v) {
  auto s = contains(std::move(item), std::move(v));
  s.cls = InvariantClass::NotContains;
  return s;
}
inline InvariantSpec size_equals(std::string item, std::int64_t k) {
  InvariantSpec s;
  s.cls = InvariantClass::SizeEquals;
  s.item = std::move(item);
  s.bound = k;
  return s;
}

}  // namespace iconf::build
