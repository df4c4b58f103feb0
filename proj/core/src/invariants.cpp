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

#include "iconf/invariants.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace iconf {

namespace {

constexpr std::array<std::pair<InvariantClass, std::string_view>, 13> kClassNames{{
    {InvariantClass::AttributeEquality, "attribute-equality"},
    {InvariantClass::AttributeInequality, "attribute-inequality"},
    {InvariantClass::Uniqueness, "uniqueness"},
    {InvariantClass::Sequentiality, "sequentiality"},
    {InvariantClass::ForeignKey, "foreign-key"},
    {InvariantClass::SecondaryIndex, "secondary-index"},
    {InvariantClass::MaterializedView, "materialized-view"},
    {InvariantClass::CounterGreaterThan, "counter-greater-than"},
    {InvariantClass::CounterLessThan, "counter-less-than"},
    {InvariantClass::Contains, "contains"},
    {InvariantClass::NotContains, "not-contains"},
    {InvariantClass::SizeEquals, "size-equals"},
    {InvariantClass::Recency, "recency"},
}};

ValidityVerdict fail(const InvariantSpec& spec, std::vector<std::string> items, std::string detail) {
  return ValidityVerdict::violation(Witness{spec.label(), std::move(items), std::move(detail)});
}

std::string quote(const Value& v) {
  if (std::holds_alternative<std::string>(v)) return "'" + std::get<std::string>(v) + "'";
  return to_string(v);
}

ValidityVerdict eval_equality(const InvariantSpec& spec, const LogicalView& view, bool equal) {
  for (const auto* r : view.table(spec.table)) {
    if (!matches_all(spec.filter, *r)) continue;
    const Value v = field_of(*r, spec.field);
    if (is_null(v)) continue;
    if ((v == spec.constant) != equal) {
      return fail(spec, {r->item},
                  r->item + "." + spec.field + " = " + quote(v) + (equal ? " != " : " == ") +
                      quote(spec.constant));
    }
  }
  return ValidityVerdict::ok();
}

ValidityVerdict eval_uniqueness(const InvariantSpec& spec, const LogicalView& view) {
  std::map<std::pair<std::string, Value>, const RecordView*> seen;
  for (const auto* r : view.table(spec.table)) {
    if (!matches_all(spec.filter, *r)) continue;
    Value v = field_of(*r, spec.field);
    if (is_null(v)) continue;
    auto [it, fresh] = seen.emplace(std::make_pair(group_key(*r, spec.group_by), v), r);
    if (!fresh) {
      return fail(spec, {it->second->item, r->item},
                  "value " + quote(v) + " duplicated by " + it->second->item + " and " + r->item);
    }
  }
  return ValidityVerdict::ok();
}

ValidityVerdict eval_sequentiality(const InvariantSpec& spec, const LogicalView& view) {
  std::map<std::string, std::vector<std::pair<std::int64_t, const RecordView*>>> groups;
  for (const auto* r : view.table(spec.table)) {
    if (!matches_all(spec.filter, *r)) continue;
    Value v = field_of(*r, spec.field);
    if (is_null(v)) continue;
    if (!spec.resolve_table.empty()) {
      const auto* m = view.record(record_item(spec.resolve_table, to_string(v)));
      if (m == nullptr || is_null(m->get(spec.resolve_field))) {
        return fail(spec, {r->item}, r->item + " has no resolved " + spec.field);
      }
      v = m->get(spec.resolve_field);
    }
    auto n = as_int(v);
    if (!n) return fail(spec, {r->item}, r->item + "." + spec.field + " is not an integer");
    groups[group_key(*r, spec.group_by)].emplace_back(*n, r);
  }
  for (auto& [group, ids] : groups) {
    std::sort(ids.begin(), ids.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 1; k < ids.size(); ++k) {
      const auto& prev = ids[k - 1];
      const auto& cur = ids[k];
      if (cur.first == prev.first) {
        return fail(spec, {prev.second->item, cur.second->item},
                    "group " + group + ": id " + std::to_string(cur.first) + " assigned twice");
      }
      if (cur.first != prev.first + 1) {
        return fail(spec, {prev.second->item, cur.second->item},
                    "group " + group + ": gap between " + std::to_string(prev.first) + " and " +
                        std::to_string(cur.first));
      }
    }
    if (!spec.next_table.empty()) {
      const ItemId next_item = record_item(spec.next_table, group);
      const auto* next = view.record(next_item);
      const auto n = next == nullptr ? std::nullopt : as_int(next->get(spec.next_field));
      const std::int64_t max = ids.back().first;
      if (!n || *n != max + 1) {
        return fail(spec, {next_item, ids.back().second->item},
                    "group " + group + ": next id " + (n ? std::to_string(*n) : "null") +
                        " but max assigned " + std::to_string(max));
      }
    }
  }
  return ValidityVerdict::ok();
}

ValidityVerdict eval_foreign_key(const InvariantSpec& spec, const LogicalView& view) {
  std::set<Value> targets;
  for (const auto* t : view.table(spec.to_table)) {
    if (!matches_all(spec.to_filter, *t)) continue;
    Value v = field_of(*t, spec.to_field);
    if (!is_null(v)) targets.insert(std::move(v));
  }
  const std::string marker = spec.to_table + "." + spec.to_field;
  for (const auto* r : view.table(spec.table)) {
    if (!matches_all(spec.filter, *r)) continue;
    const Value v = field_of(*r, spec.field);
    if (is_null(v) || targets.count(v) > 0) continue;
    if (spec.cascade && view.cascaded(marker, v)) continue;
    return fail(spec, {r->item},
                r->item + "." + spec.field + " = " + quote(v) + " is dangling (no " + marker + ")");
  }
  return ValidityVerdict::ok();
}

ValidityVerdict eval_index(const InvariantSpec& spec, const LogicalView& view) {
  for (const auto* r : view.table(spec.table)) {
    if (!matches_all(spec.filter, *r)) continue;
    const Value v = field_of(*r, spec.field);
    if (is_null(v)) continue;
    const ItemId entry = record_item(spec.index_table, r->key);
    const auto* e = view.record(entry);
    if (e == nullptr) return fail(spec, {r->item}, r->item + " has no index entry " + entry);
    if (e->get("value") != v) {
      return fail(spec, {r->item, entry},
                  entry + " = " + quote(e->get("value")) + " but " + r->item + "." + spec.field +
                      " = " + quote(v));
    }
  }
  return ValidityVerdict::ok();
}

ValidityVerdict eval_view(const InvariantSpec& spec, const LogicalView& view) {
  auto lhs = aggregate(spec.lhs, view);
  auto rhs = aggregate(spec.rhs, view);
  std::set<std::string> groups;
  for (const auto& [g, _] : lhs) groups.insert(g);
  for (const auto& [g, _] : rhs) groups.insert(g);
  for (const auto& g : groups) {
    const std::int64_t a = lhs.count(g) ? lhs[g] : 0;
    const std::int64_t b = rhs.count(g) ? rhs[g] : 0;
    if (a != b) {
      return fail(spec, {g},
                  "group " + g + ": view " + std::to_string(a) + " != base " + std::to_string(b));
    }
  }
  return ValidityVerdict::ok();
}

ValidityVerdict eval_counter(const InvariantSpec& spec, const LogicalView& view, bool greater) {
  auto check = [&](const std::string& what, std::int64_t v) -> std::optional<ValidityVerdict> {
    const bool ok = greater ? v > spec.bound : v < spec.bound;
    if (ok) return std::nullopt;
    return fail(spec, {what},
                what + " = " + std::to_string(v) + (greater ? " <= " : " >= ") +
                    std::to_string(spec.bound));
  };
  if (!spec.item.empty()) {
    if (auto bad = check(spec.item, view.counter(spec.item))) return *bad;
    return ValidityVerdict::ok();
  }
  for (const auto* r : view.table(spec.table)) {
    if (!matches_all(spec.filter, *r)) continue;
    auto v = as_int(field_of(*r, spec.field));
    if (!v) continue;
    if (auto bad = check(r->item + "." + spec.field, *v)) return *bad;
  }
  return ValidityVerdict::ok();
}

ValidityVerdict eval_collection(const InvariantSpec& spec, const LogicalView& view) {
  const auto* c = view.collection(spec.item);
  switch (spec.cls) {
    case InvariantClass::Contains:
      if (c == nullptr || !c->contains(spec.constant)) {
        return fail(spec, {spec.item}, spec.item + " does not contain " + quote(spec.constant));
      }
      break;
    case InvariantClass::NotContains:
      if (c != nullptr && c->contains(spec.constant)) {
        return fail(spec, {spec.item}, spec.item + " contains " + quote(spec.constant));
      }
      break;
    default: {
      const std::int64_t size = c == nullptr ? 0 : c->size();
      if (size != spec.bound) {
        return fail(spec, {spec.item},
                    "size(" + spec.item + ") = " + std::to_string(size) +
                        " != " + std::to_string(spec.bound));
      }
    }
  }
  return ValidityVerdict::ok();
}

}  // namespace

std::string_view to_string(InvariantClass c) {
  for (const auto& [k, name] : kClassNames) {
    if (k == c) return name;
  }
  return "?";
}

std::optional<InvariantClass> invariant_class_from_string(std::string_view s) {
  for (const auto& [k, name] : kClassNames) {
    if (name == s) return k;
  }
  return std::nullopt;
}

Value field_of(const RecordView& r, const std::string& field) {
  if (field == kKeyField) return key_value(r.key);
  return r.get(field);
}

bool Filter::matches(const RecordView& r) const {
  const Value v = field_of(r, field);
  switch (op) {
    case Op::Eq: return v == value;
    case Op::Ne: return v != value;
    case Op::IsNull: return is_null(v);
    case Op::NotNull: return !is_null(v);
  }
  return false;
}

bool matches_all(const std::vector<Filter>& filters, const RecordView& r) {
  return std::all_of(filters.begin(), filters.end(),
                     [&](const Filter& f) { return f.matches(r); });
}

std::string group_key(const RecordView& r, const std::vector<std::string>& group_by) {
  if (group_by.empty()) return "*";
  std::string out;
  for (std::size_t k = 0; k < group_by.size(); ++k) {
    if (k > 0) out.push_back('.');
    out += to_string(field_of(r, group_by[k]));
  }
  return out;
}

std::map<std::string, std::int64_t> aggregate(const std::vector<Aggregate>& terms,
                                              const LogicalView& view) {
  std::map<std::string, std::int64_t> out;
  for (const auto& a : terms) {
    for (const auto* r : view.table(a.table)) {
      if (!matches_all(a.filter, *r)) continue;
      std::int64_t contribution = 1;
      if (a.fn == Aggregate::Fn::Sum) contribution = as_int(field_of(*r, a.field)).value_or(0);
      out[group_key(*r, a.group_by)] += a.coefficient * contribution;
    }
  }
  return out;
}

std::string InvariantSpec::label() const {
  if (!name.empty()) return name;
  std::string out(to_string(cls));
  out += "(";
  if (!item.empty()) {
    out += item;
  } else if (!table.empty()) {
    out += table;
    if (!field.empty()) out += "." + field;
  } else if (!lhs.empty()) {
    out += lhs.front().table;
  }
  if (!to_table.empty()) out += " -> " + to_table + "." + to_field;
  return out + ")";
}

std::set<std::string> spec_tables(const InvariantSpec& s) {
  std::set<std::string> out;
  auto add = [&](const std::string& t) {
    if (!t.empty()) out.insert(t);
  };
  add(s.table);
  add(s.item.substr(0, s.item.find_first_of("/#")));
  add(s.resolve_table);
  add(s.next_table);
  add(s.to_table);
  add(s.index_table);
  for (const auto& a : s.lhs) add(a.table);
  for (const auto& a : s.rhs) add(a.table);
  return out;
}

ValidityVerdict evaluate(const InvariantSpec& spec, const LogicalView& view) {
  switch (spec.cls) {
    case InvariantClass::AttributeEquality: return eval_equality(spec, view, true);
    case InvariantClass::AttributeInequality: return eval_equality(spec, view, false);
    case InvariantClass::Uniqueness: return eval_uniqueness(spec, view);
    case InvariantClass::Sequentiality: return eval_sequentiality(spec, view);
    case InvariantClass::ForeignKey: return eval_foreign_key(spec, view);
    case InvariantClass::SecondaryIndex: return eval_index(spec, view);
    case InvariantClass::MaterializedView: return eval_view(spec, view);
    case InvariantClass::CounterGreaterThan: return eval_counter(spec, view, true);
    case InvariantClass::CounterLessThan: return eval_counter(spec, view, false);
    case InvariantClass::Contains:
    case InvariantClass::NotContains:
    case InvariantClass::SizeEquals: return eval_collection(spec, view);
    case InvariantClass::Recency: return ValidityVerdict::ok();
  }
  return ValidityVerdict::ok();
}

ValidityVerdict evaluate(const InvariantSpec& spec, const DatabaseState& s) {
  return evaluate(spec, visible_state(s));
}

ValidityVerdict evaluate(const std::vector<InvariantSpec>& specs, const LogicalView& view) {
  for (const auto& spec : specs) {
    auto v = evaluate(spec, view);
    if (!v.valid) return v;
  }
  return ValidityVerdict::ok();
}

void check_spec(const InvariantSpec& spec, const Schema& schema) {
  auto need_table = [&](const std::string& t) {
    if (!t.empty() && !schema.has_table(t)) {
      throw Error(ErrorCode::SchemaMismatch, spec.label() + ": unknown table '" + t + "'");
    }
  };
  auto need_field = [&](const std::string& t, const std::string& f) {
    if (t.empty() || f.empty() || f == kKeyField) return;
    need_table(t);
    auto it = schema.tables.find(t);
    if (it != schema.tables.end() && !schema.has_field(t, f)) {
      throw Error(ErrorCode::SchemaMismatch, spec.label() + ": unknown field '" + t + "." + f + "'");
    }
  };
  auto need_filters = [&](const std::string& t, const std::vector<Filter>& fs) {
    for (const auto& f : fs) need_field(t, f.field);
  };
  need_table(spec.table);
  need_field(spec.table, spec.field);
  need_filters(spec.table, spec.filter);
  for (const auto& g : spec.group_by) need_field(spec.table, g);
  need_field(spec.resolve_table, spec.resolve_field);
  need_field(spec.next_table, spec.next_field);
  need_field(spec.to_table, spec.to_field);
  need_filters(spec.to_table, spec.to_filter);
  need_table(spec.index_table);
  if (!spec.item.empty() && spec.item.find('/') == std::string::npos) need_table(spec.item);
  for (const auto* side : {&spec.lhs, &spec.rhs}) {
    for (const auto& a : *side) {
      need_field(a.table, a.field);
      need_filters(a.table, a.filter);
      for (const auto& g : a.group_by) need_field(a.table, g);
    }
  }
}

Invariant make_invariant(std::vector<InvariantSpec> specs, std::string name) {
  if (name.empty()) {
    for (const auto& s : specs) {
      if (!name.empty()) name += " && ";
      name += s.label();
    }
    if (name.empty()) name = "true";
  }
  return Invariant(std::move(name), [specs = std::move(specs)](const LogicalView& view) {
    return evaluate(specs, view);
  });
}

InvariantSpec ViewFunction::spec() const {
  InvariantSpec s;
  s.cls = InvariantClass::MaterializedView;
  s.name = name.empty() ? "view(" + view_table + "." + view_field + ")" : name;
  s.lhs = {Aggregate{view_table, Aggregate::Fn::Sum, view_field, {kKeyField}, {}, 1}};
  s.rhs = {source};
  return s;
}

void maintain_view(const ViewFunction& vf, const LogicalView& view, WriteBatch& out) {
  auto target = aggregate({vf.source}, view);
  for (const auto* r : view.table(vf.view_table)) target.emplace(r->key, 0);
  for (const auto& [group, value] : target) {
    const ItemId item = record_item(vf.view_table, group);
    const auto* r = view.record(item);
    const Value current = r == nullptr ? Value{} : r->get(vf.view_field);
    if (r != nullptr && current == Value{value}) continue;
    if (vf.counter) {
      if (r == nullptr) out.write(item, FieldMap{});
      out.counter(counter_field_item(item, vf.view_field), VersionKind::CounterAssign, 0,
                  Value{value});
    } else {
      FieldMap image = r == nullptr || !r->image ? FieldMap{} : r->image->fields;
      image[vf.view_field] = Value{value};
      out.write(item, std::move(image));
    }
  }
}

std::vector<Version> maintain_view(const ViewFunction& vf, const DatabaseState& s, TxnId writer) {
  WriteBatch batch(writer, writer.replica, s.max_timestamp() + 1);
  maintain_view(vf, visible_state(s), batch);
  return batch.take();
}

Maintenance make_maintenance(std::vector<ViewFunction> views) {
  if (views.empty()) return {};
  return [views = std::move(views)](const DatabaseState& post, WriteBatch& batch) {
    const LogicalView view = visible_state(post);
    for (const auto& vf : views) maintain_view(vf, view, batch);
  };
}

void cascade_delete(const LogicalView& view, const std::string& table, const std::string& field,
                    const Value& value, WriteBatch& out) {
  for (const auto* r : view.table(table)) {
    if (field_of(*r, field) == value) out.tombstone(r->item);
  }
  out.cascade_marker(table + "." + field, value);
}

std::vector<Version> cascade_delete(const DatabaseState& s, const std::string& table,
                                    const std::string& field, const Value& value, TxnId writer) {
  WriteBatch batch(writer, writer.replica, s.max_timestamp() + 1);
  cascade_delete(visible_state(s), table, field, value, batch);
  return batch.take();
}

}  // namespace iconf
