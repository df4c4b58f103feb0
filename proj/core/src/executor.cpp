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

#include "iconf/transaction.hpp"

#include <algorithm>

#include "iconf/adt.hpp"

namespace iconf {

bool Schema::has_table(const std::string& t) const {
  return tables.count(t) > 0 || std::find(counters.begin(), counters.end(), t) != counters.end() ||
         std::find(collections.begin(), collections.end(), t) != collections.end();
}

bool Schema::has_field(const std::string& table, const std::string& field) const {
  auto it = tables.find(table);
  if (it == tables.end()) return false;
  const auto& ts = it->second;
  return std::find(ts.fields.begin(), ts.fields.end(), field) != ts.fields.end() ||
         std::find(ts.counter_fields.begin(), ts.counter_fields.end(), field) !=
             ts.counter_fields.end();
}

ValidityVerdict is_valid(const Invariant& i, const DatabaseState& s) {
  return i(visible_state(s));
}

Value resolve_operand(const Operand& o, const Args& args, std::map<std::string, Value>& nonces,
                      ReplicaState& r) {
  switch (o.kind) {
    case Operand::Kind::Literal:
      return o.literal;
    case Operand::Kind::Param: {
      auto it = args.find(o.name);
      if (it == args.end()) {
        throw Error(ErrorCode::UnresolvedReference, "unbound parameter '" + o.name + "'");
      }
      return it->second;
    }
    case Operand::Kind::Nonce: {
      auto it = nonces.find(o.name);
      if (it != nonces.end()) return it->second;
      auto [n, next] = nonce(std::move(r));
      r = std::move(next);
      return nonces.emplace(o.name, n.to_value()).first->second;
    }
  }
  return Value{};
}

ItemId resolve_item(const ItemRef& ref, const Args& args, std::map<std::string, Value>& nonces,
                    ReplicaState& r) {
  if (!ref.key) return ref.table;
  return record_item(ref.table, to_string(resolve_operand(*ref.key, args, nonces, r)));
}

namespace {

// Per-invocation scratch: the snapshot view plus this transaction's own
// uncommitted effects, so later operations observe earlier ones.
class Body {
 public:
  Body(const Transaction& t, ReplicaState& r, const ExecutionContext& ctx, WriteBatch& batch)
      : t_(t), r_(r), ctx_(ctx), batch_(batch), view_(visible_state(r.local)) {}

  // Returns false on explicit abort.
  bool run(std::string& detail) {
    for (const auto& op : t_.operations) {
      if (!std::visit([&](const auto& o) { return apply(o, detail); }, op)) return false;
    }
    for (auto& [item, fields] : images_) {
      if (deleted_.count(item) == 0) batch_.write(item, std::move(fields));
    }
    for (const auto& item : deleted_) batch_.tombstone(item);
    return true;
  }

 private:
  Value eval(const Operand& o) { return resolve_operand(o, t_.args, nonces_, r_); }
  ItemId item(const ItemRef& ref) {
    check_table(ref.table);
    return resolve_item(ref, t_.args, nonces_, r_);
  }

  void check_table(const std::string& table) const {
    if (ctx_.schema == nullptr || ctx_.schema->empty()) return;
    if (!ctx_.schema->has_table(table)) {
      throw Error(ErrorCode::MissingItem,
                  "transaction '" + t_.name + "' references unknown item '" + table + "'");
    }
  }

  void check_field(const std::string& table, const std::string& field) const {
    if (ctx_.schema == nullptr || ctx_.schema->empty()) return;
    auto it = ctx_.schema->tables.find(table);
    if (it == ctx_.schema->tables.end() || it->second.fields.empty()) return;
    if (!ctx_.schema->has_field(table, field)) {
      throw Error(ErrorCode::SchemaMismatch,
                  "transaction '" + t_.name + "' writes unknown field '" + table + "." + field + "'");
    }
  }

  bool live(const ItemId& id) const {
    if (deleted_.count(id) > 0) return false;
    return images_.count(id) > 0 || view_.record(id) != nullptr;
  }

  std::optional<FieldMap> current(const ItemId& id) const {
    if (deleted_.count(id) > 0) return std::nullopt;
    if (auto it = images_.find(id); it != images_.end()) return it->second;
    if (const auto* rv = view_.record(id)) return rv->image->fields;
    return std::nullopt;
  }

  Value field_value(const ItemId& id, const std::string& field) const {
    if (field == "@key") return key_value(key_of(id));
    if (auto it = images_.find(id); it != images_.end()) {
      auto f = it->second.find(field);
      return f == it->second.end() ? Value{} : f->second;
    }
    if (const auto* rv = view_.record(id)) return rv->get(field);
    return Value{};
  }

  void assign_fields(const std::string& table, FieldMap& into, const FieldWrites& writes) {
    for (const auto& [name, operand] : writes) {
      check_field(table, name);
      into[name] = eval(operand);
    }
  }

  bool apply(const op::Read& o, std::string&) {
    item(o.item);
    return true;
  }

  bool apply(const op::Insert& o, std::string& detail) {
    const ItemId id = item(o.item);
    if (live(id) || view_.is_deleted(id) || deleted_.count(id) > 0) {
      detail = "insert of existing item " + id;
      return false;
    }
    FieldMap fields;
    assign_fields(o.item.table, fields, o.fields);
    images_[id] = std::move(fields);
    return true;
  }

  bool apply(const op::Update& o, std::string&) {
    const ItemId id = item(o.item);
    auto image = current(id);
    if (!image) return true;  // no matching row
    assign_fields(o.item.table, *image, o.fields);
    if (!o.index_table.empty()) {
      check_table(o.index_table);
      auto attr = image->find(o.index_field);
      images_[record_item(o.index_table, key_of(id))] =
          FieldMap{{"value", attr == image->end() ? Value{} : attr->second}};
    }
    images_[id] = std::move(*image);
    return true;
  }

  bool apply(const op::Delete& o, std::string&) {
    const ItemId id = item(o.item);
    if (live(id)) {
      images_.erase(id);
      deleted_.insert(id);
    }
    return true;
  }

  bool apply(const op::CascadeDelete& o, std::string&) {
    const Value value = eval(o.value);
    for (const auto& target : o.targets) {
      const auto dot = target.find('.');
      const std::string table = target.substr(0, dot);
      const std::string field = dot == std::string::npos ? std::string{} : target.substr(dot + 1);
      check_table(table);
      for (const auto* rv : view_.table(table)) {
        if (deleted_.count(rv->item) == 0 && field_value(rv->item, field) == value) {
          images_.erase(rv->item);
          deleted_.insert(rv->item);
        }
      }
      for (auto it = images_.begin(); it != images_.end();) {
        if (table_of(it->first) == table && field_value(it->first, field) == value) {
          deleted_.insert(it->first);
          it = images_.erase(it);
        } else {
          ++it;
        }
      }
      batch_.cascade_marker(target, value);
    }
    return true;
  }

  bool apply(const op::Counter& o, std::string&) {
    ItemId id = item(o.item);
    if (!o.field.empty()) id = counter_field_item(id, o.field);
    const Value amount = eval(o.amount);
    const std::int64_t n = as_int(amount).value_or(0);
    switch (o.kind) {
      case op::CounterKind::Increment:
        batch_.counter(std::move(id), VersionKind::CounterInc, n);
        break;
      case op::CounterKind::Decrement:
        batch_.counter(std::move(id), VersionKind::CounterDec, n);
        break;
      case op::CounterKind::Assign:
        batch_.counter(std::move(id), VersionKind::CounterAssign, 0, Value{n});
        break;
    }
    return true;
  }

  bool apply(const op::Collection& o, std::string&) {
    const ItemId id = item(o.item);
    Value element = eval(o.element);
    auto& pending = pending_[id];
    if (o.kind == op::CollectionKind::Add) {
      pending.added.insert(element);
      batch_.collection(id, VersionKind::CollectionAdd, std::move(element));
      return true;
    }
    const auto* snapshot = view_.collection(id);
    const bool present = (snapshot != nullptr && snapshot->contains(element)) ||
                         pending.added.count(element) > 0;
    if (!present || pending.deleted.count(element) > 0) return true;
    pending.deleted.insert(element);
    batch_.collection(id, VersionKind::CollectionDel, std::move(element));
    return true;
  }

  bool apply(const op::AbortIf& o, std::string& detail) {
    if (truthy(eval(o.condition))) {
      detail = "abort-if condition held";
      return false;
    }
    return true;
  }

  bool apply(const op::AssignSequential& o, std::string& detail) {
    const ItemId counter = item(o.counter_item);
    const Value next = field_value(counter, o.counter_field);
    const std::int64_t value = as_int(next).value_or(1);
    const ItemId id = item(o.item);
    if (live(id) || view_.is_deleted(id) || deleted_.count(id) > 0) {
      detail = "insert of existing item " + id;
      return false;
    }
    FieldMap fields;
    assign_fields(o.item.table, fields, o.fields);
    fields[o.field] = Value{value};
    images_[id] = std::move(fields);
    FieldMap counter_image = current(counter).value_or(FieldMap{});
    counter_image[o.counter_field] = Value{value + 1};
    images_[counter] = std::move(counter_image);
    return true;
  }

  struct PendingCollection {
    std::set<Value> added;
    std::set<Value> deleted;
  };

  const Transaction& t_;
  ReplicaState& r_;
  const ExecutionContext& ctx_;
  WriteBatch& batch_;
  LogicalView view_;
  std::map<std::string, Value> nonces_;
  std::map<ItemId, FieldMap> images_;
  std::set<ItemId> deleted_;
  std::map<ItemId, PendingCollection> pending_;
};

std::uint32_t sequence_after(const std::vector<Version>& vs, std::uint32_t floor) {
  for (const auto& v : vs) floor = std::max(floor, v.sequence + 1);
  return floor;
}

}  // namespace

Execution execute_transaction(const Transaction& t, ReplicaState& r, const ExecutionContext& ctx) {
  Execution e;
  e.writer = TxnId{r.id, r.nonce_counter++};
  e.timestamp = r.local.max_timestamp() + 1;
  WriteBatch batch(e.writer, r.id, e.timestamp);
  Body body(t, r, ctx, batch);
  if (!body.run(e.detail)) {
    e.aborted = AbortReason::ExplicitAbort;
    return e;
  }
  e.next_sequence = batch.next_sequence();
  e.produced = batch.take();
  return e;
}

TransactionOutcome commit_execution(Execution e, ReplicaState& r, const Invariant& i,
                                    const ExecutionContext& ctx, std::vector<Version> extra) {
  TransactionOutcome out;
  out.id = e.writer;
  if (e.aborted) {
    out.decision = Decision::Abort;
    out.abort_reason = e.aborted;
    return out;
  }
  std::vector<Version> produced = std::move(e.produced);
  produced.insert(produced.end(), std::make_move_iterator(extra.begin()),
                  std::make_move_iterator(extra.end()));
  DatabaseState post = r.local;
  post.insert(produced);
  if (ctx.maintenance) {
    WriteBatch mb(e.writer, r.id, post.max_timestamp() + 1, sequence_after(produced, e.next_sequence));
    ctx.maintenance(post, mb);
    if (!mb.empty()) {
      auto derived = mb.take();
      post.insert(derived);
      produced.insert(produced.end(), std::make_move_iterator(derived.begin()),
                      std::make_move_iterator(derived.end()));
    }
  }
  auto verdict = is_valid(i, post);
  if (!verdict.valid) {
    out.decision = Decision::Abort;
    out.abort_reason = AbortReason::InvariantViolation;
    out.witness = std::move(verdict.witness);
    return out;
  }
  r.local = std::move(post);
  out.produced = std::move(produced);
  return out;
}

std::pair<TransactionOutcome, ReplicaState> apply_transaction(const Transaction& t, ReplicaState r,
                                                              const Invariant& i,
                                                              const ExecutionContext& ctx) {
  auto e = execute_transaction(t, r, ctx);
  auto outcome = commit_execution(std::move(e), r, i, ctx);
  return {std::move(outcome), std::move(r)};
}

bool absorb(ReplicaState& r, const DatabaseState& incoming, const ExecutionContext& ctx) {
  if (incoming.subset_of(r.local)) return false;
  r.local = merge(r.local, incoming);
  if (ctx.maintenance) {
    WriteBatch mb(TxnId{r.id, r.nonce_counter}, r.id, r.local.max_timestamp() + 1);
    ctx.maintenance(r.local, mb);
    if (!mb.empty()) {
      ++r.nonce_counter;
      r.local.insert(mb.take());
    }
  }
  return true;
}

namespace {

void add_table(std::set<std::string>& out, const std::string& target) {
  out.insert(target.substr(0, target.find('.')));
}

}  // namespace

std::set<std::string> written_tables(const Transaction& t) {
  std::set<std::string> out;
  for (const auto& op : t.operations) {
    std::visit(
        [&](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, op::Insert> || std::is_same_v<T, op::Delete> ||
                        std::is_same_v<T, op::Counter> || std::is_same_v<T, op::Collection>) {
            out.insert(o.item.table);
          } else if constexpr (std::is_same_v<T, op::Update>) {
            out.insert(o.item.table);
            if (!o.index_table.empty()) out.insert(o.index_table);
          } else if constexpr (std::is_same_v<T, op::CascadeDelete>) {
            for (const auto& target : o.targets) add_table(out, target);
          } else if constexpr (std::is_same_v<T, op::AssignSequential>) {
            out.insert(o.item.table);
            out.insert(o.counter_item.table);
          }
        },
        op);
  }
  return out;
}

std::set<std::string> read_tables(const Transaction& t) {
  std::set<std::string> out;
  for (const auto& op : t.operations) {
    std::visit(
        [&](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, op::Read> || std::is_same_v<T, op::Insert> ||
                        std::is_same_v<T, op::Update> || std::is_same_v<T, op::Delete>) {
            out.insert(o.item.table);
          } else if constexpr (std::is_same_v<T, op::Collection>) {
            if (o.kind == op::CollectionKind::Del) out.insert(o.item.table);
          } else if constexpr (std::is_same_v<T, op::CascadeDelete>) {
            for (const auto& target : o.targets) add_table(out, target);
          } else if constexpr (std::is_same_v<T, op::AssignSequential>) {
            out.insert(o.counter_item.table);
          }
        },
        op);
  }
  return out;
}

}  // namespace iconf
