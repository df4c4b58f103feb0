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

// Transactions as closed-form operation lists, and their execution against a
// replica with local validity checking.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "iconf/state.hpp"
#include "iconf/view.hpp"

namespace iconf {

// Operand of an operation: a literal, a bound transaction parameter, or a
// replica-generated nonce. Nonce operands sharing a slot name evaluate to the
// same value within one invocation.
struct Operand {
  enum class Kind { Literal, Param, Nonce };
  Kind kind = Kind::Literal;
  Value literal;
  std::string name;

  static Operand lit(Value v) { return Operand{Kind::Literal, std::move(v), {}}; }
  static Operand param(std::string n) { return Operand{Kind::Param, {}, std::move(n)}; }
  static Operand nonce(std::string slot = "id") { return Operand{Kind::Nonce, {}, std::move(slot)}; }

  bool operator==(const Operand&) const = default;
};

// A record is addressed as table/key; standalone ADT items use the table name
// alone and leave key empty.
struct ItemRef {
  std::string table;
  std::optional<Operand> key;
  bool operator==(const ItemRef&) const = default;
};

using FieldWrites = std::vector<std::pair<std::string, Operand>>;

namespace op {

struct Read {
  ItemRef item;
  bool operator==(const Read&) const = default;
};

// Fails (explicit abort) when the item is already present.
struct Insert {
  ItemRef item;
  FieldWrites fields;
  bool operator==(const Insert&) const = default;
};

// Read-modify-write of a record image. With index_table set, the same
// transaction also writes "<index_table>/<key>".value = the new attribute.
struct Update {
  ItemRef item;
  FieldWrites fields;
  std::string index_table;
  std::string index_field;
  bool operator==(const Update&) const = default;
};

struct Delete {
  ItemRef item;
  bool operator==(const Delete&) const = default;
};

// Tombstones every live record whose field equals value, for each
// "table.field" target, and leaves a cascade marker per target.
struct CascadeDelete {
  std::vector<std::string> targets;
  Operand value;
  bool operator==(const CascadeDelete&) const = default;
};

enum class CounterKind { Increment, Decrement, Assign };

struct Counter {
  ItemRef item;
  std::string field;  // empty for a standalone counter
  CounterKind kind = CounterKind::Increment;
  Operand amount = Operand::lit(std::int64_t{1});
  bool operator==(const Counter&) const = default;
};

enum class CollectionKind { Add, Del };

struct Collection {
  ItemRef item;
  CollectionKind kind = CollectionKind::Add;
  Operand element;
  bool operator==(const Collection&) const = default;
};

struct AbortIf {
  Operand condition;
  bool operator==(const AbortIf&) const = default;
};

// Inserts item with field = next value of counter_item.counter_field
// (null reads as 1) and advances that record to value + 1.
struct AssignSequential {
  ItemRef item;
  std::string field;
  FieldWrites fields;
  ItemRef counter_item;
  std::string counter_field;
  bool operator==(const AssignSequential&) const = default;
};

}  // namespace op

using Operation = std::variant<op::Read, op::Insert, op::Update, op::Delete, op::CascadeDelete,
                               op::Counter, op::Collection, op::AbortIf, op::AssignSequential>;

using Args = std::map<std::string, Value>;

struct Transaction {
  std::string name;
  std::vector<Operation> operations;
  Args args;                                  // bound parameter values
  std::vector<std::string> declared_writeset;  // tables; empty = derived

  bool operator==(const Transaction&) const = default;
};

// Tables (and their fields) the transaction's operations write.
std::set<std::string> written_tables(const Transaction& t);
std::set<std::string> read_tables(const Transaction& t);

struct TableSchema {
  std::vector<std::string> fields;
  std::vector<std::string> counter_fields;
  bool operator==(const TableSchema&) const = default;
};

struct Schema {
  std::map<std::string, TableSchema> tables;
  std::vector<std::string> counters;     // standalone counter items
  std::vector<std::string> collections;  // standalone collection items

  bool empty() const { return tables.empty() && counters.empty() && collections.empty(); }
  bool has_table(const std::string& t) const;
  bool has_field(const std::string& table, const std::string& field) const;
  bool operator==(const Schema&) const = default;
};

struct Witness {
  std::string invariant;
  std::vector<std::string> items;
  std::string detail;
  bool operator==(const Witness&) const = default;
};

struct ValidityVerdict {
  bool valid = true;
  std::optional<Witness> witness;

  static ValidityVerdict ok() { return {}; }
  static ValidityVerdict violation(Witness w) { return ValidityVerdict{false, std::move(w)}; }
  bool operator==(const ValidityVerdict&) const = default;
};

// A predicate over logical state. Default-constructed invariants accept every state.
class Invariant {
 public:
  using Check = std::function<ValidityVerdict(const LogicalView&)>;

  Invariant() = default;
  Invariant(std::string name, Check check) : name_(std::move(name)), check_(std::move(check)) {}

  const std::string& name() const { return name_; }
  ValidityVerdict operator()(const LogicalView& view) const {
    return check_ ? check_(view) : ValidityVerdict::ok();
  }

 private:
  std::string name_ = "true";
  Check check_;
};

ValidityVerdict is_valid(const Invariant& i, const DatabaseState& s);

// Post-commit and post-merge derived writes (materialized view upkeep).
using Maintenance = std::function<void(const DatabaseState& post, WriteBatch& batch)>;

struct ExecutionContext {
  const Schema* schema = nullptr;  // when set, unknown tables raise MissingItem
  Maintenance maintenance;
};

enum class Decision { Commit, Abort };
enum class AbortReason { ExplicitAbort, InvariantViolation };

struct TransactionOutcome {
  Decision decision = Decision::Commit;
  std::vector<Version> produced;  // empty on abort
  std::optional<AbortReason> abort_reason;
  std::optional<Witness> witness;
  TxnId id;

  bool committed() const { return decision == Decision::Commit; }
};

// The body of a transaction run against a snapshot, not yet installed.
struct Execution {
  TxnId writer;
  std::uint64_t timestamp = 0;
  std::vector<Version> produced;
  std::optional<AbortReason> aborted;
  std::string detail;
  std::uint32_t next_sequence = 0;
};

// Runs t against r's snapshot. Advances r.nonce_counter; never touches r.local.
Execution execute_transaction(const Transaction& t, ReplicaState& r, const ExecutionContext& ctx = {});

// Adds extra (already stamped) versions, runs maintenance, checks i and
// installs the result on commit.
TransactionOutcome commit_execution(Execution e, ReplicaState& r, const Invariant& i,
                                    const ExecutionContext& ctx = {},
                                    std::vector<Version> extra = {});

std::pair<TransactionOutcome, ReplicaState> apply_transaction(const Transaction& t, ReplicaState r,
                                                              const Invariant& i,
                                                              const ExecutionContext& ctx = {});

// Merges incoming into r.local and runs maintenance on the result. Returns
// true when the local version set changed.
bool absorb(ReplicaState& r, const DatabaseState& incoming, const ExecutionContext& ctx = {});

// Resolves an operand against bound arguments and the invocation's nonces.
Value resolve_operand(const Operand& o, const Args& args, std::map<std::string, Value>& nonces,
                      ReplicaState& r);

ItemId resolve_item(const ItemRef& ref, const Args& args, std::map<std::string, Value>& nonces,
                    ReplicaState& r);

}  // namespace iconf
