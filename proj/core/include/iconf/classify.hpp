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

// Static classification of (invariant class, operation class) pairs and of
// whole transactions against a list of invariant specs.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iconf/invariants.hpp"
#include "iconf/transaction.hpp"

namespace iconf {

enum class OperationClass {
  Read,
  WriteAnyValue,
  WriteChosenUnique,
  Insert,
  Delete,
  CascadeDelete,
  UpdateIndexed,
  ViewUpdate,
  CounterIncrement,
  CounterDecrement,
  CounterAssign,
  CollectionAdd,
  CollectionDel,
};

std::string_view to_string(OperationClass c);
std::optional<OperationClass> operation_class_from_string(std::string_view s);
const std::vector<OperationClass>& all_operation_classes();
const std::vector<InvariantClass>& all_invariant_classes();

enum class Verdict { IConfluent, NotIConfluent, Unknown };
std::string_view to_string(Verdict v);

struct Classification {
  Verdict verdict = Verdict::Unknown;
  std::optional<int> proof;

  bool operator==(const Classification&) const = default;
};

// Pure lookup over the rule table; Unknown outside it.
Classification classify_static(InvariantClass inv, OperationClass op);

// One row of the rule table as it is published: invariant, operation,
// verdict, proof numbers, and a representative class pair.
struct RuleRow {
  std::string invariant;
  std::string operation;
  InvariantClass inv;
  OperationClass op;
  Verdict verdict;
  std::vector<int> proofs;
};

const std::vector<RuleRow>& rule_table();

// Context-free tags of an operation (empty for abort-if).
std::optional<OperationClass> operation_class(const Operation& op);
// Tags of a whole transaction; adds write-chosen-unique when a nonce is used.
std::set<OperationClass> operation_classes(const Transaction& t);

// The class of op relative to spec, or nullopt when op cannot falsify spec
// (disjoint footprint, or deletion from the quantified side).
std::optional<OperationClass> relative_class(const Operation& op, const Transaction& t,
                                             const InvariantSpec& spec);

struct PairClassification {
  std::string invariant;
  std::size_t op_index = 0;
  std::string operation;
  OperationClass op_class = OperationClass::Read;
  Classification classification;
};

struct TransactionReport {
  std::string transaction;
  std::vector<PairClassification> pairs;      // relevant pairs only
  std::vector<PairClassification> offending;  // NotIConfluent or Unknown
  bool coordination_free() const { return offending.empty(); }
};

TransactionReport classify_transaction(const Transaction& t, const std::vector<InvariantSpec>& specs);

std::string describe(const Operation& op);

}  // namespace iconf
