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

// A workload: schema, invariants, derived views, transaction templates and
// the initial state D0. Shared by the checker, the simulator and the file
// format.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "iconf/invariants.hpp"
#include "iconf/transaction.hpp"

namespace iconf {

using Rng = std::mt19937_64;

// Distribution of one transaction parameter.
struct ParamDomain {
  enum class Kind { Range, Choice };
  Kind kind = Kind::Range;
  std::int64_t lo = 0;
  std::int64_t hi = 0;  // inclusive
  std::vector<Value> choices;

  static ParamDomain range(std::int64_t lo, std::int64_t hi) { return {Kind::Range, lo, hi, {}}; }
  static ParamDomain choice(std::vector<Value> values) { return {Kind::Choice, 0, 0, std::move(values)}; }

  Value sample(Rng& rng) const;
  bool operator==(const ParamDomain&) const = default;
};

struct TransactionTemplate {
  Transaction txn;
  std::map<std::string, ParamDomain> params;
  double weight = 1.0;

  bool operator==(const TransactionTemplate&) const = default;
};

// Draws every parameter from its domain; parameters already bound in
// txn.args are kept.
Transaction bind(const TransactionTemplate& t, Rng& rng);

// One declarative D0 entry.
struct InitialEntry {
  enum class Kind { Record, Counter, Collection };
  Kind kind = Kind::Record;
  ItemId item;
  FieldMap fields;          // Record
  std::int64_t value = 0;   // Counter: assigned base
  std::vector<Value> elements;  // Collection: added elements

  bool operator==(const InitialEntry&) const = default;
};

struct Workload {
  std::string name;
  Schema schema;
  std::vector<InvariantSpec> invariants;
  std::vector<ViewFunction> views;
  std::vector<TransactionTemplate> transactions;
  std::vector<InitialEntry> initial;

  bool operator==(const Workload&) const = default;
};

// Writer of D0 versions; never allocated to a live replica.
inline constexpr TxnId kInitialWriter{0, 0};

// D0 built from the declarative entries, with view maintenance applied.
DatabaseState initial_state(const Workload& w);
Invariant workload_invariant(const Workload& w);
Maintenance workload_maintenance(const Workload& w);

// Picks a template by weight.
const TransactionTemplate& pick(const std::vector<TransactionTemplate>& ts, Rng& rng);

}  // namespace iconf
