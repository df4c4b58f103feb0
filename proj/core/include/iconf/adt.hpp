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

// Merge-friendly abstract data types. Every ADT event is an ordinary Version,
// so ADT merge is the set-union merge; the functions here only interpret
// event sets.

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "iconf/state.hpp"

namespace iconf {

// Folds counter events of one counter into its value. An assign establishes
// a last-writer-wins base; inc/dec events ordered after the winning assign
// (in LWW order) apply on top of it. Without assigns the value is
// sum(inc amounts) - sum(dec amounts).
class CounterFold {
 public:
  void add(const Version& v);
  std::int64_t value() const;

 private:
  std::vector<const Version*> deltas_;
  const Version* base_ = nullptr;
};

// Distinct added and deleted elements of one collection.
class CollectionFold {
 public:
  void add(const Version& v);
  const std::set<Value>& added() const { return added_; }
  const std::set<Value>& deleted() const { return deleted_; }

 private:
  std::set<Value> added_;
  std::set<Value> deleted_;
};

std::int64_t counter_value(const DatabaseState& s, const ItemId& counter);

// |{v : add(v) in s}| - |{v : del(v) in s}|; zero for a missing collection.
std::int64_t collection_size(const DatabaseState& s, const ItemId& collection);

// True iff v was added and has not been deleted.
bool collection_contains(const DatabaseState& s, const ItemId& collection, const Value& v);

// Contained elements in lexicographic (value) order.
std::vector<Value> list_order(const DatabaseState& s, const ItemId& collection);

// Replica-scoped unique value: (replica id, counter). Returns the replica
// with its counter advanced.
std::pair<NonceValue, ReplicaState> nonce(ReplicaState r);

}  // namespace iconf
