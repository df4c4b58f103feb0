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

// Replicated database state: immutable versions, set-union merge, replicas.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "iconf/value.hpp"

namespace iconf {

// Unique invocation identifier of a transaction (or of a merge-time
// maintenance step). Allocated from the executing replica's nonce counter.
struct TxnId {
  ReplicaId replica = 0;
  std::uint64_t counter = 0;
  auto operator<=>(const TxnId&) const = default;
};

std::string to_string(const TxnId& id);

enum class VersionKind : std::uint8_t {
  Write,          // full record image (LWW per item)
  Tombstone,      // record deletion; permanent under merge
  CounterInc,
  CounterDec,
  CounterAssign,
  CollectionAdd,
  CollectionDel,
  CascadeMarker,  // item = "table.field", payload = cascaded value
};

std::string_view to_string(VersionKind k);

using FieldMap = std::map<std::string, Value>;

struct VersionId {
  TxnId writer;
  std::uint32_t sequence = 0;
  ItemId item;
  auto operator<=>(const VersionId&) const = default;
};

// One immutable write of one item.
struct Version {
  ItemId item;
  VersionKind kind = VersionKind::Write;
  FieldMap fields;        // Write only
  Value payload;          // collection element, assign value, cascade value
  std::int64_t amount = 1;  // counter inc/dec
  TxnId writer;
  std::uint32_t sequence = 0;
  ReplicaId origin = 0;
  std::uint64_t timestamp = 0;

  VersionId id() const { return VersionId{writer, sequence, item}; }
  bool operator==(const Version&) const = default;
};

// Total order used for last-writer-wins resolution.
inline bool lww_less(const Version& a, const Version& b) {
  return std::tie(a.timestamp, a.origin, a.writer, a.sequence) <
         std::tie(b.timestamp, b.origin, b.writer, b.sequence);
}

using VersionPtr = std::shared_ptr<const Version>;

// A finite set of versions keyed by VersionId. Versions are shared between
// states, so copies are cheap and never observe mutation.
class DatabaseState {
 public:
  using const_iterator = std::vector<VersionPtr>::const_iterator;

  DatabaseState() = default;
  explicit DatabaseState(std::vector<Version> versions);

  std::size_t size() const { return versions_.size(); }
  bool empty() const { return versions_.empty(); }
  const_iterator begin() const { return versions_.begin(); }
  const_iterator end() const { return versions_.end(); }

  bool contains(const VersionId& id) const;
  const Version* find(const VersionId& id) const;
  std::uint64_t max_timestamp() const { return max_timestamp_; }

  // Adds versions; a version whose id is already present must be identical.
  void insert(std::vector<Version> versions);

  bool subset_of(const DatabaseState& other) const;
  bool operator==(const DatabaseState& other) const;

  friend DatabaseState merge(const DatabaseState& a, const DatabaseState& b);

 private:
  std::vector<VersionPtr> versions_;  // sorted by id, unique
  std::uint64_t max_timestamp_ = 0;
};

// Set union. Commutative, associative, idempotent; D0 = {} is the identity.
DatabaseState merge(const DatabaseState& a, const DatabaseState& b);

struct NonceValue {
  ReplicaId replica = 0;
  std::uint64_t counter = 0;
  auto operator<=>(const NonceValue&) const = default;
  Value to_value() const;
};

struct ReplicaState {
  ReplicaId id = 0;
  DatabaseState local;
  std::uint64_t nonce_counter = 0;

  bool operator==(const ReplicaState&) const = default;
};

// Stamps identity onto the versions one transaction (or maintenance step)
// produces: shared writer, origin and timestamp, increasing sequence.
class WriteBatch {
 public:
  WriteBatch(TxnId writer, ReplicaId origin, std::uint64_t timestamp, std::uint32_t first_sequence = 0)
      : writer_(writer), origin_(origin), timestamp_(timestamp), next_sequence_(first_sequence) {}

  void write(ItemId item, FieldMap fields);
  void tombstone(ItemId item);
  void counter(ItemId item, VersionKind kind, std::int64_t amount, Value assign = {});
  void collection(ItemId item, VersionKind kind, Value element);
  void cascade_marker(std::string target, Value value);

  const std::vector<Version>& versions() const { return versions_; }
  std::vector<Version> take() { return std::move(versions_); }
  bool empty() const { return versions_.empty(); }
  TxnId writer() const { return writer_; }
  std::uint64_t timestamp() const { return timestamp_; }
  std::uint32_t next_sequence() const { return next_sequence_; }

 private:
  Version& emit(ItemId item, VersionKind kind);

  TxnId writer_;
  ReplicaId origin_;
  std::uint64_t timestamp_;
  std::uint32_t next_sequence_;
  std::vector<Version> versions_;
};

// Item naming: records are "table/key"; a counter field of a record is
// "table/key#field"; standalone counters and collections have no '/'.
ItemId record_item(std::string_view table, std::string_view key);
ItemId counter_field_item(std::string_view record, std::string_view field);
std::string_view table_of(std::string_view item);
std::string_view key_of(std::string_view item);

}  // namespace iconf
