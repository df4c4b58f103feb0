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

// Logical view: versions, tombstones and ADT events resolved into per-item
// values. Reads and invariant evaluation work on this view.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "iconf/state.hpp"

namespace iconf {

struct RecordView {
  ItemId item;
  std::string table;
  std::string key;
  VersionPtr image;                             // LWW winning Write
  std::map<std::string, std::int64_t> counters;  // counter-typed fields

  // Counter fields shadow image fields; absent fields read as null.
  Value get(const std::string& field) const;
  FieldMap fields() const;
};

struct CollectionView {
  std::set<Value> added;
  std::set<Value> deleted;

  bool contains(const Value& v) const { return added.count(v) > 0 && deleted.count(v) == 0; }
  std::int64_t size() const {
    return static_cast<std::int64_t>(added.size()) - static_cast<std::int64_t>(deleted.size());
  }
  std::vector<Value> ordered() const;
};

class LogicalView {
 public:
  LogicalView() = default;
  LogicalView(const LogicalView&) = delete;
  LogicalView& operator=(const LogicalView&) = delete;
  LogicalView(LogicalView&&) noexcept = default;
  LogicalView& operator=(LogicalView&&) noexcept = default;

  const RecordView* record(const ItemId& item) const;
  bool is_deleted(const ItemId& item) const { return deleted_.count(item) > 0; }
  // Live records of one table, ordered by item id.
  const std::vector<const RecordView*>& table(const std::string& name) const;
  std::int64_t counter(const ItemId& item) const;
  const CollectionView* collection(const ItemId& item) const;
  bool cascaded(const std::string& target, const Value& value) const {
    return cascade_markers_.count({target, value}) > 0;
  }

  const std::map<ItemId, RecordView>& records() const { return records_; }
  const std::map<ItemId, std::int64_t>& counters() const { return counters_; }
  const std::map<ItemId, CollectionView>& collections() const { return collections_; }
  const std::set<ItemId>& deleted() const { return deleted_; }
  const std::set<std::pair<std::string, Value>>& cascade_markers() const { return cascade_markers_; }
  std::uint64_t max_timestamp() const { return max_timestamp_; }

  bool empty() const {
    return records_.empty() && counters_.empty() && collections_.empty() && deleted_.empty() &&
           cascade_markers_.empty();
  }

 private:
  friend LogicalView visible_state(const DatabaseState& s);

  std::map<ItemId, RecordView> records_;
  std::map<std::string, std::vector<const RecordView*>> by_table_;
  std::set<ItemId> deleted_;
  std::map<ItemId, std::int64_t> counters_;
  std::map<ItemId, CollectionView> collections_;
  std::set<std::pair<std::string, Value>> cascade_markers_;
  std::uint64_t max_timestamp_ = 0;
};

LogicalView visible_state(const DatabaseState& s);

}  // namespace iconf
