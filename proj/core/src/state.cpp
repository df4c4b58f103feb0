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

#include "iconf/state.hpp"

#include <algorithm>
#include <cassert>

namespace iconf {

namespace {

bool id_less(const VersionPtr& a, const VersionPtr& b) {
  return std::tie(a->writer, a->sequence, a->item) < std::tie(b->writer, b->sequence, b->item);
}

bool id_equal(const VersionPtr& a, const VersionPtr& b) {
  return a->writer == b->writer && a->sequence == b->sequence && a->item == b->item;
}

}  // namespace

std::string to_string(const TxnId& id) {
  return "t" + std::to_string(id.replica) + "." + std::to_string(id.counter);
}

std::string_view to_string(VersionKind k) {
  switch (k) {
    case VersionKind::Write: return "write";
    case VersionKind::Tombstone: return "tombstone";
    case VersionKind::CounterInc: return "inc";
    case VersionKind::CounterDec: return "dec";
    case VersionKind::CounterAssign: return "assign";
    case VersionKind::CollectionAdd: return "add";
    case VersionKind::CollectionDel: return "del";
    case VersionKind::CascadeMarker: return "cascade";
  }
  return "?";
}

DatabaseState::DatabaseState(std::vector<Version> versions) { insert(std::move(versions)); }

bool DatabaseState::contains(const VersionId& id) const { return find(id) != nullptr; }

const Version* DatabaseState::find(const VersionId& id) const {
  auto it = std::lower_bound(versions_.begin(), versions_.end(), id,
                             [](const VersionPtr& v, const VersionId& key) {
                               return std::tie(v->writer, v->sequence, v->item) <
                                      std::tie(key.writer, key.sequence, key.item);
                             });
  if (it != versions_.end() && (*it)->writer == id.writer && (*it)->sequence == id.sequence &&
      (*it)->item == id.item) return it->get();
  return nullptr;
}

void DatabaseState::insert(std::vector<Version> versions) {
  if (versions.empty()) return;
  std::vector<VersionPtr> fresh;
  fresh.reserve(versions.size());
  for (auto& v : versions) {
    max_timestamp_ = std::max(max_timestamp_, v.timestamp);
    fresh.push_back(std::make_shared<const Version>(std::move(v)));
  }
  std::sort(fresh.begin(), fresh.end(), id_less);
  fresh.erase(std::unique(fresh.begin(), fresh.end(),
                          id_equal),
              fresh.end());
  std::vector<VersionPtr> out;
  out.reserve(versions_.size() + fresh.size());
  std::set_union(versions_.begin(), versions_.end(), fresh.begin(), fresh.end(),
                 std::back_inserter(out), id_less);
  versions_ = std::move(out);
}

bool DatabaseState::subset_of(const DatabaseState& other) const {
  return std::includes(other.versions_.begin(), other.versions_.end(), versions_.begin(),
                       versions_.end(), id_less);
}

bool DatabaseState::operator==(const DatabaseState& other) const {
  return std::equal(versions_.begin(), versions_.end(), other.versions_.begin(),
                    other.versions_.end(),
                    [](const VersionPtr& a, const VersionPtr& b) { return a == b || *a == *b; });
}

DatabaseState merge(const DatabaseState& a, const DatabaseState& b) {
  if (a.versions_.empty()) return b;
  if (b.versions_.empty()) return a;
  DatabaseState out;
  out.versions_.reserve(a.versions_.size() + b.versions_.size());
  // set_union keeps a's copy for ids present in both; ids determine content.
  std::set_union(a.versions_.begin(), a.versions_.end(), b.versions_.begin(), b.versions_.end(),
                 std::back_inserter(out.versions_), id_less);
  out.max_timestamp_ = std::max(a.max_timestamp_, b.max_timestamp_);
  return out;
}

Value NonceValue::to_value() const {
  return Value{"n" + std::to_string(replica) + "." + std::to_string(counter)};
}

Version& WriteBatch::emit(ItemId item, VersionKind kind) {
  Version v;
  v.item = std::move(item);
  v.kind = kind;
  v.writer = writer_;
  v.sequence = next_sequence_++;
  v.origin = origin_;
  v.timestamp = timestamp_;
  versions_.push_back(std::move(v));
  return versions_.back();
}

void WriteBatch::write(ItemId item, FieldMap fields) {
  emit(std::move(item), VersionKind::Write).fields = std::move(fields);
}

void WriteBatch::tombstone(ItemId item) { emit(std::move(item), VersionKind::Tombstone); }

void WriteBatch::counter(ItemId item, VersionKind kind, std::int64_t amount, Value assign) {
  assert(kind == VersionKind::CounterInc || kind == VersionKind::CounterDec ||
         kind == VersionKind::CounterAssign);
  auto& v = emit(std::move(item), kind);
  v.amount = amount;
  v.payload = std::move(assign);
}

void WriteBatch::collection(ItemId item, VersionKind kind, Value element) {
  assert(kind == VersionKind::CollectionAdd || kind == VersionKind::CollectionDel);
  emit(std::move(item), kind).payload = std::move(element);
}

void WriteBatch::cascade_marker(std::string target, Value value) {
  emit(std::move(target), VersionKind::CascadeMarker).payload = std::move(value);
}

ItemId record_item(std::string_view table, std::string_view key) {
  ItemId out;
  out.reserve(table.size() + key.size() + 1);
  out.append(table);
  out.push_back('/');
  out.append(key);
  return out;
}

ItemId counter_field_item(std::string_view record, std::string_view field) {
  ItemId out(record);
  out.push_back('#');
  out.append(field);
  return out;
}

std::string_view table_of(std::string_view item) {
  auto slash = item.find('/');
  return slash == std::string_view::npos ? item : item.substr(0, slash);
}

std::string_view key_of(std::string_view item) {
  auto slash = item.find('/');
  return slash == std::string_view::npos ? std::string_view{} : item.substr(slash + 1);
}

}  // namespace iconf
