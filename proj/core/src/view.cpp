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

#include "iconf/view.hpp"

#include <unordered_map>

#include "iconf/adt.hpp"

namespace iconf {

Value RecordView::get(const std::string& field) const {
  if (auto it = counters.find(field); it != counters.end()) return Value{it->second};
  if (image) {
    if (auto it = image->fields.find(field); it != image->fields.end()) return it->second;
  }
  return Value{};
}

FieldMap RecordView::fields() const {
  FieldMap out;
  if (image) out = image->fields;
  for (const auto& [name, value] : counters) out[name] = Value{value};
  return out;
}

std::vector<Value> CollectionView::ordered() const {
  std::vector<Value> out;
  for (const auto& v : added) {
    if (deleted.count(v) == 0) out.push_back(v);
  }
  return out;
}

const RecordView* LogicalView::record(const ItemId& item) const {
  auto it = records_.find(item);
  return it == records_.end() ? nullptr : &it->second;
}

const std::vector<const RecordView*>& LogicalView::table(const std::string& name) const {
  static const std::vector<const RecordView*> none;
  auto it = by_table_.find(name);
  return it == by_table_.end() ? none : it->second;
}

std::int64_t LogicalView::counter(const ItemId& item) const {
  auto it = counters_.find(item);
  return it == counters_.end() ? 0 : it->second;
}

const CollectionView* LogicalView::collection(const ItemId& item) const {
  auto it = collections_.find(item);
  return it == collections_.end() ? nullptr : &it->second;
}

LogicalView visible_state(const DatabaseState& s) {
  LogicalView out;
  out.max_timestamp_ = s.max_timestamp();

  std::unordered_map<std::string_view, VersionPtr> images;
  std::unordered_map<std::string_view, CounterFold> counters;
  std::unordered_map<std::string_view, CollectionFold> collections;

  for (const auto& v : s) {
    switch (v->kind) {
      case VersionKind::Write: {
        auto& slot = images[v->item];
        if (!slot || lww_less(*slot, *v)) slot = v;
        break;
      }
      case VersionKind::Tombstone:
        out.deleted_.insert(v->item);
        break;
      case VersionKind::CounterInc:
      case VersionKind::CounterDec:
      case VersionKind::CounterAssign:
        counters[v->item].add(*v);
        break;
      case VersionKind::CollectionAdd:
      case VersionKind::CollectionDel:
        collections[v->item].add(*v);
        break;
      case VersionKind::CascadeMarker:
        out.cascade_markers_.emplace(v->item, v->payload);
        break;
    }
  }

  for (const auto& [item, image] : images) {
    if (out.deleted_.count(image->item) > 0) continue;
    RecordView rv;
    rv.item = image->item;
    rv.table = std::string(table_of(rv.item));
    rv.key = std::string(key_of(rv.item));
    rv.image = image;
    out.records_.emplace(rv.item, std::move(rv));
  }
  for (const auto& [item, fold] : counters) {
    const std::int64_t value = fold.value();
    out.counters_.emplace(std::string(item), value);
    auto hash = item.rfind('#');
    if (hash == std::string_view::npos) continue;
    auto it = out.records_.find(std::string(item.substr(0, hash)));
    if (it != out.records_.end()) it->second.counters[std::string(item.substr(hash + 1))] = value;
  }
  for (const auto& [item, fold] : collections) {
    out.collections_.emplace(std::string(item), CollectionView{fold.added(), fold.deleted()});
  }
  for (const auto& [item, rv] : out.records_) out.by_table_[rv.table].push_back(&rv);
  return out;
}

}  // namespace iconf
