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

#include "iconf/adt.hpp"

#include <algorithm>

#include "iconf/view.hpp"

namespace iconf {

void CounterFold::add(const Version& v) {
  switch (v.kind) {
    case VersionKind::CounterInc:
    case VersionKind::CounterDec:
      deltas_.push_back(&v);
      break;
    case VersionKind::CounterAssign:
      if (base_ == nullptr || lww_less(*base_, v)) base_ = &v;
      break;
    default:
      break;
  }
}

std::int64_t CounterFold::value() const {
  std::int64_t total = 0;
  if (base_ != nullptr) total = as_int(base_->payload).value_or(0);
  for (const Version* d : deltas_) {
    if (base_ != nullptr && !lww_less(*base_, *d)) continue;
    total += d->kind == VersionKind::CounterInc ? d->amount : -d->amount;
  }
  return total;
}

void CollectionFold::add(const Version& v) {
  if (v.kind == VersionKind::CollectionAdd) added_.insert(v.payload);
  if (v.kind == VersionKind::CollectionDel) deleted_.insert(v.payload);
}

std::int64_t counter_value(const DatabaseState& s, const ItemId& counter) {
  CounterFold fold;
  for (const auto& v : s) {
    if (v->item == counter) fold.add(*v);
  }
  return fold.value();
}

namespace {

CollectionView collect(const DatabaseState& s, const ItemId& collection) {
  CollectionFold fold;
  for (const auto& v : s) {
    if (v->item == collection) fold.add(*v);
  }
  return CollectionView{fold.added(), fold.deleted()};
}

}  // namespace

std::int64_t collection_size(const DatabaseState& s, const ItemId& collection) {
  return collect(s, collection).size();
}

bool collection_contains(const DatabaseState& s, const ItemId& collection, const Value& v) {
  return collect(s, collection).contains(v);
}

std::vector<Value> list_order(const DatabaseState& s, const ItemId& collection) {
  return collect(s, collection).ordered();
}

std::pair<NonceValue, ReplicaState> nonce(ReplicaState r) {
  NonceValue n{r.id, r.nonce_counter};
  ++r.nonce_counter;
  return {n, std::move(r)};
}

}  // namespace iconf
