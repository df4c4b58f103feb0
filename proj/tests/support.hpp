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

// Shared fixtures: hand-built states and a random version pool.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "iconf/state.hpp"
#include "iconf/value.hpp"

namespace iconf::testing {

inline Value v(std::int64_t x) { return Value{x}; }
inline Value v(const char* s) { return Value{std::string(s)}; }

// Versions written by one transaction on replica r at timestamp ts.
class Batch {
 public:
  Batch(ReplicaId r, std::uint64_t counter, std::uint64_t ts = 1) : b_(TxnId{r, counter}, r, ts) {}

  Batch& write(const std::string& item, FieldMap fields) {
    b_.write(item, std::move(fields));
    return *this;
  }
  Batch& tomb(const std::string& item) {
    b_.tombstone(item);
    return *this;
  }
  Batch& inc(const std::string& item, std::int64_t amount = 1) {
    b_.counter(item, VersionKind::CounterInc, amount);
    return *this;
  }
  Batch& dec(const std::string& item, std::int64_t amount = 1) {
    b_.counter(item, VersionKind::CounterDec, amount);
    return *this;
  }
  Batch& assign(const std::string& item, std::int64_t value) {
    b_.counter(item, VersionKind::CounterAssign, 0, Value{value});
    return *this;
  }
  Batch& add(const std::string& item, Value e) {
    b_.collection(item, VersionKind::CollectionAdd, std::move(e));
    return *this;
  }
  Batch& del(const std::string& item, Value e) {
    b_.collection(item, VersionKind::CollectionDel, std::move(e));
    return *this;
  }
  Batch& cascade(const std::string& target, Value value) {
    b_.cascade_marker(target, std::move(value));
    return *this;
  }
  std::vector<Version> take() { return b_.take(); }
  DatabaseState state() { return DatabaseState(b_.take()); }

 private:
  WriteBatch b_;
};

inline DatabaseState join(std::initializer_list<DatabaseState> parts) {
  DatabaseState out;
  for (const auto& p : parts) out = merge(out, p);
  return out;
}

// A pool of versions with distinct ids over a few records, one counter and
// one collection. Random states are subsets of the pool, so any two of them
// agree on shared ids.
class VersionPool {
 public:
  explicit VersionPool(std::uint64_t seed, std::size_t size = 64) : rng_(seed) {
    std::uniform_int_distribution<int> kind(0, 6);
    std::uniform_int_distribution<int> small(0, 3);
    std::uniform_int_distribution<int> ts(1, 20);
    for (std::size_t k = 0; k < size; ++k) {
      WriteBatch b(TxnId{static_cast<ReplicaId>(small(rng_)), k + 1}, static_cast<ReplicaId>(small(rng_)),
                   static_cast<std::uint64_t>(ts(rng_)));
      const std::string rec = "x/k" + std::to_string(small(rng_));
      switch (kind(rng_)) {
        case 0:
        case 1: b.write(rec, {{"f", Value{std::int64_t{small(rng_)}}}}); break;
        case 2: b.tombstone(rec); break;
        case 3: b.counter("c", VersionKind::CounterInc, 1 + small(rng_)); break;
        case 4: b.counter("c", VersionKind::CounterDec, 1 + small(rng_)); break;
        case 5: b.collection("l", VersionKind::CollectionAdd, Value{std::int64_t{small(rng_)}}); break;
        default: b.collection("l", VersionKind::CollectionDel, Value{std::int64_t{small(rng_)}}); break;
      }
      for (auto& ver : b.take()) pool_.push_back(std::move(ver));
    }
  }

  DatabaseState draw() {
    std::bernoulli_distribution keep(0.4);
    std::vector<Version> out;
    for (const auto& ver : pool_) {
      if (keep(rng_)) out.push_back(ver);
    }
    return DatabaseState(std::move(out));
  }

  const std::vector<Version>& versions() const { return pool_; }
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::vector<Version> pool_;
};

}  // namespace iconf::testing
