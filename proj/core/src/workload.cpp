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

#include "iconf/workload.hpp"

#include <numeric>

namespace iconf {

Value ParamDomain::sample(Rng& rng) const {
  if (kind == Kind::Choice) {
    if (choices.empty()) return Value{};
    std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
    return choices[pick(rng)];
  }
  std::uniform_int_distribution<std::int64_t> d(lo, std::max(lo, hi));
  return Value{d(rng)};
}

Transaction bind(const TransactionTemplate& t, Rng& rng) {
  Transaction out = t.txn;
  for (const auto& [name, domain] : t.params) {
    if (out.args.count(name) == 0) out.args[name] = domain.sample(rng);
  }
  return out;
}

DatabaseState initial_state(const Workload& w) {
  WriteBatch batch(kInitialWriter, 0, 1);
  for (const auto& e : w.initial) {
    switch (e.kind) {
      case InitialEntry::Kind::Record:
        batch.write(e.item, e.fields);
        break;
      case InitialEntry::Kind::Counter:
        batch.counter(e.item, VersionKind::CounterAssign, 0, Value{e.value});
        break;
      case InitialEntry::Kind::Collection:
        for (const auto& v : e.elements) batch.collection(e.item, VersionKind::CollectionAdd, v);
        break;
    }
  }
  DatabaseState s(batch.take());
  if (!w.views.empty()) {
    WriteBatch mb(TxnId{0, 1}, 0, s.max_timestamp() + 1);
    workload_maintenance(w)(s, mb);
    s.insert(mb.take());
  }
  return s;
}

Invariant workload_invariant(const Workload& w) {
  return make_invariant(w.invariants, w.name.empty() ? std::string{} : w.name + " invariants");
}

Maintenance workload_maintenance(const Workload& w) { return make_maintenance(w.views); }

const TransactionTemplate& pick(const std::vector<TransactionTemplate>& ts, Rng& rng) {
  double total = 0;
  for (const auto& t : ts) total += std::max(0.0, t.weight);
  if (total <= 0) {
    std::uniform_int_distribution<std::size_t> d(0, ts.size() - 1);
    return ts[d(rng)];
  }
  std::uniform_real_distribution<double> d(0.0, total);
  double x = d(rng);
  for (const auto& t : ts) {
    x -= std::max(0.0, t.weight);
    if (x < 0) return t;
  }
  return ts.back();
}

}  // namespace iconf
