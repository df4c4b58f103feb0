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

// Diamond-shaped divergent executions: generation from a common ancestor,
// replay, and the randomized counterexample search.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "iconf/workload.hpp"

namespace iconf {

inline constexpr std::size_t kAncestor = std::numeric_limits<std::size_t>::max();

struct HistoryNode {
  enum class Kind { Txn, Merge };
  Kind kind = Kind::Txn;
  std::vector<std::size_t> inputs;  // node indices or kAncestor
  Transaction txn;                  // Txn only, with bound arguments
  ReplicaId replica = 0;            // replica the step ran on
  DatabaseState state;              // state after the step, as generated
};

// A partially ordered set of transaction and merge invocations rooted at an
// ancestor state. Node inputs always precede the node.
struct History {
  DatabaseState ancestor;
  std::vector<HistoryNode> nodes;
  std::size_t tip = kAncestor;
  std::uint64_t seed = 0;

  const DatabaseState& end_state() const {
    return tip == kAncestor ? ancestor : nodes[tip].state;
  }
  std::size_t transactions() const;
};

struct GeneratorOptions {
  double fork_probability = 0.3;
  double merge_probability = 0.3;
  double prefix_continue = 0.5;  // geometric ancestor-prefix length
  int max_prefix = 4;
  int attempts_per_transaction = 16;
};

struct DivergentPair {
  DatabaseState ancestor;
  std::vector<Transaction> prefix;  // committed serially from D0
  History h1;
  History h2;
};

DivergentPair generate_divergent_pair(const Workload& w, int depth, std::uint64_t seed,
                                      const GeneratorOptions& opts = {});

// Merge followed by view maintenance on a replica that exists only for it.
DatabaseState merge_states(const DatabaseState& a, const DatabaseState& b, ReplicaId replica,
                           const ExecutionContext& ctx);

// Re-executes h in topological order on isolated replicas, forcing merges,
// and returns the tip state. Throws ReplayInvalid when a step aborts or an
// intermediate state is invalid.
DatabaseState replay(const History& h, const Workload& w);

struct Counterexample {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  DatabaseState ancestor;
  std::vector<Transaction> prefix;
  History h1;
  History h2;
  DatabaseState merged;
  Witness witness;
};

struct ConfluenceVerdict {
  enum class Outcome { CounterexampleFound, NoCounterexampleFound };
  Outcome outcome = Outcome::NoCounterexampleFound;
  std::size_t trials = 0;
  std::size_t commits = 0;
  std::optional<Counterexample> counterexample;

  bool found() const { return outcome == Outcome::CounterexampleFound; }
};

ConfluenceVerdict check_dynamic(const Workload& w, std::size_t trials, int depth, std::uint64_t seed,
                                const GeneratorOptions& opts = {});

// Independent re-check: both branch ends valid, merged state invalid, and
// merged equals merge of the branch ends.
bool validate_counterexample(const Counterexample& c, const Workload& w);

std::string render_state(const LogicalView& view);
std::string render_state(const DatabaseState& s);
std::string render_args(const Args& args);
std::string narrative(const Counterexample& c);

}  // namespace iconf
