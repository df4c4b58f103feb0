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

// Discrete-event execution of a workload over simulated replicas, either
// coordination-free (local commit, anti-entropy merge) or under distributed
// two-phase locking. Time is virtual and measured in milliseconds.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iconf/network.hpp"
#include "iconf/workload.hpp"

namespace iconf {

enum class Strategy {
  CoordinationFree,
  Coordinated2PL,       // locks released at commit
  Coordinated2PCModel,  // 2PL plus an atomic-commit round to remote participants
};

std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view s);

struct SimConfig {
  std::size_t replicas = 2;
  std::size_t clients = 2;
  double duration = 1000;
  Strategy strategy = Strategy::CoordinationFree;
  double anti_entropy_interval = 10;
  std::uint64_t seed = 1;
  NetworkModel network;
  double exec_cost = 0.01;
  std::size_t max_drain_rounds = 1000;

  // Throws ConfigInvalid.
  void validate() const;
};

// Drops messages between pair during [start, end), clamped to the run.
SimConfig inject_partition(SimConfig cfg, std::pair<ReplicaId, ReplicaId> pair, double start, double end);

struct LatencySummary {
  std::size_t count = 0;
  double mean = 0;
  double p50 = 0;
  double p90 = 0;
  double p99 = 0;
  double max = 0;
  bool operator==(const LatencySummary&) const = default;
};

LatencySummary summarize(std::vector<double> samples);

struct ViolationRecord {
  double time = 0;
  ReplicaId replica = 0;
  Witness witness;
  bool operator==(const ViolationRecord&) const = default;
};

struct Metrics {
  Strategy strategy = Strategy::CoordinationFree;
  std::uint64_t attempts = 0;
  std::uint64_t committed = 0;
  std::uint64_t aborted = 0;
  std::uint64_t committed_in_window = 0;
  double throughput = 0;  // committed in window per simulated second
  LatencySummary latency;
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_dropped = 0;
  double stall_time = 0;
  double end_time = 0;

  bool converged_at_end = false;          // all replicas equal at the duration
  std::vector<bool> replica_converged;    // after heal and drain
  bool converged = false;

  std::uint64_t audits = 0;
  std::uint64_t violations = 0;
  std::optional<ViolationRecord> first_violation;
  bool final_valid = true;
  std::optional<Witness> final_witness;

  bool serializable = true;  // coordinated strategies only
  DatabaseState final_state;

  bool operator==(const Metrics&) const = default;
};

// Work the home replica of a record performs on behalf of a committed
// transaction before the client sees the commit.
struct SiteRequest {
  ReplicaId home = 0;
  Transaction txn;
};

// What the simulator runs. The default hooks describe a plain workload.
class Driver {
 public:
  virtual ~Driver() = default;

  virtual DatabaseState initial() const = 0;
  // Checked by the executor on every local commit.
  virtual const Invariant& commit_invariant() const = 0;
  // Checked on every replica state the run produces.
  virtual const Invariant& audit_invariant() const { return commit_invariant(); }
  // Checked once on the converged state.
  virtual const Invariant& final_invariant() const { return audit_invariant(); }
  virtual const ExecutionContext& context() const = 0;

  virtual Transaction next(std::size_t client, ReplicaId replica, bool coordinated, Rng& rng) = 0;

  virtual ReplicaId client_replica(std::size_t client, std::size_t replicas) const {
    return static_cast<ReplicaId>(client % replicas);
  }
  virtual ReplicaId home(const ItemId& item, std::size_t replicas) const {
    return static_cast<ReplicaId>(fnv1a(item) % replicas);
  }
  virtual std::optional<SiteRequest> site_step(const Transaction& /*txn*/,
                                               const TransactionOutcome& /*outcome*/,
                                               ReplicaId /*replica*/, std::size_t /*replicas*/) {
    return std::nullopt;
  }
  // Batch work run once clients stop, against the drained replica states.
  virtual std::vector<SiteRequest> finish(const std::vector<ReplicaState>& /*replicas*/) { return {}; }
};

class WorkloadDriver : public Driver {
 public:
  // Throws ConfigInvalid when the workload has no transactions.
  explicit WorkloadDriver(Workload w);

  DatabaseState initial() const override { return initial_; }
  const Invariant& commit_invariant() const override { return invariant_; }
  const ExecutionContext& context() const override { return ctx_; }
  Transaction next(std::size_t client, ReplicaId replica, bool coordinated, Rng& rng) override;

 private:
  Workload workload_;
  DatabaseState initial_;
  Invariant invariant_;
  Maintenance maintenance_;
  ExecutionContext ctx_;
};

// Lock footprint of a transaction: (item, exclusive), one entry per item,
// sorted in the global lock order. Nonce-keyed items are fresh and skipped.
std::vector<std::pair<ItemId, bool>> lock_footprint(const Transaction& t);

Metrics run_coordination_free(Driver& d, const SimConfig& cfg);
Metrics run_coordinated(Driver& d, const SimConfig& cfg);
// Dispatches on cfg.strategy.
Metrics simulate(Driver& d, const SimConfig& cfg);
Metrics simulate(const Workload& w, const SimConfig& cfg);

}  // namespace iconf
