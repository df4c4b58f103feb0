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

// Desk-scale TPC-C: schema, the New-Order / Payment / Delivery transactions,
// the declared consistency conditions and the coordination-avoiding
// New-Order plan with tmp/real order-ID indirection.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iconf/classify.hpp"
#include "iconf/simulator.hpp"
#include "iconf/workload.hpp"

namespace iconf::tpcc {

inline constexpr int kDistricts = 10;

struct Scale {
  int warehouses = 2;
  int items = 100;
  int customers = 30;  // per district
  std::int64_t initial_stock = 100;
};

Schema schema();
std::vector<InitialEntry> initial_entries(const Scale& scale);
DatabaseState initial_state(const Scale& scale);

std::string district_key(int w, int d);
std::string customer_key(int w, int d, int c);
std::string stock_key(int w, int item);

// One consistency condition with its encoding and declared transactions
// (N = New-Order, P = Payment, D = Delivery).
struct ConsistencyCondition {
  int number = 0;
  std::string description;
  std::string type;  // "MV", "S_ID", "S_ID+FK", "FK"
  std::string txns;  // e.g. "N, D"
  std::vector<InvariantSpec> specs;
};

const std::vector<ConsistencyCondition>& conditions();
std::vector<InvariantSpec> all_specs();
// Conditions the classifier finds coordination-free; they are enforced at
// every replica state.
std::vector<InvariantSpec> confluent_specs();

// Logical transactions as the classifier sees them, with parameters.
Transaction new_order_logical(int lines = 5);
Transaction payment_logical();
Transaction delivery_logical(int lines = 5);

struct ClassifiedCondition {
  int number = 0;
  std::string description;
  std::string type;
  std::string txns;
  Verdict verdict = Verdict::Unknown;
  std::vector<std::string> offending;  // "<txn>: <op> (<class>)"
};

std::vector<ClassifiedCondition> classify_tpcc();

struct OrderLine {
  int supply_w = 1;
  int item = 1;
  int qty = 1;
};

struct NewOrderRequest {
  int w = 1;
  int d = 1;
  int c = 1;
  std::vector<OrderLine> lines;
};

// Client-side part: writes order, new-order, order-line and stock rows under
// a nonce tmp id. Commits without coordination.
Transaction new_order_local(const NewOrderRequest& req);
// Home-site part: binds the next real id of the district to tmp.
Transaction assign_order_id(const Value& tmp, const std::string& district);
// Both parts as one transaction, for the coordinated baseline.
Transaction new_order_serial(const NewOrderRequest& req);
Transaction payment(int w, int d, const std::string& customer, std::int64_t amount);
// Delivers one pending order (tmp id) visible in view; nullopt when the
// order or its new-order row is not visible.
std::optional<Transaction> delivery(const LogicalView& view, const Value& tmp, int carrier);

// Tmp id written by a committed new-order transaction.
std::optional<Value> order_tmp_id(const TransactionOutcome& outcome);

// Real id of an order, or nullopt while the mapping is pending. Tmp ids are
// never returned.
std::optional<std::int64_t> resolve_order_id(const LogicalView& view, const Value& tmp);

struct NewOrderResult {
  TransactionOutcome local;
  Value tmp;
  std::optional<std::int64_t> real;
};

// Runs the local part at client and the id assignment at home. Throws
// ItemNotFound when a referenced warehouse, district, customer or stock row
// is not visible at the client.
NewOrderResult new_order_coordination_avoiding(const NewOrderRequest& req, ReplicaState& client,
                                               ReplicaState& home, const Invariant& commit_invariant);

// Per district, real ids are exactly 1..n and next_o_id = n + 1. Returns a
// description of the first defect.
std::optional<std::string> gap_free(const DatabaseState& s);

// Transaction templates, invariants and D0 as a generic workload. Template
// parameters are drawn independently, so only a single warehouse keeps them
// mutually consistent; scale.warehouses is ignored.
Workload workload(const Scale& scale = Scale{1, 20, 3, 100});

struct Config {
  SimConfig sim;
  Scale scale;
  double distributed_fraction = 0.1;
  double payment_fraction = 0.2;
  int min_lines = 2;
  int max_lines = 6;
  double delivery_fraction = 0.5;  // oldest pending orders delivered per district at the end
};

// Default simulation settings for TPC-C runs: one warehouse per server,
// four clients per server.
Config default_config(int servers);

class Driver : public iconf::Driver {
 public:
  explicit Driver(Config cfg);
  Driver(const Driver&) = delete;
  Driver& operator=(const Driver&) = delete;

  DatabaseState initial() const override { return initial_; }
  const Invariant& commit_invariant() const override { return confluent_; }
  const Invariant& final_invariant() const override { return all_; }
  const ExecutionContext& context() const override { return ctx_; }
  Transaction next(std::size_t client, ReplicaId replica, bool coordinated, Rng& rng) override;
  ReplicaId client_replica(std::size_t client, std::size_t replicas) const override;
  ReplicaId home(const ItemId& item, std::size_t replicas) const override;
  std::optional<SiteRequest> site_step(const Transaction& txn, const TransactionOutcome& outcome,
                                       ReplicaId replica, std::size_t replicas) override;
  std::vector<SiteRequest> finish(const std::vector<ReplicaState>& replicas) override;

  ReplicaId warehouse_home(int w, std::size_t replicas) const;

 private:
  Config cfg_;
  Schema schema_;
  DatabaseState initial_;
  Invariant confluent_;
  Invariant all_;
  ExecutionContext ctx_;
};

struct ConditionAudit {
  int number = 0;
  bool holds = false;
  std::optional<Witness> witness;
};

struct Result {
  Metrics metrics;
  std::vector<ConditionAudit> audit;  // all conditions on the converged state
  bool gap_free = false;
  std::string gap_detail;
  std::uint64_t orders = 0;

  bool all_hold() const;
};

Result run_tpcc(const Config& cfg);

}  // namespace iconf::tpcc
