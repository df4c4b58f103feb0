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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "iconf/build.hpp"
#include "iconf/catalog.hpp"
#include "iconf/commit_model.hpp"
#include "iconf/network.hpp"
#include "iconf/simulator.hpp"

namespace iconf {
namespace {

namespace b = build;

Workload counter_workload() {
  Workload w;
  w.name = "one-counter";
  w.schema.counters = {"c"};
  w.invariants = {b::counter_gt("c", -1)};
  w.transactions = {TransactionTemplate{b::txn("inc", {b::inc(b::ref("c"))}), {}, 1.0}};
  return w;
}

Workload unique_ids() { return row_workloads().at(2).workload; }

// Every client at replica 0, every item homed at replica 1.
class Contended : public WorkloadDriver {
 public:
  using WorkloadDriver::WorkloadDriver;
  ReplicaId client_replica(std::size_t, std::size_t) const override { return 0; }
  ReplicaId home(const ItemId&, std::size_t) const override { return 1; }
};

SimConfig base(std::size_t replicas = 2, double duration = 500) {
  SimConfig cfg;
  cfg.replicas = replicas;
  cfg.clients = 4;
  cfg.duration = duration;
  cfg.network.base_delay = 5;
  cfg.network.jitter = LatencyDistribution::uniform(0, 2);
  cfg.exec_cost = 0.5;
  return cfg;
}

TEST(Latency, Distributions) {
  Rng rng(1);
  EXPECT_EQ(LatencyDistribution::constant(4).sample(rng), 4);
  auto u = LatencyDistribution::uniform(2, 3);
  for (int k = 0; k < 100; ++k) {
    double x = u.sample(rng);
    EXPECT_GE(x, 2);
    EXPECT_LE(x, 3);
  }
  auto e = LatencyDistribution::empirical({1, 2, 3});
  EXPECT_DOUBLE_EQ(e.mean(), 2);
  for (int k = 0; k < 50; ++k) {
    double x = e.sample(rng);
    EXPECT_TRUE(x == 1 || x == 2 || x == 3);
  }
  auto ln = LatencyDistribution::lognormal(0, 0.5);
  EXPECT_NEAR(ln.mean(), std::exp(0.125), 1e-12);
  try {
    LatencyDistribution::empirical({});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::EmptySamples);
  }
}

TEST(Latency, LoadSamples) {
  const std::string path = ::testing::TempDir() + "iconf_samples.txt";
  {
    std::ofstream f(path);
    f << "# rtt\n1.5\n\n2.5\n";
  }
  EXPECT_EQ(load_samples(path), (std::vector<double>{1.5, 2.5}));
  {
    std::ofstream f(path);
    f << "# nothing\n";
  }
  try {
    load_samples(path);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::EmptySamples);
  }
  std::remove(path.c_str());
  try {
    load_samples(path);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::Io);
  }
}

TEST(Network, HealTimeChainsOverlappingPartitions) {
  NetworkModel n;
  n.partitions = {{0, 1, 10, 20}, {1, 0, 15, 30}, {0, 2, 0, 100}};
  EXPECT_TRUE(n.partitioned(0, 1, 12));
  EXPECT_FALSE(n.partitioned(0, 1, 30));
  EXPECT_EQ(n.heal_time(0, 1, 12), 30);
  EXPECT_EQ(n.heal_time(0, 1, 5), 5);
  EXPECT_EQ(n.heal_time(2, 0, 50), 100);
}

TEST(Config, Validation) {
  auto bad = [](SimConfig cfg) {
    try {
      cfg.validate();
    } catch (const Error& e) {
      return e.code() == ErrorCode::ConfigInvalid;
    }
    return false;
  };
  EXPECT_NO_THROW(base().validate());
  auto c = base();
  c.replicas = 0;
  EXPECT_TRUE(bad(c));
  c = base();
  c.duration = -1;
  EXPECT_TRUE(bad(c));
  c = base();
  c.exec_cost = 0;
  EXPECT_TRUE(bad(c));
  c.strategy = Strategy::Coordinated2PL;
  EXPECT_NO_THROW(c.validate());
  c.network.base_delay = 0;
  c.network.jitter = LatencyDistribution::constant(0);
  EXPECT_TRUE(bad(c));
  auto p = inject_partition(base(), {0, 1}, -5, 1e9);
  EXPECT_EQ(p.network.partitions.back().start, 0);
  EXPECT_EQ(p.network.partitions.back().end, p.duration);
}

TEST(Strategy, Names) {
  for (auto s : {Strategy::CoordinationFree, Strategy::Coordinated2PL, Strategy::Coordinated2PCModel}) {
    EXPECT_EQ(strategy_from_string(to_string(s)), s);
  }
  EXPECT_EQ(strategy_from_string("2pl"), Strategy::Coordinated2PL);
  EXPECT_FALSE(strategy_from_string("paxos"));
}

TEST(Summary, NearestRank) {
  auto s = summarize({5, 1, 4, 2, 3});
  EXPECT_EQ(s.count, 5u);
  EXPECT_DOUBLE_EQ(s.mean, 3);
  EXPECT_EQ(s.p50, 3);
  EXPECT_EQ(s.p90, 5);
  EXPECT_EQ(s.max, 5);
  EXPECT_EQ(summarize({}).count, 0u);
}

TEST(Locks, Footprint) {
  auto t = b::txn("t", {b::read(b::ref("b", b::lit("1"))), b::update(b::ref("a", b::lit("1")), {{"v", b::lit(1)}}),
                        b::insert(b::ref("z", b::nonce()), {}), b::read(b::ref("a", b::lit("1")))});
  auto fp = lock_footprint(t);
  ASSERT_EQ(fp.size(), 2u);
  EXPECT_EQ(fp[0], (std::pair<ItemId, bool>{"a/1", true}));
  EXPECT_EQ(fp[1], (std::pair<ItemId, bool>{"b/1", false}));
}

TEST(CoordinationFree, ConfluentWorkloadWithHealedPartition) {
  auto cfg = inject_partition(base(), {0, 1}, 100, 300);
  auto m = simulate(row_workloads().at(5).workload, cfg);
  EXPECT_GT(m.committed, 0u);
  EXPECT_EQ(m.violations, 0u);
  EXPECT_TRUE(m.final_valid);
  EXPECT_TRUE(m.converged);
  EXPECT_GT(m.messages_dropped, 0u);
  EXPECT_GT(m.audits, 0u);
}

TEST(CoordinationFree, FullPartitionConvergesOnlyAfterHeal) {
  auto cfg = inject_partition(base(), {0, 1}, 0, 500);
  auto m = simulate(counter_workload(), cfg);
  EXPECT_GT(m.committed_in_window, 100u);
  EXPECT_FALSE(m.converged_at_end);
  EXPECT_TRUE(m.converged);
  ASSERT_EQ(m.replica_converged.size(), 2u);
  EXPECT_TRUE(m.replica_converged[1]);
  EXPECT_EQ(m.final_state.size(), m.committed);
}

TEST(CoordinationFree, UniquenessViolatedAfterMerge) {
  auto cfg = inject_partition(base(), {0, 1}, 0, 200);
  auto m = simulate(unique_ids(), cfg);
  EXPECT_GT(m.violations, 0u);
  ASSERT_TRUE(m.first_violation);
  EXPECT_GE(m.first_violation->time, 200);
  EXPECT_FALSE(m.final_valid);
}

TEST(CoordinationFree, Deterministic) {
  auto cfg = inject_partition(base(3), {0, 2}, 50, 150);
  auto w = row_workloads().at(9).workload;
  EXPECT_EQ(simulate(w, cfg), simulate(w, cfg));
  auto other = cfg;
  other.seed = 2;
  EXPECT_NE(simulate(w, cfg).final_state, simulate(w, other).final_state);
}

TEST(Coordinated, SerializableAndValid) {
  auto cfg = base(3);
  cfg.strategy = Strategy::Coordinated2PL;
  auto m = simulate(unique_ids(), cfg);
  EXPECT_GT(m.committed, 0u);
  EXPECT_TRUE(m.serializable);
  EXPECT_EQ(m.violations, 0u);
  EXPECT_TRUE(m.final_valid);
  EXPECT_TRUE(m.converged);
}

TEST(Coordinated, ContendedItemBoundedByDelay) {
  for (double d : {2.0, 8.0}) {
    auto cfg = base(2, 1000);
    cfg.strategy = Strategy::Coordinated2PL;
    cfg.exec_cost = 0;
    cfg.network.base_delay = d;
    cfg.network.jitter = LatencyDistribution::constant(0);
    Contended driver(counter_workload());
    auto m = simulate(driver, cfg);
    EXPECT_LE(m.throughput, 1000 / d * 1.0001);
    EXPECT_GE(m.throughput, 1000 / d * 0.9);
  }
}

TEST(Coordinated, TwoPhaseCommitCostsMore) {
  auto cfg = base(2, 1000);
  cfg.strategy = Strategy::Coordinated2PL;
  Contended d1(counter_workload());
  const double pl = simulate(d1, cfg).throughput;
  cfg.strategy = Strategy::Coordinated2PCModel;
  Contended d2(counter_workload());
  EXPECT_LT(simulate(d2, cfg).throughput, pl);
}

TEST(Coordinated, PartitionStalls) {
  auto cfg = inject_partition(base(2), {0, 1}, 0, 500);
  cfg.strategy = Strategy::Coordinated2PL;
  Contended d(counter_workload());
  auto m = simulate(d, cfg);
  EXPECT_GT(m.stall_time, 0);
  EXPECT_EQ(m.committed_in_window, 0u);
}

TEST(Coordinated, DisjointItemsMatchCoordinationFree) {
  Workload w;
  w.name = "disjoint";
  w.schema.tables["acct"] = TableSchema{{}, {"n"}};
  w.transactions = {TransactionTemplate{b::txn("inc", {b::inc(b::ref("acct", b::par("k")), "n")}),
                                        {{"k", ParamDomain::range(1, 1000000)}}, 1.0}};
  auto cfg = base(1, 500);
  cfg.network.base_delay = 0;
  cfg.network.jitter = LatencyDistribution::constant(0);
  const double free = simulate(w, cfg).throughput;
  cfg.strategy = Strategy::Coordinated2PL;
  const double locked = simulate(w, cfg).throughput;
  EXPECT_NEAR(locked / free, 1.0, 0.05);
}

TEST(CommitModel, WideAreaPoint) {
  auto r = model_commit_throughput(2, CommitProtocol::Decentralized, {166}, 100, 1);
  EXPECT_NEAR(r.throughput, 1000.0 / 83, 1e-9);
  EXPECT_NEAR(r.mean_latency, 83, 1e-9);
  auto c = model_commit_throughput(2, CommitProtocol::Centralized, {166}, 100, 1);
  EXPECT_NEAR(c.mean_latency, 166, 1e-9);
}

TEST(CommitModel, MonotoneInServers) {
  std::vector<double> samples(1000, 1.0);
  samples[0] = 200;
  samples[1] = 50;
  for (auto p : {CommitProtocol::Centralized, CommitProtocol::Decentralized}) {
    double prev = 1e18;
    for (std::size_t n = 2; n <= 8; ++n) {
      auto r = model_commit_throughput(n, p, samples, 500, 17);
      EXPECT_LE(r.throughput, prev);
      prev = r.throughput;
    }
  }
}

TEST(CommitModel, Errors) {
  auto code = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code([] { model_commit_throughput(2, CommitProtocol::Centralized, {}, 10, 1); }), ErrorCode::EmptySamples);
  EXPECT_EQ(code([] { model_commit_throughput(1, CommitProtocol::Centralized, {1}, 10, 1); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code([] { model_commit_throughput(2, CommitProtocol::Centralized, {1}, 0, 1); }), ErrorCode::ConfigInvalid);
}

}  // namespace
}  // namespace iconf
