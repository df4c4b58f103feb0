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

#include "iconf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <set>

namespace iconf {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::CoordinationFree: return "coordination-free";
    case Strategy::Coordinated2PL: return "coordinated-2pl";
    case Strategy::Coordinated2PCModel: return "coordinated-2pc-model";
  }
  return "?";
}

std::optional<Strategy> strategy_from_string(std::string_view s) {
  if (s == "coordination-free" || s == "coordination-avoiding") return Strategy::CoordinationFree;
  if (s == "coordinated-2pl" || s == "2pl") return Strategy::Coordinated2PL;
  if (s == "coordinated-2pc-model" || s == "2pc-model" || s == "2pc") return Strategy::Coordinated2PCModel;
  return std::nullopt;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::ConfigInvalid, m); };
  if (replicas < 1) fail("replicas must be >= 1");
  if (clients < 1) fail("clients must be >= 1");
  if (!(duration > 0) || !std::isfinite(duration)) fail("duration must be positive");
  if (!(anti_entropy_interval > 0)) fail("anti-entropy interval must be positive");
  if (exec_cost < 0) fail("execution cost must be nonnegative");
  if (strategy == Strategy::CoordinationFree && exec_cost == 0) {
    fail("coordination-free runs need a positive execution cost");
  }
  if (exec_cost == 0 && network.mean() == 0) fail("zero execution cost and zero delay never advance time");
  if (network.base_delay < 0) fail("base delay must be nonnegative");
  if (network.jitter.kind == LatencyDistribution::Kind::Empirical && network.jitter.samples.empty()) {
    throw Error(ErrorCode::EmptySamples, "empirical jitter has no samples");
  }
  for (const auto& p : network.partitions) {
    if (p.a >= replicas || p.b >= replicas) fail("partition names a replica outside the run");
    if (p.end < p.start) fail("partition interval ends before it starts");
  }
}

SimConfig inject_partition(SimConfig cfg, std::pair<ReplicaId, ReplicaId> pair, double start, double end) {
  start = std::clamp(start, 0.0, cfg.duration);
  end = std::clamp(end, start, cfg.duration);
  cfg.network.partitions.push_back(Partition{pair.first, pair.second, start, end});
  return cfg;
}

LatencySummary summarize(std::vector<double> samples) {
  LatencySummary s;
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  auto rank = [&](double q) {
    const auto n = samples.size();
    auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    return samples[std::min(n - 1, idx == 0 ? 0 : idx - 1)];
  };
  s.count = samples.size();
  double total = 0;
  for (double v : samples) total += v;
  s.mean = total / static_cast<double>(samples.size());
  s.p50 = rank(0.50);
  s.p90 = rank(0.90);
  s.p99 = rank(0.99);
  s.max = samples.back();
  return s;
}

WorkloadDriver::WorkloadDriver(Workload w) : workload_(std::move(w)) {
  if (workload_.transactions.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "workload '" + workload_.name + "' has no transactions");
  }
  initial_ = initial_state(workload_);
  invariant_ = workload_invariant(workload_);
  maintenance_ = workload_maintenance(workload_);
  ctx_.schema = workload_.schema.empty() ? nullptr : &workload_.schema;
  ctx_.maintenance = maintenance_;
}

Transaction WorkloadDriver::next(std::size_t, ReplicaId, bool, Rng& rng) {
  return bind(pick(workload_.transactions, rng), rng);
}

namespace {

std::optional<Value> static_operand(const Operand& o, const Args& args) {
  switch (o.kind) {
    case Operand::Kind::Literal: return o.literal;
    case Operand::Kind::Param: {
      auto it = args.find(o.name);
      if (it == args.end()) return std::nullopt;
      return it->second;
    }
    case Operand::Kind::Nonce: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<ItemId> static_item(const ItemRef& ref, const Args& args) {
  if (!ref.key) return ref.table;
  auto v = static_operand(*ref.key, args);
  if (!v) return std::nullopt;
  return record_item(ref.table, to_string(*v));
}

}  // namespace

std::vector<std::pair<ItemId, bool>> lock_footprint(const Transaction& t) {
  std::map<ItemId, bool> locks;
  auto want = [&](const std::optional<ItemId>& item, bool exclusive) {
    if (!item) return;
    auto [it, fresh] = locks.emplace(*item, exclusive);
    if (!fresh) it->second = it->second || exclusive;
  };
  for (const auto& operation : t.operations) {
    std::visit(
        [&](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, op::Read>) {
            want(static_item(o.item, t.args), false);
          } else if constexpr (std::is_same_v<T, op::Insert> || std::is_same_v<T, op::Delete> ||
                               std::is_same_v<T, op::Counter> || std::is_same_v<T, op::Collection>) {
            want(static_item(o.item, t.args), true);
          } else if constexpr (std::is_same_v<T, op::Update>) {
            auto item = static_item(o.item, t.args);
            want(item, true);
            if (item && !o.index_table.empty()) want(record_item(o.index_table, key_of(*item)), true);
          } else if constexpr (std::is_same_v<T, op::CascadeDelete>) {
            for (const auto& target : o.targets) want(target.substr(0, target.find('.')), true);
          } else if constexpr (std::is_same_v<T, op::AssignSequential>) {
            want(static_item(o.item, t.args), true);
            want(static_item(o.counter_item, t.args), true);
          }
        },
        operation);
  }
  return {locks.begin(), locks.end()};
}

namespace {

class EventLoop {
 public:
  void at(double t, std::function<void()> fn) {
    queue_.push(Event{std::max(t, now_), seq_++, std::move(fn)});
  }
  bool empty() const { return queue_.empty(); }
  double next_time() const { return queue_.top().time; }
  void step() {
    Event e = queue_.top();
    queue_.pop();
    now_ = e.time;
    e.fn();
  }
  double now() const { return now_; }

 private:
  struct Event {
    double time;
    std::uint64_t seq;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0;
};

// State common to both strategies.
class RunBase {
 public:
  RunBase(Driver& d, const SimConfig& cfg) : d_(d), cfg_(cfg) {
    cfg_.validate();
    net_rng_.seed(mix_seed(cfg.seed, 0x6e6574));
    for (std::size_t c = 0; c < cfg.clients; ++c) {
      client_rng_.emplace_back(mix_seed(mix_seed(cfg.seed, 0x636c69), c));
    }
    busy_.assign(cfg.replicas, 0.0);
    m_.strategy = cfg.strategy;
  }

 protected:
  bool partitioned(ReplicaId a, ReplicaId b, double t) const {
    return !healed_ && cfg_.network.partitioned(a, b, t);
  }
  double heal_time(ReplicaId a, ReplicaId b, double t) const {
    return healed_ ? t : cfg_.network.heal_time(a, b, t);
  }
  double delay() { return cfg_.network.sample(net_rng_); }

  // Runs fn on replica r's processor after any queued work.
  void on_cpu(ReplicaId r, double ready, std::function<void()> fn) {
    const double start = std::max(ready, busy_[r]);
    busy_[r] = start + cfg_.exec_cost;
    loop_.at(busy_[r], std::move(fn));
  }

  void audit(const DatabaseState& s, ReplicaId r) {
    ++m_.audits;
    auto verdict = is_valid(d_.audit_invariant(), s);
    if (!verdict.valid) {
      ++m_.violations;
      if (!m_.first_violation) {
        m_.first_violation =
            ViolationRecord{loop_.now(), r, verdict.witness.value_or(Witness{d_.audit_invariant().name(), {}, {}})};
      }
    }
  }
  bool audit_after_commit() const { return &d_.audit_invariant() != &d_.commit_invariant(); }

  void record_completion(double start, double end, bool committed) {
    if (committed) {
      ++m_.committed;
      latencies_.push_back(end - start);
      if (end <= cfg_.duration) ++m_.committed_in_window;
    } else {
      ++m_.aborted;
    }
  }

  void finalize_metrics() {
    m_.latency = summarize(std::move(latencies_));
    m_.throughput = static_cast<double>(m_.committed_in_window) / (cfg_.duration / 1000.0);
    m_.end_time = loop_.now();
  }

  void final_check(const DatabaseState& s) {
    auto verdict = is_valid(d_.final_invariant(), s);
    m_.final_valid = verdict.valid;
    m_.final_witness = verdict.witness;
    m_.final_state = s;
  }

  Driver& d_;
  SimConfig cfg_;
  EventLoop loop_;
  Rng net_rng_;
  std::vector<Rng> client_rng_;
  std::vector<double> busy_;
  std::vector<double> latencies_;
  std::size_t in_flight_ = 0;
  bool healed_ = false;
  Metrics m_;
};

class CoordinationFreeRun : public RunBase {
 public:
  using RunBase::RunBase;

  Metrics run() {
    replicas_.resize(cfg_.replicas);
    const DatabaseState d0 = d_.initial();
    for (std::size_t i = 0; i < cfg_.replicas; ++i) {
      replicas_[i].id = static_cast<ReplicaId>(i);
      replicas_[i].local = d0;
    }
    for (std::size_t c = 0; c < cfg_.clients; ++c) loop_.at(0, [this, c] { start(c); });
    schedule_round(cfg_.anti_entropy_interval);
    loop_.at(cfg_.duration, [this] { m_.converged_at_end = all_equal(); });

    while (!loop_.empty() && loop_.next_time() <= cfg_.duration) loop_.step();
    healed_ = true;
    bool ok = drain();
    auto batch = d_.finish(replicas_);
    for (auto& req : batch) {
      ++in_flight_;
      on_cpu(req.home, loop_.now(), [this, req = std::move(req)] {
        --in_flight_;
        run_site(req.home, req.txn);
      });
    }
    if (!batch.empty()) ok = drain() && ok;

    m_.replica_converged.assign(cfg_.replicas, false);
    for (std::size_t i = 0; i < cfg_.replicas; ++i) {
      m_.replica_converged[i] = replicas_[i].local == replicas_[0].local;
    }
    m_.converged = ok && all_equal();
    final_check(replicas_[0].local);
    finalize_metrics();
    return std::move(m_);
  }

 private:
  bool all_equal() const {
    for (std::size_t i = 1; i < replicas_.size(); ++i) {
      if (!(replicas_[i].local == replicas_[0].local)) return false;
    }
    return true;
  }

  void start(std::size_t c) {
    const double t0 = loop_.now();
    const ReplicaId r = d_.client_replica(c, cfg_.replicas);
    Transaction txn = d_.next(c, r, false, client_rng_[c]);
    ++m_.attempts;
    ++in_flight_;
    on_cpu(r, t0, [this, c, r, t0, txn = std::move(txn)] {
      auto [outcome, next] = apply_transaction(txn, std::move(replicas_[r]), d_.commit_invariant(), d_.context());
      replicas_[r] = std::move(next);
      if (outcome.committed() && audit_after_commit()) audit(replicas_[r].local, r);
      std::optional<SiteRequest> site;
      if (outcome.committed()) site = d_.site_step(txn, outcome, r, cfg_.replicas);
      if (!site) {
        complete(c, t0, outcome.committed());
        return;
      }
      double arrive = loop_.now();
      if (site->home != r) {
        ++m_.messages_sent;
        const double ready = heal_time(r, site->home, arrive);
        m_.stall_time += ready - arrive;
        arrive = ready + delay();
      }
      const ReplicaId h = site->home;
      on_cpu(h, arrive, [this, c, t0, h, txn = std::move(site->txn)] {
        run_site(h, txn);
        complete(c, t0, true);
      });
    });
  }

  void run_site(ReplicaId h, const Transaction& txn) {
    auto [outcome, next] = apply_transaction(txn, std::move(replicas_[h]), d_.commit_invariant(), d_.context());
    replicas_[h] = std::move(next);
    if (outcome.committed() && audit_after_commit()) audit(replicas_[h].local, h);
  }

  void complete(std::size_t c, double t0, bool committed) {
    --in_flight_;
    record_completion(t0, loop_.now(), committed);
    if (loop_.now() < cfg_.duration) start(c);
  }

  void schedule_round(double t) {
    loop_.at(t, [this] {
      exchange();
      if (loop_.now() + cfg_.anti_entropy_interval <= cfg_.duration) {
        schedule_round(loop_.now() + cfg_.anti_entropy_interval);
      }
    });
  }

  // Every replica sends its full state to every other replica.
  void exchange() {
    const double now = loop_.now();
    for (std::size_t i = 0; i < cfg_.replicas; ++i) {
      for (std::size_t j = 0; j < cfg_.replicas; ++j) {
        if (i == j) continue;
        const auto from = static_cast<ReplicaId>(i);
        const auto to = static_cast<ReplicaId>(j);
        ++m_.messages_sent;
        if (partitioned(from, to, now)) {
          ++m_.messages_dropped;
          continue;
        }
        ++in_flight_;
        loop_.at(now + delay(), [this, from, to, snapshot = replicas_[i].local] {
          --in_flight_;
          if (partitioned(from, to, loop_.now())) {
            ++m_.messages_dropped;
            return;
          }
          if (absorb(replicas_[to], snapshot, d_.context())) audit(replicas_[to].local, to);
        });
      }
    }
  }

  // Runs rounds with partitions healed until nothing is pending, every
  // replica holds the same versions and at least two rounds have run.
  bool drain() {
    for (std::size_t round = 0; round < cfg_.max_drain_rounds; ++round) {
      while (!loop_.empty()) loop_.step();
      if (round >= 2 && in_flight_ == 0 && all_equal()) return true;
      loop_.at(loop_.now() + cfg_.anti_entropy_interval, [this] { exchange(); });
    }
    while (!loop_.empty()) loop_.step();
    return in_flight_ == 0 && all_equal();
  }

  std::vector<ReplicaState> replicas_;
};

class CoordinatedRun : public RunBase {
 public:
  using RunBase::RunBase;

  Metrics run() {
    global_.id = 0;
    global_.local = d_.initial();
    for (std::size_t c = 0; c < cfg_.clients; ++c) loop_.at(0, [this, c] { start(c); });
    while (!loop_.empty()) loop_.step();

    std::vector<ReplicaState> view(cfg_.replicas, global_);
    for (std::size_t i = 0; i < cfg_.replicas; ++i) view[i].id = static_cast<ReplicaId>(i);
    for (const auto& req : d_.finish(view)) {
      auto [outcome, next] = apply_transaction(req.txn, std::move(global_), d_.commit_invariant(), d_.context());
      global_ = std::move(next);
      if (outcome.committed() && audit_after_commit()) audit(global_.local, req.home);
    }

    m_.converged_at_end = true;
    m_.converged = true;
    m_.replica_converged.assign(cfg_.replicas, true);
    m_.serializable = check_serializable();
    final_check(global_.local);
    finalize_metrics();
    return std::move(m_);
  }

 private:
  struct Attempt {
    std::size_t client = 0;
    ReplicaId replica = 0;
    double start = 0;
    Transaction txn;
    std::vector<std::pair<ItemId, bool>> locks;
    std::optional<std::uint64_t> commit_index;
  };

  struct Waiter {
    std::size_t attempt;
    bool exclusive;
    std::function<void()> granted;
  };

  struct LockState {
    std::size_t readers = 0;
    bool writer = false;
    std::deque<Waiter> queue;
  };

  struct Grant {
    std::size_t attempt;
    bool exclusive;
  };

  void start(std::size_t c) {
    Attempt a;
    a.client = c;
    a.replica = d_.client_replica(c, cfg_.replicas);
    a.start = loop_.now();
    a.txn = d_.next(c, a.replica, true, client_rng_[c]);
    a.locks = lock_footprint(a.txn);
    ++m_.attempts;
    attempts_.push_back(std::move(a));
    acquire(attempts_.size() - 1, 0);
  }

  void acquire(std::size_t id, std::size_t k) {
    Attempt& a = attempts_[id];
    if (k == a.locks.size()) {
      execute(id);
      return;
    }
    const auto& [item, exclusive] = a.locks[k];
    const ReplicaId h = d_.home(item, cfg_.replicas);
    const bool remote = h != a.replica;
    double at = loop_.now();
    if (remote) {
      ++m_.messages_sent;
      const double ready = heal_time(a.replica, h, at);
      m_.stall_time += ready - at;
      at = ready;
    }
    loop_.at(at, [this, id, k, item = item, exclusive = exclusive, remote] {
      request(item, Waiter{id, exclusive, [this, id, k, remote] {
                             const double arrive = loop_.now() + (remote ? delay() : 0.0);
                             loop_.at(arrive, [this, id, k] { acquire(id, k + 1); });
                           }});
    });
  }

  void request(const ItemId& item, Waiter w) {
    LockState& l = locks_[item];
    l.queue.push_back(std::move(w));
    grant(item, l);
  }

  // FIFO: the head of the queue is granted as soon as it is compatible.
  void grant(const ItemId& item, LockState& l) {
    while (!l.queue.empty()) {
      Waiter& w = l.queue.front();
      const bool ok = w.exclusive ? (!l.writer && l.readers == 0) : !l.writer;
      if (!ok) break;
      if (w.exclusive) {
        l.writer = true;
      } else {
        ++l.readers;
      }
      grants_[item].push_back(Grant{w.attempt, w.exclusive});
      auto fn = std::move(w.granted);
      l.queue.pop_front();
      fn();
    }
  }

  void release(std::size_t id) {
    for (const auto& [item, exclusive] : attempts_[id].locks) {
      LockState& l = locks_[item];
      if (exclusive) {
        l.writer = false;
      } else {
        --l.readers;
      }
      grant(item, l);
    }
  }

  void execute(std::size_t id) {
    const ReplicaId r = attempts_[id].replica;
    on_cpu(r, loop_.now(), [this, id] {
      Attempt& a = attempts_[id];
      auto [outcome, next] = apply_transaction(a.txn, std::move(global_), d_.commit_invariant(), d_.context());
      global_ = std::move(next);
      const bool committed = outcome.committed();
      if (committed) {
        a.commit_index = commits_++;
        if (audit_after_commit()) audit(global_.local, a.replica);
      }
      double done = loop_.now();
      if (committed && cfg_.strategy == Strategy::Coordinated2PCModel) {
        std::set<ReplicaId> participants;
        for (const auto& lock : a.locks) {
          const ReplicaId h = d_.home(lock.first, cfg_.replicas);
          if (h != a.replica) participants.insert(h);
        }
        double round = 0;
        for (ReplicaId p : participants) {
          m_.messages_sent += 2;
          round = std::max(round, delay() + delay());
          (void)p;
        }
        done += round;
      }
      loop_.at(done, [this, id, committed] {
        release(id);
        const Attempt& a = attempts_[id];
        record_completion(a.start, loop_.now(), committed);
        if (loop_.now() < cfg_.duration) start(a.client);
      });
    });
  }

  // Conflicting grants on each item must follow commit order.
  bool check_serializable() const {
    for (const auto& [item, grants] : grants_) {
      std::optional<std::uint64_t> max_any;
      std::optional<std::uint64_t> max_exclusive;
      for (const auto& g : grants) {
        const auto& idx = attempts_[g.attempt].commit_index;
        if (!idx) continue;
        const auto& bound = g.exclusive ? max_any : max_exclusive;
        if (bound && *idx < *bound) return false;
        max_any = std::max(max_any.value_or(0), *idx);
        if (g.exclusive) max_exclusive = std::max(max_exclusive.value_or(0), *idx);
      }
    }
    return true;
  }

  ReplicaState global_;
  std::deque<Attempt> attempts_;
  std::map<ItemId, LockState> locks_;
  std::map<ItemId, std::vector<Grant>> grants_;
  std::uint64_t commits_ = 0;
};

}  // namespace

Metrics run_coordination_free(Driver& d, const SimConfig& cfg) {
  SimConfig c = cfg;
  c.strategy = Strategy::CoordinationFree;
  return CoordinationFreeRun(d, c).run();
}

Metrics run_coordinated(Driver& d, const SimConfig& cfg) {
  SimConfig c = cfg;
  if (c.strategy == Strategy::CoordinationFree) c.strategy = Strategy::Coordinated2PL;
  return CoordinatedRun(d, c).run();
}

Metrics simulate(Driver& d, const SimConfig& cfg) {
  return cfg.strategy == Strategy::CoordinationFree ? run_coordination_free(d, cfg) : run_coordinated(d, cfg);
}

Metrics simulate(const Workload& w, const SimConfig& cfg) {
  WorkloadDriver d(w);
  return simulate(d, cfg);
}

}  // namespace iconf
