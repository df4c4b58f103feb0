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

#include "iconf/history.hpp"

#include <functional>
#include <queue>
#include <sstream>

namespace iconf {

namespace {

constexpr ReplicaId kDiamondReplica = 0xFFFFFFF0u;

struct Env {
  const Workload& w;
  Invariant inv;
  ExecutionContext ctx;

  explicit Env(const Workload& wl)
      : w(wl), inv(workload_invariant(wl)), ctx{&wl.schema, workload_maintenance(wl)} {}
};

class Generator {
 public:
  Generator(const Env& env, std::uint64_t seed, const GeneratorOptions& opts)
      : env_(env), rng_(seed), opts_(opts) {}

  DatabaseState prefix(DatabaseState d0, std::vector<Transaction>& out) {
    if (env_.w.transactions.empty()) return d0;
    std::bernoulli_distribution more(opts_.prefix_continue);
    for (int k = 0; k < opts_.max_prefix && more(rng_); ++k) {
      Transaction t = bind(pick(env_.w.transactions, rng_), rng_);
      ReplicaState r{next_replica_++, d0, 0};
      auto [outcome, after] = apply_transaction(t, std::move(r), env_.inv, env_.ctx);
      if (!outcome.committed()) continue;
      ++commits_;
      d0 = std::move(after.local);
      out.push_back(std::move(t));
    }
    return d0;
  }

  History branch(const DatabaseState& ancestor, int depth, std::uint64_t seed) {
    History h;
    h.ancestor = ancestor;
    h.seed = seed;
    if (env_.w.transactions.empty()) return h;

    struct Sub {
      std::size_t node;
      DatabaseState state;
    };
    std::vector<Sub> subs{{kAncestor, ancestor}};
    std::uniform_int_distribution<int> length(1, std::max(1, depth));
    const int target = length(rng_);
    const int budget = opts_.attempts_per_transaction * std::max(1, depth) + 8;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int txns = 0;

    for (int attempt = 0; attempt < budget && txns < target; ++attempt) {
      const double u = u01(rng_);
      if (subs.size() < 3 && u < opts_.fork_probability) {
        subs.push_back(subs[index(subs.size())]);
        continue;
      }
      if (subs.size() >= 2 && u < opts_.fork_probability + opts_.merge_probability) {
        const std::size_t i = index(subs.size());
        std::size_t j = index(subs.size() - 1);
        if (j >= i) ++j;
        if (subs[i].node == subs[j].node) {
          subs.erase(subs.begin() + static_cast<std::ptrdiff_t>(j));
          continue;
        }
        if (auto node = merge_node(h, subs[i], subs[j])) {
          subs[i] = Sub{*node, h.nodes[*node].state};
          subs.erase(subs.begin() + static_cast<std::ptrdiff_t>(j));
        }
        continue;
      }
      Sub& sub = subs[index(subs.size())];
      Transaction t = bind(pick(env_.w.transactions, rng_), rng_);
      const ReplicaId id = next_replica_++;
      auto [outcome, after] = apply_transaction(t, ReplicaState{id, sub.state, 0}, env_.inv, env_.ctx);
      if (!outcome.committed()) continue;
      ++commits_;
      ++txns;
      HistoryNode n;
      n.kind = HistoryNode::Kind::Txn;
      n.inputs = {sub.node};
      n.txn = std::move(t);
      n.replica = id;
      n.state = std::move(after.local);
      h.nodes.push_back(std::move(n));
      sub = Sub{h.nodes.size() - 1, h.nodes.back().state};
    }

    // Fold the sub-branches into one tip; a sub-branch whose merge is
    // invalid is abandoned.
    Sub tip = subs.front();
    for (std::size_t k = 1; k < subs.size(); ++k) {
      if (subs[k].node == tip.node) continue;
      if (auto node = merge_node(h, tip, subs[k])) tip = Sub{*node, h.nodes[*node].state};
    }
    h.tip = tip.node;
    return h;
  }

  std::size_t commits() const { return commits_; }

 private:
  std::size_t index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> d(0, n - 1);
    return d(rng_);
  }

  template <typename Sub>
  std::optional<std::size_t> merge_node(History& h, const Sub& a, const Sub& b) {
    const ReplicaId id = next_replica_++;
    DatabaseState merged = merge_states(a.state, b.state, id, env_.ctx);
    if (!is_valid(env_.inv, merged).valid) return std::nullopt;
    HistoryNode n;
    n.kind = HistoryNode::Kind::Merge;
    n.inputs = {a.node, b.node};
    n.replica = id;
    n.state = std::move(merged);
    h.nodes.push_back(std::move(n));
    return h.nodes.size() - 1;
  }

  const Env& env_;
  Rng rng_;
  GeneratorOptions opts_;
  ReplicaId next_replica_ = 1;
  std::size_t commits_ = 0;
};

const DatabaseState& input_state(const History& h, const std::vector<DatabaseState>& done,
                                 std::size_t input) {
  return input == kAncestor ? h.ancestor : done[input];
}

}  // namespace

std::size_t History::transactions() const {
  std::size_t n = 0;
  for (const auto& node : nodes) n += node.kind == HistoryNode::Kind::Txn ? 1 : 0;
  return n;
}

DatabaseState merge_states(const DatabaseState& a, const DatabaseState& b, ReplicaId replica,
                           const ExecutionContext& ctx) {
  ReplicaState r{replica, a, 0};
  absorb(r, b, ctx);
  return std::move(r.local);
}

DivergentPair generate_divergent_pair(const Workload& w, int depth, std::uint64_t seed,
                                      const GeneratorOptions& opts) {
  if (depth < 1) throw Error(ErrorCode::ConfigInvalid, "depth must be at least 1");
  Env env(w);
  Generator g(env, seed, opts);
  DivergentPair out;
  out.ancestor = g.prefix(initial_state(w), out.prefix);
  out.h1 = g.branch(out.ancestor, depth, seed);
  out.h2 = g.branch(out.ancestor, depth, seed);
  if (!w.transactions.empty() && g.commits() == 0) {
    throw Error(ErrorCode::GenerationExhausted,
                "no transaction committed from the initial state within the retry budget");
  }
  return out;
}

DatabaseState replay(const History& h, const Workload& w) {
  Env env(w);
  const std::size_t n = h.nodes.size();
  std::vector<std::vector<std::size_t>> successors(n);
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t in : h.nodes[k].inputs) {
      if (in == kAncestor) continue;
      if (in >= n) throw Error(ErrorCode::ReplayInvalid, "node input out of range");
      successors[in].push_back(k);
      ++pending[k];
    }
  }
  if (!is_valid(env.inv, h.ancestor).valid) {
    throw Error(ErrorCode::ReplayInvalid, "ancestor state is not valid");
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t k = 0; k < n; ++k) {
    if (pending[k] == 0) ready.push(k);
  }
  std::vector<DatabaseState> done(n);
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::size_t k = ready.top();
    ready.pop();
    ++visited;
    const auto& node = h.nodes[k];
    if (node.kind == HistoryNode::Kind::Txn) {
      if (node.inputs.size() != 1) throw Error(ErrorCode::ReplayInvalid, "transaction node needs one input");
      ReplicaState r{node.replica, input_state(h, done, node.inputs[0]), 0};
      auto [outcome, after] = apply_transaction(node.txn, std::move(r), env.inv, env.ctx);
      if (!outcome.committed()) {
        throw Error(ErrorCode::ReplayInvalid,
                    "transaction '" + node.txn.name + "' aborted during replay");
      }
      done[k] = std::move(after.local);
    } else {
      if (node.inputs.empty()) throw Error(ErrorCode::ReplayInvalid, "merge node without inputs");
      DatabaseState acc = input_state(h, done, node.inputs[0]);
      for (std::size_t i = 1; i < node.inputs.size(); ++i) {
        acc = merge_states(acc, input_state(h, done, node.inputs[i]), node.replica, env.ctx);
      }
      done[k] = std::move(acc);
      auto v = is_valid(env.inv, done[k]);
      if (!v.valid) {
        throw Error(ErrorCode::ReplayInvalid,
                    "merge produced an invalid state: " + (v.witness ? v.witness->detail : ""));
      }
    }
    for (std::size_t s : successors[k]) {
      if (--pending[s] == 0) ready.push(s);
    }
  }
  if (visited != n) throw Error(ErrorCode::ReplayInvalid, "history contains a cycle");
  return h.tip == kAncestor ? h.ancestor : done[h.tip];
}

ConfluenceVerdict check_dynamic(const Workload& w, std::size_t trials, int depth, std::uint64_t seed,
                                const GeneratorOptions& opts) {
  if (trials < 1) throw Error(ErrorCode::ConfigInvalid, "trials must be at least 1");
  Env env(w);
  ConfluenceVerdict out;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = mix_seed(seed, t);
    DivergentPair pair = generate_divergent_pair(w, depth, trial_seed, opts);
    out.trials = t + 1;
    out.commits += pair.prefix.size() + pair.h1.transactions() + pair.h2.transactions();
    DatabaseState merged =
        merge_states(pair.h1.end_state(), pair.h2.end_state(), kDiamondReplica, env.ctx);
    auto verdict = is_valid(env.inv, merged);
    if (verdict.valid) continue;
    Counterexample c;
    c.trial = t;
    c.seed = trial_seed;
    c.ancestor = std::move(pair.ancestor);
    c.prefix = std::move(pair.prefix);
    c.h1 = std::move(pair.h1);
    c.h2 = std::move(pair.h2);
    c.merged = std::move(merged);
    c.witness = std::move(*verdict.witness);
    out.outcome = ConfluenceVerdict::Outcome::CounterexampleFound;
    out.counterexample = std::move(c);
    return out;
  }
  return out;
}

bool validate_counterexample(const Counterexample& c, const Workload& w) {
  Env env(w);
  if (!is_valid(env.inv, c.ancestor).valid) return false;
  if (!is_valid(env.inv, c.h1.end_state()).valid) return false;
  if (!is_valid(env.inv, c.h2.end_state()).valid) return false;
  if (!(c.h1.ancestor == c.ancestor) || !(c.h2.ancestor == c.ancestor)) return false;
  const DatabaseState merged =
      merge_states(c.h1.end_state(), c.h2.end_state(), kDiamondReplica, env.ctx);
  if (!(merged == c.merged)) return false;
  return !is_valid(env.inv, merged).valid;
}

std::string render_state(const LogicalView& view) {
  std::vector<std::string> parts;
  for (const auto& [item, rv] : view.records()) {
    std::string s = item + "{";
    bool first = true;
    for (const auto& [f, v] : rv.fields()) {
      if (!first) s += ", ";
      first = false;
      s += f + "=" + to_string(v);
    }
    parts.push_back(s + "}");
  }
  for (const auto& item : view.deleted()) parts.push_back("-" + item);
  for (const auto& [item, v] : view.counters()) {
    if (item.find('#') == std::string::npos) parts.push_back(item + "=" + std::to_string(v));
  }
  for (const auto& [item, c] : view.collections()) {
    std::string s = item + "={";
    bool first = true;
    for (const auto& v : c.ordered()) {
      if (!first) s += ", ";
      first = false;
      s += to_string(v);
    }
    parts.push_back(s + "}");
  }
  for (const auto& [target, v] : view.cascade_markers()) {
    parts.push_back("cascade(" + target + "=" + to_string(v) + ")");
  }
  std::string out = "{";
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k > 0) out += ", ";
    out += parts[k];
  }
  return out + "}";
}

std::string render_state(const DatabaseState& s) { return render_state(visible_state(s)); }

std::string render_args(const Args& args) {
  std::string out;
  for (const auto& [k, v] : args) {
    if (!out.empty()) out += ", ";
    out += k + "=" + to_string(v);
  }
  return out;
}

namespace {

void render_branch(std::ostringstream& os, const char* label, const History& h) {
  os << label << ":\n";
  if (h.nodes.empty()) os << "  (no steps)\n";
  for (std::size_t k = 0; k < h.nodes.size(); ++k) {
    const auto& n = h.nodes[k];
    auto in = [](std::size_t i) { return i == kAncestor ? std::string("ancestor") : "#" + std::to_string(i); };
    os << "  #" << k << " ";
    if (n.kind == HistoryNode::Kind::Txn) {
      os << n.txn.name << "(" << render_args(n.txn.args) << ") on r" << n.replica << " from "
         << in(n.inputs.front());
    } else {
      os << "merge " << in(n.inputs[0]) << " + " << in(n.inputs[1]) << " on r" << n.replica;
    }
    os << " -> " << render_state(n.state) << "\n";
  }
  os << "  end state (valid): " << render_state(h.end_state()) << "\n";
}

}  // namespace

std::string narrative(const Counterexample& c) {
  std::ostringstream os;
  os << "trial " << c.trial << " (seed " << c.seed << ")\n";
  os << "ancestor (valid): " << render_state(c.ancestor) << "\n";
  for (const auto& t : c.prefix) os << "  reached via " << t.name << "(" << render_args(t.args) << ")\n";
  render_branch(os, "branch 1", c.h1);
  render_branch(os, "branch 2", c.h2);
  os << "merge of branch end states: " << render_state(c.merged) << "\n";
  os << "violation: " << c.witness.invariant << ": " << c.witness.detail << "\n";
  return os.str();
}

}  // namespace iconf
