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

// iconf: static analysis, dynamic confluence checks and simulation of
// replicated workloads. Exit status 0 = clean, 1 = coordination required or
// counterexample found, 2 = error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iconf/classify.hpp"
#include "iconf/history.hpp"
#include "iconf/network.hpp"
#include "iconf/report.hpp"
#include "iconf/simulator.hpp"
#include "iconf/tpcc.hpp"
#include "iconf/workload_io.hpp"

namespace {

using namespace iconf;

struct Output {
  std::string format = "text";
  std::string report_path;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ICONF_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    auto v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0') return v;
    throw Error(ErrorCode::ConfigInvalid, std::string("ICONF_SEED is not an unsigned integer: ") + env);
  }
  return 1;
}

std::string render(const Report& r, const std::string& format) {
  if (format == "json") return to_json(r);
  if (format == "csv") {
    std::string out;
    for (const auto& t : r.tables) out += (out.empty() ? "" : "\n") + to_csv(t);
    return out;
  }
  return to_text(r);
}

std::string format_for(const std::string& path, const std::string& fallback) {
  auto ends = [&](const char* ext) {
    const std::string e(ext);
    return path.size() >= e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0;
  };
  if (ends(".json")) return "json";
  if (ends(".csv")) return "csv";
  if (ends(".txt")) return "text";
  return fallback;
}

int emit(const Report& r, const Output& out) {
  std::cout << render(r, out.format);
  if (!out.report_path.empty()) {
    std::ofstream f(out.report_path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot write report '" + out.report_path + "'");
    f << render(r, format_for(out.report_path, out.format));
  }
  return r.exit_code;
}

std::string echo(int argc, char** argv) {
  std::string s;
  for (int k = 0; k < argc; ++k) s += (k ? " " : "") + std::string(argv[k]);
  return s;
}

// "constant:ms", "uniform:lo:hi", "lognormal:mu:sigma" or "file:path".
LatencyDistribution parse_jitter(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  auto num = [&](std::size_t k) {
    if (k >= parts.size()) throw Error(ErrorCode::ConfigInvalid, "jitter '" + text + "' is missing a number");
    try {
      return std::stod(parts[k]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigInvalid, "jitter '" + text + "' has a bad number");
    }
  };
  if (parts.empty()) throw Error(ErrorCode::ConfigInvalid, "empty jitter");
  if (parts[0] == "constant") return LatencyDistribution::constant(num(1));
  if (parts[0] == "uniform") return LatencyDistribution::uniform(num(1), num(2));
  if (parts[0] == "lognormal") return LatencyDistribution::lognormal(num(1), num(2));
  if (parts[0] == "file") return LatencyDistribution::empirical(load_samples(text.substr(5)));
  throw Error(ErrorCode::ConfigInvalid, "unknown jitter kind '" + parts[0] + "'");
}

// "a-b@start:end" in replica ids and milliseconds.
Partition parse_partition(const std::string& text) {
  Partition p;
  unsigned long a = 0;
  unsigned long b = 0;
  char dash = 0;
  char at = 0;
  char colon = 0;
  std::istringstream in(text);
  if (!(in >> a >> dash >> b >> at >> p.start >> colon >> p.end) || dash != '-' || at != '@' || colon != ':') {
    throw Error(ErrorCode::ConfigInvalid, "partition '" + text + "' is not a-b@start:end");
  }
  p.a = a;
  p.b = b;
  return p;
}

Strategy parse_strategy(const std::string& s) {
  auto st = strategy_from_string(s);
  if (!st) throw Error(ErrorCode::ConfigInvalid, "unknown strategy '" + s + "'");
  return *st;
}

struct NetFlags {
  double delay = 20;
  std::string jitter = "uniform:0:5";
  std::vector<std::string> partitions;

  void add(CLI::App* app) {
    app->add_option("--delay", delay, "Base one-way delay in ms")->capture_default_str();
    app->add_option("--jitter", jitter, "constant:ms | uniform:lo:hi | lognormal:mu:sigma | file:path")
        ->capture_default_str();
    app->add_option("--partition", partitions, "Partition a-b@start:end (repeatable)");
  }
  void apply(SimConfig& cfg) const {
    cfg.network.base_delay = delay;
    cfg.network.jitter = parse_jitter(jitter);
    for (const auto& p : partitions) {
      auto part = parse_partition(p);
      cfg = inject_partition(cfg, {part.a, part.b}, part.start, part.end);
    }
  }
  void echo(Report& r) const {
    r.config.emplace_back("delay_ms", delay);
    r.config.emplace_back("jitter", jitter);
    for (const auto& p : partitions) r.config.emplace_back("partition", p);
  }
};

void echo_sim(Report& r, const SimConfig& cfg) {
  r.config.emplace_back("strategy", std::string(to_string(cfg.strategy)));
  r.config.emplace_back("replicas", static_cast<std::int64_t>(cfg.replicas));
  r.config.emplace_back("clients", static_cast<std::int64_t>(cfg.clients));
  r.config.emplace_back("duration_ms", cfg.duration);
  r.config.emplace_back("exec_cost_ms", cfg.exec_cost);
  r.config.emplace_back("anti_entropy_ms", cfg.anti_entropy_interval);
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const long lo = std::stol(text.substr(0, dots));
    const long hi = std::stol(text.substr(dots + 2));
    for (long v = lo; v <= hi; ++v) out.push_back(static_cast<double>(v));
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(std::stod(p));
  }
  if (out.empty()) throw Error(ErrorCode::ConfigInvalid, "sweep has no values");
  return out;
}

struct TpccFlags {
  int warehouses = 0;
  int servers = 2;
  int clients = 0;
  double distributed = 0.1;
  std::string strategy = "coordination-free";
  double duration = 0;
  double exec_cost = 0;

  void add(CLI::App* app) {
    app->add_option("--warehouses", warehouses, "Warehouses (default: one per server)");
    app->add_option("--servers", servers, "Simulated servers")->capture_default_str();
    app->add_option("--clients", clients, "Closed-loop clients (default: four per server)");
    app->add_option("--distributed-fraction", distributed, "Fraction of distributed transactions")
        ->capture_default_str();
    app->add_option("--strategy", strategy, "coordination-free | coordinated-2pl | coordinated-2pc-model")
        ->capture_default_str();
    app->add_option("--duration", duration, "Simulated ms (default 100)");
    app->add_option("--exec-cost", exec_cost, "CPU ms per transaction (default 1)");
  }

  tpcc::Config config(std::uint64_t seed) const {
    if (servers < 1) throw Error(ErrorCode::ConfigInvalid, "servers must be at least 1");
    auto cfg = tpcc::default_config(servers);
    if (warehouses > 0) cfg.scale.warehouses = warehouses;
    if (clients > 0) cfg.sim.clients = static_cast<std::size_t>(clients);
    if (duration > 0) cfg.sim.duration = duration;
    if (exec_cost > 0) cfg.sim.exec_cost = exec_cost;
    cfg.distributed_fraction = distributed;
    cfg.sim.strategy = parse_strategy(strategy);
    cfg.sim.seed = seed;
    return cfg;
  }
};

void echo_tpcc(Report& r, const tpcc::Config& cfg) {
  r.config.emplace_back("warehouses", std::int64_t{cfg.scale.warehouses});
  r.config.emplace_back("distributed_fraction", cfg.distributed_fraction);
  r.config.emplace_back("payment_fraction", cfg.payment_fraction);
  echo_sim(r, cfg.sim);
}

int cmd_analyze(const std::string& path, Report& r) {
  const Workload w = load_spec(path);
  r.config.emplace_back("spec", path);
  r.config.emplace_back("workload", w.name);
  std::vector<TransactionReport> reports;
  bool clean = true;
  for (const auto& t : w.transactions) {
    reports.push_back(classify_transaction(t.txn, w.invariants));
    clean = clean && reports.back().coordination_free();
  }
  r.tables.push_back(classification_table(reports));
  Table summary{"transactions", {"transaction", "coordination"}, {}};
  for (const auto& rep : reports) {
    summary.add({rep.transaction, std::string(rep.coordination_free() ? "not required" : "required")});
  }
  r.tables.push_back(std::move(summary));
  for (const auto& warning : validate_spec(w)) r.notes.push_back("warning: " + warning);
  return clean ? 0 : 1;
}

int cmd_check(const std::string& path, std::size_t trials, int depth, Report& r) {
  const Workload w = load_spec(path);
  r.config.emplace_back("spec", path);
  r.config.emplace_back("workload", w.name);
  r.config.emplace_back("trials", static_cast<std::int64_t>(trials));
  r.config.emplace_back("depth", std::int64_t{depth});
  std::vector<std::pair<std::string, ConfluenceVerdict>> verdicts;
  bool found = false;
  for (std::size_t k = 0; k < w.invariants.size(); ++k) {
    Workload scoped = w;
    scoped.invariants = {w.invariants[k]};
    auto v = check_dynamic(scoped, trials, depth, mix_seed(r.seed, k));
    if (v.found() && v.counterexample) {
      found = true;
      r.notes.push_back(narrative(*v.counterexample));
    }
    verdicts.emplace_back(w.invariants[k].label(), std::move(v));
  }
  r.tables.push_back(verdict_table(verdicts));
  return found ? 1 : 0;
}

int cmd_simulate(const std::string& path, SimConfig cfg, const NetFlags& net, Report& r) {
  const Workload w = load_spec(path);
  net.apply(cfg);
  r.config.emplace_back("spec", path);
  r.config.emplace_back("workload", w.name);
  echo_sim(r, cfg);
  net.echo(r);
  const Metrics m = simulate(w, cfg);
  r.tables.push_back(metrics_table(m));
  if (m.first_violation) r.notes.push_back("first violation: " + m.first_violation->witness.detail);
  return m.violations > 0 || !m.final_valid ? 1 : 0;
}

int cmd_tpcc(const TpccFlags& flags, Report& r) {
  const auto cfg = flags.config(r.seed);
  echo_tpcc(r, cfg);
  const auto result = tpcc::run_tpcc(cfg);
  r.tables.push_back(metrics_table(result.metrics));
  r.tables.push_back(tpcc_table(tpcc::classify_tpcc(), result.audit));
  Table ids{"order_ids", {"orders", "gap_free", "detail"}, {}};
  ids.add({static_cast<std::int64_t>(result.orders), result.gap_free, result.gap_detail});
  r.tables.push_back(std::move(ids));
  return result.all_hold() && result.gap_free ? 0 : 1;
}

int cmd_sweep(const TpccFlags& base, const std::string& param, const std::string& values, Report& r) {
  r.config.emplace_back("param", param);
  r.config.emplace_back("values", values);
  Table t{"sweep",
          {param, "strategy", "throughput_per_s", "committed_in_window", "latency_mean_ms", "latency_p99_ms",
           "messages", "violations", "invariants_hold", "gap_free"},
          {}};
  bool clean = true;
  for (double v : parse_values(values)) {
    TpccFlags flags = base;
    if (param == "servers") {
      flags.servers = static_cast<int>(v);
    } else if (param == "distributed-fraction") {
      flags.distributed = v > 1 ? v / 100 : v;
    } else if (param == "clients") {
      flags.clients = static_cast<int>(v);
    } else {
      throw Error(ErrorCode::ConfigInvalid, "cannot sweep '" + param + "'");
    }
    const auto result = tpcc::run_tpcc(flags.config(r.seed));
    const auto& m = result.metrics;
    clean = clean && result.all_hold() && result.gap_free;
    t.add({v, std::string(to_string(m.strategy)), m.throughput, static_cast<std::int64_t>(m.committed_in_window),
           m.latency.mean, m.latency.p99, static_cast<std::int64_t>(m.messages_sent),
           static_cast<std::int64_t>(m.violations), result.all_hold(), result.gap_free});
  }
  r.tables.push_back(std::move(t));
  return clean ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant confluence analysis and simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(iconf::version()));

  Output out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  app.add_option("--format", out.format, "text | json | csv")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--report", out.report_path, "Also write the report to this path");
  app.add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t s) { seed = s, seed_given = true; }, "Seed (default: $ICONF_SEED or 1)");

  std::string spec;
  auto* analyze = app.add_subcommand("analyze", "Classify every transaction against every invariant");
  analyze->add_option("spec", spec, "Workload spec file")->required();

  std::size_t trials = 1000;
  int depth = 2;
  auto* check = app.add_subcommand("check", "Search for diamond counterexamples per invariant");
  check->add_option("spec", spec, "Workload spec file")->required();
  check->add_option("--trials", trials, "Trials per invariant")->capture_default_str();
  check->add_option("--depth", depth, "Transactions per branch")->capture_default_str();

  SimConfig sim;
  NetFlags net;
  std::string strategy = "coordination-free";
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a workload spec on replicas");
  simulate_cmd->add_option("spec", spec, "Workload spec file")->required();
  simulate_cmd->add_option("--replicas", sim.replicas, "Replicas")->capture_default_str();
  simulate_cmd->add_option("--clients", sim.clients, "Closed-loop clients")->capture_default_str();
  simulate_cmd->add_option("--duration", sim.duration, "Simulated ms")->capture_default_str();
  simulate_cmd->add_option("--strategy", strategy, "coordination-free | coordinated-2pl | coordinated-2pc-model")
      ->capture_default_str();
  simulate_cmd->add_option("--anti-entropy", sim.anti_entropy_interval, "Anti-entropy interval in ms")
      ->capture_default_str();
  simulate_cmd->add_option("--exec-cost", sim.exec_cost, "CPU ms per transaction")->capture_default_str();
  net.add(simulate_cmd);

  TpccFlags tflags;
  auto* tpcc_cmd = app.add_subcommand("tpcc", "Simulate TPC-C New-Order and Payment and audit all conditions");
  tflags.add(tpcc_cmd);

  TpccFlags sflags;
  std::string param = "servers";
  std::string values = "1..8";
  auto* sweep = app.add_subcommand("sweep", "TPC-C throughput, one row per configuration");
  sflags.add(sweep);
  sweep->add_option("--param", param, "servers | distributed-fraction | clients")->capture_default_str();
  sweep->add_option("--values", values, "lo..hi or a comma list")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Report r;
    r.command = echo(argc, argv);
    r.seed = seed_given ? seed : default_seed();
    if (*analyze) {
      r.exit_code = cmd_analyze(spec, r);
    } else if (*check) {
      r.exit_code = cmd_check(spec, trials, depth, r);
    } else if (*simulate_cmd) {
      sim.strategy = parse_strategy(strategy);
      sim.seed = r.seed;
      r.exit_code = cmd_simulate(spec, sim, net, r);
    } else if (*tpcc_cmd) {
      r.exit_code = cmd_tpcc(tflags, r);
    } else if (*sweep) {
      if (app.get_option("--format")->count() == 0) out.format = "csv";
      r.exit_code = cmd_sweep(sflags, param, values, r);
    }
    return emit(r, out);
  } catch (const iconf::Error& e) {
    std::cerr << "iconf: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "iconf: " << e.what() << "\n";
    return 2;
  }
}
