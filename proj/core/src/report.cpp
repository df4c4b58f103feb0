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

#include "iconf/report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

#ifndef ICONF_VERSION
#define ICONF_VERSION "0.0.0"
#endif

namespace iconf {

using Json = nlohmann::ordered_json;

std::string_view version() { return ICONF_VERSION; }

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.10g", v);
          return buf;
        } else {
          return std::to_string(v);
        }
      },
      c);
}

namespace {

Json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    // Round through the text form so both renderings agree digit for digit.
    return std::strtod(format_cell(*d).c_str(), nullptr);
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string verdict_cell(const Classification& c) {
  return c.verdict == Verdict::IConfluent ? "yes" : c.verdict == Verdict::NotIConfluent ? "no" : "unknown";
}

std::string proof_cell(const Classification& c) { return c.proof ? std::to_string(*c.proof) : ""; }

}  // namespace

std::string to_json(const Report& r) {
  Json root;
  root["command"] = r.command;
  root["version"] = std::string(version());
  root["seed"] = r.seed;
  Json config = Json::object();
  for (const auto& [k, v] : r.config) config[k] = cell_json(v);
  root["config"] = std::move(config);
  Json tables = Json::object();
  for (const auto& t : r.tables) {
    Json rows = Json::array();
    for (const auto& row : t.rows) {
      Json obj = Json::object();
      for (std::size_t k = 0; k < t.columns.size() && k < row.size(); ++k) obj[t.columns[k]] = cell_json(row[k]);
      rows.push_back(std::move(obj));
    }
    tables[t.name] = std::move(rows);
  }
  root["results"] = std::move(tables);
  if (!r.notes.empty()) root["notes"] = r.notes;
  root["exit_code"] = r.exit_code;
  return root.dump(2) + "\n";
}

std::string to_text(const Report& r) {
  std::ostringstream out;
  out << "iconf " << version() << "  " << r.command << "\n";
  out << "seed: " << r.seed << "\n";
  for (const auto& [k, v] : r.config) out << k << ": " << format_cell(v) << "\n";
  for (const auto& t : r.tables) {
    out << "\n[" << t.name << "]\n";
    std::vector<std::size_t> width(t.columns.size());
    std::vector<std::vector<std::string>> text;
    for (std::size_t k = 0; k < t.columns.size(); ++k) width[k] = t.columns[k].size();
    for (const auto& row : t.rows) {
      std::vector<std::string> cells;
      for (std::size_t k = 0; k < t.columns.size(); ++k) {
        cells.push_back(k < row.size() ? format_cell(row[k]) : "");
        width[k] = std::max(width[k], cells.back().size());
      }
      text.push_back(std::move(cells));
    }
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t k = 0; k < cells.size(); ++k) {
        out << cells[k];
        if (k + 1 < cells.size()) out << std::string(width[k] - cells[k].size() + 2, ' ');
      }
      out << "\n";
    };
    line(t.columns);
    std::vector<std::string> rule;
    for (auto w : width) rule.push_back(std::string(w, '-'));
    line(rule);
    for (const auto& cells : text) line(cells);
  }
  for (const auto& n : r.notes) out << "\n" << n << (n.empty() || n.back() != '\n' ? "\n" : "");
  return out.str();
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t k = 0; k < t.columns.size(); ++k) out += (k ? "," : "") + csv_field(t.columns[k]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + csv_field(format_cell(row[k]));
    out += "\n";
  }
  return out;
}

Table classification_table(const std::vector<TransactionReport>& reports) {
  Table t{"classification", {"transaction", "invariant", "op", "operation", "class", "confluent", "proof"}, {}};
  for (const auto& r : reports) {
    if (r.pairs.empty()) {
      t.add({r.transaction, std::string("-"), std::int64_t{-1}, std::string("-"), std::string("-"),
             std::string("yes"), std::string("")});
    }
    for (const auto& p : r.pairs) {
      t.add({r.transaction, p.invariant, static_cast<std::int64_t>(p.op_index), p.operation,
             std::string(to_string(p.op_class)), verdict_cell(p.classification), proof_cell(p.classification)});
    }
  }
  return t;
}

Table rule_table_report() {
  Table t{"rules", {"invariant", "operation", "confluent", "proof"}, {}};
  for (const auto& row : rule_table()) {
    std::string proofs;
    for (int p : row.proofs) proofs += (proofs.empty() ? "" : " ") + std::to_string(p);
    t.add({row.invariant, row.operation, verdict_cell(Classification{row.verdict, std::nullopt}), proofs});
  }
  return t;
}

Table verdict_table(const std::vector<std::pair<std::string, ConfluenceVerdict>>& verdicts) {
  Table t{"verdicts", {"scope", "outcome", "trials", "commits", "counterexample_trial", "violated"}, {}};
  for (const auto& [scope, v] : verdicts) {
    const bool found = v.found() && v.counterexample;
    t.add({scope, std::string(found ? "counterexample" : "none-found"), static_cast<std::int64_t>(v.trials),
           static_cast<std::int64_t>(v.commits),
           found ? static_cast<std::int64_t>(v.counterexample->trial) : std::int64_t{-1},
           found ? v.counterexample->witness.invariant : std::string("")});
  }
  return t;
}

Table metrics_table(const Metrics& m) {
  Table t{"metrics", {"metric", "value"}, {}};
  auto u = [](std::uint64_t v) { return Cell{static_cast<std::int64_t>(v)}; };
  t.add({std::string("strategy"), std::string(to_string(m.strategy))});
  t.add({std::string("attempts"), u(m.attempts)});
  t.add({std::string("committed"), u(m.committed)});
  t.add({std::string("aborted"), u(m.aborted)});
  t.add({std::string("committed_in_window"), u(m.committed_in_window)});
  t.add({std::string("throughput_per_s"), m.throughput});
  t.add({std::string("latency_mean_ms"), m.latency.mean});
  t.add({std::string("latency_p50_ms"), m.latency.p50});
  t.add({std::string("latency_p90_ms"), m.latency.p90});
  t.add({std::string("latency_p99_ms"), m.latency.p99});
  t.add({std::string("latency_max_ms"), m.latency.max});
  t.add({std::string("messages_sent"), u(m.messages_sent)});
  t.add({std::string("messages_dropped"), u(m.messages_dropped)});
  t.add({std::string("stall_time_ms"), m.stall_time});
  t.add({std::string("end_time_ms"), m.end_time});
  t.add({std::string("converged_at_end"), m.converged_at_end});
  t.add({std::string("converged"), m.converged});
  t.add({std::string("audits"), u(m.audits)});
  t.add({std::string("violations"), u(m.violations)});
  if (m.first_violation) {
    t.add({std::string("first_violation"),
           m.first_violation->witness.invariant + " at t=" + format_cell(m.first_violation->time) + " replica " +
               std::to_string(m.first_violation->replica)});
  }
  t.add({std::string("final_valid"), m.final_valid});
  if (m.final_witness) t.add({std::string("final_witness"), m.final_witness->invariant + ": " + m.final_witness->detail});
  t.add({std::string("serializable"), m.serializable});
  return t;
}

Table tpcc_table(const std::vector<tpcc::ClassifiedCondition>& rows, const std::vector<tpcc::ConditionAudit>& audit) {
  Table t{"tpcc_conditions", {"#", "condition", "type", "txns", "confluent"}, {}};
  if (!audit.empty()) t.columns.push_back("holds");
  for (const auto& r : rows) {
    std::vector<Cell> row{std::int64_t{r.number}, r.description, r.type, r.txns,
                          verdict_cell(Classification{r.verdict, std::nullopt})};
    if (!audit.empty()) {
      auto it = std::find_if(audit.begin(), audit.end(), [&](const auto& a) { return a.number == r.number; });
      row.emplace_back(it != audit.end() && it->holds);
    }
    t.add(std::move(row));
  }
  return t;
}

}  // namespace iconf
