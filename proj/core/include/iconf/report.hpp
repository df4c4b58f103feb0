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

// Reports shared by every command: a config echo and a list of tables,
// rendered as JSON, plain text or CSV from the same cells.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "iconf/classify.hpp"
#include "iconf/history.hpp"
#include "iconf/simulator.hpp"
#include "iconf/tpcc.hpp"

namespace iconf {

std::string_view version();

using Cell = std::variant<std::string, std::int64_t, double, bool>;

// Text form used by every rendering; doubles keep 10 significant digits.
std::string format_cell(const Cell& c);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, Cell>> config;
  std::vector<Table> tables;
  std::vector<std::string> notes;  // free text such as counterexample narratives
  int exit_code = 0;
};

std::string to_json(const Report& r);
std::string to_text(const Report& r);
std::string to_csv(const Table& t);

Table classification_table(const std::vector<TransactionReport>& reports);
Table rule_table_report();
// One row per checked scope (usually one per invariant).
Table verdict_table(const std::vector<std::pair<std::string, ConfluenceVerdict>>& verdicts);
Table metrics_table(const Metrics& m);
// The TPC-C consistency conditions with classifier verdicts and, when audit
// is nonempty, whether each holds on the converged state.
Table tpcc_table(const std::vector<tpcc::ClassifiedCondition>& rows,
                 const std::vector<tpcc::ConditionAudit>& audit = {});

}  // namespace iconf
