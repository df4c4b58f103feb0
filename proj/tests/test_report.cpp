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

#include "iconf/report.hpp"

namespace iconf {
namespace {

TEST(Report, JsonAndTextCarryTheSameNumbers) {
  Metrics m;
  m.throughput = 1234.56789012345;
  m.latency.mean = 2.0 / 3.0;
  m.committed = 42;
  Report r;
  r.command = "iconf tpcc";
  r.seed = 77;
  r.tables.push_back(metrics_table(m));
  const auto json = to_json(r);
  const auto text = to_text(r);
  for (const auto* needle : {"1234.56789", "0.6666666667", "42", "77"}) {
    EXPECT_NE(json.find(needle), std::string::npos) << needle;
    EXPECT_NE(text.find(needle), std::string::npos) << needle;
  }
  EXPECT_NE(json.find(std::string("\"version\": \"") + std::string(version()) + "\""), std::string::npos);
  EXPECT_NE(text.find(std::string(version())), std::string::npos);
}

TEST(Report, CsvQuotes) {
  Table t{"t", {"a", "b"}, {}};
  t.add({std::string("x,y"), std::int64_t{3}});
  t.add({std::string("say \"hi\""), 0.5});
  EXPECT_EQ(to_csv(t), "a,b\n\"x,y\",3\n\"say \"\"hi\"\"\",0.5\n");
}

TEST(Report, Cells) {
  EXPECT_EQ(format_cell(Cell{true}), "true");
  EXPECT_EQ(format_cell(Cell{std::int64_t{-3}}), "-3");
  EXPECT_EQ(format_cell(Cell{12.0}), "12");
  EXPECT_EQ(format_cell(Cell{std::string("s")}), "s");
}

TEST(Report, RuleTableHasEveryRow) { EXPECT_EQ(rule_table_report().rows.size(), rule_table().size()); }

}  // namespace
}  // namespace iconf
