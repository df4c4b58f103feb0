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

// Small workloads exercising each row of the rule table, and a generator of
// random workloads drawn from the rows that are invariant confluent.

#include <cstdint>
#include <vector>

#include "iconf/classify.hpp"
#include "iconf/workload.hpp"

namespace iconf {

struct RowWorkload {
  std::size_t row = 0;  // index into rule_table()
  Verdict expected = Verdict::Unknown;
  Workload workload;
};

// One workload per rule_table() row, in the same order.
std::vector<RowWorkload> row_workloads();

// A randomly parameterized workload from one of the confluent rows.
Workload random_confluent_workload(std::uint64_t seed);

}  // namespace iconf
