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

// Monte-Carlo bound on throughput imposed by atomic commitment latency.

#include <cstdint>
#include <string_view>
#include <vector>

namespace iconf {

enum class CommitProtocol {
  Centralized,    // coordinator to N servers: N parallel round trips
  Decentralized,  // N parallel broadcasts: N^2 one-way messages
};

std::string_view to_string(CommitProtocol p);

struct CommitModelResult {
  double throughput = 0;    // commits per second, one commit in flight
  double mean_latency = 0;  // milliseconds
};

// rtt_samples are round-trip times in milliseconds; a one-way message takes
// half a sampled round trip. Each round draws its samples from its own
// stream, so the draws for N servers are a prefix of the draws for N + 1 and
// throughput is non-increasing in N for any sample set. Throws EmptySamples
// and ConfigInvalid (servers < 2, rounds < 1).
CommitModelResult model_commit_throughput(std::size_t servers, CommitProtocol protocol,
                                          const std::vector<double>& rtt_samples,
                                          std::size_t rounds, std::uint64_t seed);

}  // namespace iconf
