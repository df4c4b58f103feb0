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

#include "iconf/commit_model.hpp"

#include <algorithm>
#include <random>

#include "iconf/value.hpp"

namespace iconf {

std::string_view to_string(CommitProtocol p) {
  return p == CommitProtocol::Centralized ? "c2pc" : "d2pc";
}

CommitModelResult model_commit_throughput(std::size_t servers, CommitProtocol protocol,
                                          const std::vector<double>& rtt_samples,
                                          std::size_t rounds, std::uint64_t seed) {
  if (rtt_samples.empty()) throw Error(ErrorCode::EmptySamples, "no round-trip samples");
  if (servers < 2) throw Error(ErrorCode::ConfigInvalid, "commit model needs at least 2 servers");
  if (rounds < 1) throw Error(ErrorCode::ConfigInvalid, "commit model needs at least 1 round");
  const std::size_t draws = protocol == CommitProtocol::Centralized ? servers : servers * servers;
  const double scale = protocol == CommitProtocol::Centralized ? 1.0 : 0.5;
  std::uniform_int_distribution<std::size_t> index(0, rtt_samples.size() - 1);
  double total = 0;
  for (std::size_t r = 0; r < rounds; ++r) {
    std::mt19937_64 stream(mix_seed(seed, r));
    double latency = 0;
    for (std::size_t k = 0; k < draws; ++k) {
      latency = std::max(latency, scale * rtt_samples[index(stream)]);
    }
    total += latency;
  }
  CommitModelResult out;
  out.mean_latency = total / static_cast<double>(rounds);
  out.throughput = out.mean_latency > 0 ? 1000.0 / out.mean_latency : 0;
  return out;
}

}  // namespace iconf
