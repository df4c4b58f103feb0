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

#include "iconf/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace iconf {

LatencyDistribution LatencyDistribution::empirical(std::vector<double> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptySamples, "empirical latency distribution has no samples");
  return {Kind::Empirical, 0, 0, std::move(samples)};
}

double LatencyDistribution::sample(Rng& rng) const {
  double v = 0;
  switch (kind) {
    case Kind::Constant:
      v = a;
      break;
    case Kind::Uniform: {
      std::uniform_real_distribution<double> d(a, std::max(a, b));
      v = d(rng);
      break;
    }
    case Kind::LogNormal: {
      std::lognormal_distribution<double> d(a, b);
      v = d(rng);
      break;
    }
    case Kind::Empirical: {
      if (samples.empty()) throw Error(ErrorCode::EmptySamples, "empirical latency distribution has no samples");
      std::uniform_int_distribution<std::size_t> d(0, samples.size() - 1);
      v = samples[d(rng)];
      break;
    }
  }
  return std::max(0.0, v);
}

double LatencyDistribution::mean() const {
  switch (kind) {
    case Kind::Constant: return std::max(0.0, a);
    case Kind::Uniform: return std::max(0.0, (a + std::max(a, b)) / 2);
    case Kind::LogNormal: return std::exp(a + b * b / 2);
    case Kind::Empirical:
      if (samples.empty()) return 0;
      return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
  }
  return 0;
}

std::string LatencyDistribution::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Constant: os << "constant(" << a << ")"; break;
    case Kind::Uniform: os << "uniform(" << a << "," << b << ")"; break;
    case Kind::LogNormal: os << "lognormal(" << a << "," << b << ")"; break;
    case Kind::Empirical: os << "empirical(" << samples.size() << " samples)"; break;
  }
  return os.str();
}

std::vector<double> load_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read latency samples from '" + path + "'");
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    double v = 0;
    if (!(ls >> v)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw Error(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": not a number");
    }
    if (v < 0) throw Error(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": negative delay");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::EmptySamples, "'" + path + "' contains no samples");
  return out;
}

bool NetworkModel::partitioned(ReplicaId x, ReplicaId y, double t) const {
  return std::any_of(partitions.begin(), partitions.end(),
                     [&](const Partition& p) { return p.separates(x, y, t); });
}

double NetworkModel::heal_time(ReplicaId x, ReplicaId y, double t) const {
  // Overlapping intervals chain, so iterate to a fixed point.
  bool moved = true;
  while (moved) {
    moved = false;
    for (const auto& p : partitions) {
      if (p.separates(x, y, t)) {
        t = p.end;
        moved = true;
      }
    }
  }
  return t;
}

}  // namespace iconf
