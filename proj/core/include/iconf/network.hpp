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

// Simulated network: delay distributions (milliseconds of virtual time)
// and partition schedules.

#include <string>
#include <vector>

#include "iconf/workload.hpp"

namespace iconf {

struct LatencyDistribution {
  enum class Kind { Constant, Uniform, LogNormal, Empirical };
  Kind kind = Kind::Constant;
  double a = 0;  // constant value | uniform lo | lognormal mu (of ln ms)
  double b = 0;  // uniform hi | lognormal sigma
  std::vector<double> samples;

  static LatencyDistribution constant(double ms) { return {Kind::Constant, ms, 0, {}}; }
  static LatencyDistribution uniform(double lo, double hi) { return {Kind::Uniform, lo, hi, {}}; }
  static LatencyDistribution lognormal(double mu, double sigma) { return {Kind::LogNormal, mu, sigma, {}}; }
  // Throws EmptySamples on an empty list.
  static LatencyDistribution empirical(std::vector<double> samples);

  // Nonnegative draw.
  double sample(Rng& rng) const;
  double mean() const;
  std::string describe() const;
  bool operator==(const LatencyDistribution&) const = default;
};

// Reads one millisecond value per line; blank lines and '#' comments are
// skipped. Throws Io or EmptySamples.
std::vector<double> load_samples(const std::string& path);

struct Partition {
  ReplicaId a = 0;
  ReplicaId b = 0;
  double start = 0;
  double end = 0;  // half-open [start, end)

  bool separates(ReplicaId x, ReplicaId y, double t) const {
    return ((x == a && y == b) || (x == b && y == a)) && t >= start && t < end;
  }
  bool operator==(const Partition&) const = default;
};

struct NetworkModel {
  double base_delay = 0;
  LatencyDistribution jitter = LatencyDistribution::constant(0);
  std::vector<Partition> partitions;

  double sample(Rng& rng) const { return base_delay + jitter.sample(rng); }
  double mean() const { return base_delay + jitter.mean(); }
  bool partitioned(ReplicaId x, ReplicaId y, double t) const;
  // Earliest time >= t at which x and y are not partitioned.
  double heal_time(ReplicaId x, ReplicaId y, double t) const;
};

}  // namespace iconf
