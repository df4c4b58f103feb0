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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "iconf/catalog.hpp"
#include "iconf/history.hpp"
#include "iconf/simulator.hpp"
#include "iconf/state.hpp"
#include "iconf/tpcc.hpp"
#include "iconf/view.hpp"

namespace iconf {
namespace {

DatabaseState random_state(std::size_t versions, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Version> out;
  for (std::size_t k = 0; k < versions; ++k) {
    WriteBatch b(TxnId{static_cast<ReplicaId>(rng() % 4), seed * versions + k + 1},
                 static_cast<ReplicaId>(rng() % 4), 1 + rng() % 1000);
    b.write("t/" + std::to_string(rng() % (versions / 2 + 1)), {{"f", Value{static_cast<std::int64_t>(rng() % 100)}}});
    for (auto& v : b.take()) out.push_back(std::move(v));
  }
  return DatabaseState(std::move(out));
}

void BM_Merge(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = random_state(n, 1);
  auto b = random_state(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(merge(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Merge)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_VisibleState(benchmark::State& state) {
  auto s = random_state(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(visible_state(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_VisibleState)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_CheckDynamic(benchmark::State& state) {
  auto rows = row_workloads();
  const auto& w = rows.at(static_cast<std::size_t>(state.range(0))).workload;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(check_dynamic(w, 100, 4, ++seed));
  state.SetLabel(w.name);
}
BENCHMARK(BM_CheckDynamic)->Arg(0)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SimulateTpcc(benchmark::State& state) {
  auto cfg = tpcc::default_config(static_cast<int>(state.range(0)));
  cfg.sim.duration = 40;
  for (auto _ : state) benchmark::DoNotOptimize(tpcc::run_tpcc(cfg));
}
BENCHMARK(BM_SimulateTpcc)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace iconf

BENCHMARK_MAIN();
