// Copyright 2026 The wbfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Parallel seed runs against the serial reference.

#include <vector>

#include "benchmark/benchmark.h"
#include "wbfuzz/engine.h"

namespace wbfuzz {
namespace {

std::vector<RunConfig> Configs(int seeds) {
  std::vector<RunConfig> out;
  for (int s = 1; s <= seeds; ++s) {
    RunConfig c;
    c.sut = "validbeans";
    c.arm = Arm::kAll;
    c.budget = Budget::Evaluations(2000);
    c.seed = static_cast<uint64_t>(s);
    out.push_back(c);
  }
  return out;
}

void BM_RunSeeds(benchmark::State& state) {
  const auto configs = Configs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(RunSeeds(configs));
}

void BM_RunSeedsSerial(benchmark::State& state) {
  const auto configs = Configs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(RunSeedsSerial(configs));
}

BENCHMARK(BM_RunSeeds)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunSeedsSerial)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace wbfuzz

BENCHMARK_MAIN();
