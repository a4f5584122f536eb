// Copyright 2026 The speechscale Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "speechscale/acoustic.hpp"
#include "speechscale/estimate.hpp"
#include "speechscale/melfit.hpp"

namespace {

using namespace speechscale;

void BM_Formants(benchmark::State& state) {
  const auto config = two_tube(0.09, 1.0, 0.08, 8.0);
  const int count = static_cast<int>(state.range(0));
  const double limit = resonance_search_limit(config, count);
  for (auto _ : state) benchmark::DoNotOptimize(formants(config, count, limit));
}
BENCHMARK(BM_Formants)->Arg(3)->Arg(6);

ShiftMatrix NoisyShifts(std::size_t speakers, std::size_t bands) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> factor(-0.25, 0.25);
  std::normal_distribution<double> noise(0.0, 0.01);
  ShiftMatrix m(std::vector<std::string>(speakers, "s"), std::vector<std::string>(bands, "b"));
  for (std::size_t r = 0; r < speakers; ++r) {
    const double c = factor(rng);
    for (std::size_t l = 0; l < bands; ++l) m.set(r, l, (0.7 + 0.1 * l) * c + noise(rng));
  }
  return m;
}

void BM_Rank1(benchmark::State& state) {
  const auto shifts = NoisyShifts(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(rank1_factor(shifts));
}
BENCHMARK(BM_Rank1)->Arg(20)->Arg(200);

void BM_FitMel(benchmark::State& state) {
  std::vector<MelSample> samples;
  for (double f : log_spaced_grid(100.0, 8000.0, static_cast<int>(state.range(0)))) {
    samples.push_back({f, std::log(1.0 + f / 650.0)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_mel(samples));
}
BENCHMARK(BM_FitMel)->Arg(50)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
