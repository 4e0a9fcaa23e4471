// Copyright 2026 The psne-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "psne/game.hpp"
#include "psne/harness.hpp"
#include "psne/recovery.hpp"
#include "psne/rng.hpp"
#include "psne/sampler.hpp"
#include "psne/solver.hpp"

namespace {

using namespace psne;

void BM_EnumeratePsne(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const LinearInfluenceGame g = random_lig(n, 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_psne(g));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_EnumeratePsne)->DenseRange(10, 20, 5)->Unit(benchmark::kMillisecond);

void BM_SampleDataset(benchmark::State& state) {
  const AdmittedGame a = draw_admissible_game(10, 1, 0.01, 1, 100);
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_dataset(a.psne, 10, 0.01, m, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleDataset)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_LearnGame(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const AdmittedGame a = draw_admissible_game(n, 1, 0.01, 2, 100);
  const std::size_t m = 1000000;
  const Dataset d = sample_dataset(a.psne, n, 0.01, m, 3);
  const double lambda = lambda_schedule(m, n, 0.01, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(learn_game(d, lambda));
}
BENCHMARK(BM_LearnGame)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_FitPlayer(benchmark::State& state) {
  const AdmittedGame a = draw_admissible_game(12, 3, 0.01, 4, 100);
  const Dataset d = sample_dataset(a.psne, 12, 0.01, 1000000, 5);
  const FeatureMatrix f = player_features(action_histogram(d), 0);
  const double lambda = lambda_schedule(d.size(), 12, 0.01, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(fit_l1_logistic(f, lambda));
}
BENCHMARK(BM_FitPlayer)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
