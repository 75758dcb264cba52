// Copyright 2026 The ForestPrune Authors
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

#include <map>

#include <forestprune/forestprune.hpp>

namespace {

using namespace forestprune;

struct Fixture {
  Dataset data;
  Ensemble ensemble;
  PruneProblem problem;
  WeightScheme weights;
};

// Boosting ensembles on Friedman #1, cached per (rows, trees).
const Fixture& fixture(Index rows, int trees) {
  static std::map<std::pair<Index, int>, Fixture> cache;
  const auto key = std::make_pair(rows, trees);
  auto it = cache.find(key);
  if (it == cache.end()) {
    Fixture f;
    f.data = make_friedman1(rows, 1.0, 1);
    BoostingParams p;
    p.n_trees = trees;
    p.seed = 2;
    f.ensemble = fit_boosting(f.data, p);
    f.problem = PruneProblem::build(f.ensemble, f.data.X, f.data.y);
    f.weights = make_weights(f.ensemble, Weighting::kNode);
    it = cache.emplace(key, std::move(f)).first;
  }
  return it->second;
}

void BM_DepthDiff(benchmark::State& state) {
  const Index rows = state.range(0);
  const Dataset data = make_friedman1(rows, 1.0, 1);
  const RegressionTree tree = fit_tree(data, 10, 1, 0, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_depth_diff(tree, data.X, 0.0));
  }
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_DepthDiff)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_ProblemBuild(benchmark::State& state) {
  const Fixture& f = fixture(state.range(0), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(PruneProblem::build(f.ensemble, f.data.X, f.data.y));
  }
}
BENCHMARK(BM_ProblemBuild)->Args({2000, 250})->Unit(benchmark::kMillisecond);

// One full CBCD pass from the empty model.
void BM_CbcdPass(benchmark::State& state) {
  const Fixture& f = fixture(state.range(0), static_cast<int>(state.range(1)));
  SolverOptions opt;
  opt.max_passes = 1;
  opt.rule = SearchRule::kNone;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cbcd_solve(f.problem, f.weights, 0.01, SolverState::zeros(f.problem), opt));
  }
}
BENCHMARK(BM_CbcdPass)->Args({2000, 250})->Args({10000, 250})->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const Fixture& f = fixture(state.range(0), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cbcd_solve(f.problem, f.weights, 0.01, SolverState::zeros(f.problem)));
  }
}
BENCHMARK(BM_Solve)->Args({2000, 250})->Unit(benchmark::kMillisecond);

void BM_Path(benchmark::State& state) {
  const Fixture& f = fixture(state.range(0), static_cast<int>(state.range(1)));
  PathOptions opt;
  opt.grid_size = 20;
  for (auto _ : state) {
    benchmark::DoNotOptimize(regularization_path(f.problem, f.weights, opt));
  }
}
BENCHMARK(BM_Path)->Args({2000, 250})->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
