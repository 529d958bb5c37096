// Copyright 2026 The gscnet Authors.
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

#include "gsc/data.h"
#include "gsc/graph.h"
#include "gsc/model.h"
#include "gsc/poly_basis.h"

namespace {

// One shared CSBM instance at the timing scale: n = 5000, degree 10, d = 16.
const gsc::Dataset& BenchData() {
  static const gsc::Dataset data =
      gsc::GenerateCsbm(gsc::CsbmPreset("homophily", 5000, 7));
  return data;
}

void BM_ApplyLaplacian(benchmark::State& state) {
  const gsc::Dataset& data = BenchData();
  gsc::FeatureMatrix out;
  for (auto _ : state) {
    gsc::ApplyLaplacianTo(data.graph, data.features, out);
    benchmark::DoNotOptimize(out.values().data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(data.graph.nnz()));
}
BENCHMARK(BM_ApplyLaplacian);

void BM_ApplyShifted(benchmark::State& state) {
  const gsc::Dataset& data = BenchData();
  gsc::FeatureMatrix out;
  for (auto _ : state) {
    gsc::ApplyShiftedTo(data.graph, data.features, out);
    benchmark::DoNotOptimize(out.values().data());
  }
}
BENCHMARK(BM_ApplyShifted);

void BM_ApplyGcnNorm(benchmark::State& state) {
  const gsc::Dataset& data = BenchData();
  gsc::FeatureMatrix out;
  for (auto _ : state) {
    gsc::ApplyGcnNormTo(data.graph, data.features, out);
    benchmark::DoNotOptimize(out.values().data());
  }
}
BENCHMARK(BM_ApplyGcnNorm);

void BM_BuildBasisCache(benchmark::State& state) {
  const gsc::Dataset& data = BenchData();
  const int total = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const gsc::BasisCache cache =
        gsc::BuildBasisCache(data.graph, data.features, total / 2, total - total / 2);
    benchmark::DoNotOptimize(&cache);
  }
}
BENCHMARK(BM_BuildBasisCache)->Arg(2)->Arg(4)->Arg(6)->Arg(12);

void BM_GscCombine(benchmark::State& state) {
  const gsc::Dataset& data = BenchData();
  const gsc::BasisCache cache =
      gsc::BuildBasisCache(data.graph, data.features, 5, 5);
  const gsc::FilterSpec spec = gsc::FilterSpec::Uniform(5, 5, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsc::GscCombine(cache, spec));
  }
}
BENCHMARK(BM_GscCombine);

void BM_Propagation(benchmark::State& state) {
  const gsc::Dataset& data = BenchData();
  gsc::ModelShape shape;
  shape.arch = static_cast<gsc::Architecture>(state.range(0));
  shape.in_dim = data.features.cols();
  shape.out_dim = 2;
  shape.k1 = 5;
  shape.k2 = 5;
  shape.depth = 10;
  const gsc::ModelParams params = gsc::InitParams(shape, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gsc::ApplyPropagation(params, data.graph, data.features));
  }
  state.SetLabel(std::string(gsc::ArchitectureName(shape.arch)));
}
BENCHMARK(BM_Propagation)
    ->Arg(static_cast<int>(gsc::Architecture::kGscNet))
    ->Arg(static_cast<int>(gsc::Architecture::kBernNet))
    ->Arg(static_cast<int>(gsc::Architecture::kJkNet))
    ->Arg(static_cast<int>(gsc::Architecture::kGcn));

}  // namespace

BENCHMARK_MAIN();
