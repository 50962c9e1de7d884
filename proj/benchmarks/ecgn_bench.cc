// Copyright 2026 The ECGN Authors
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

// Micro-benchmarks of the hot paths on a Cora-sized planted-partition graph
// (2708 nodes, 1433 bag-of-words features, 7 classes).

#include <cstdint>

#include <benchmark/benchmark.h>

#include "ecgn/dataset.h"
#include "ecgn/gnn.h"
#include "ecgn/lsh.h"
#include "ecgn/partition.h"
#include "ecgn/smote.h"
#include "ecgn/train.h"

namespace {

using namespace ecgn;

const DatasetBundle& CoraSized() {
  static const DatasetBundle data = [] {
    SyntheticSpec spec;
    spec.class_sizes = {351, 217, 418, 818, 426, 298, 180};
    spec.p_in = 0.005;
    spec.p_out = 0.0002;
    spec.dim = 1433;
    spec.words_per_node = 18;
    spec.seed = 1;
    return MakeSyntheticDataset(spec);
  }();
  return data;
}

const NodeMaskSet& Masks() {
  static const NodeMaskSet masks = [] {
    ImbalanceSpec imb;
    imb.val_count = 500;
    imb.test_count = 1000;
    return SimulateImbalance(CoraSized().labels, imb);
  }();
  return masks;
}

void BM_MetisPartition(benchmark::State& state) {
  const Graph& g = CoraSized().graph;
  PartitionConfig cfg;
  cfg.k = static_cast<ClusterId>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(MetisPartition(g, cfg));
  }
}
BENCHMARK(BM_MetisPartition)->Arg(2)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_EdgeCut(benchmark::State& state) {
  const Graph& g = CoraSized().graph;
  const ClusterAssignment a = MetisPartition(g, {.k = 3});
  for (auto _ : state) benchmark::DoNotOptimize(EdgeCut(g, a));
}
BENCHMARK(BM_EdgeCut);

void BM_LshCluster(benchmark::State& state) {
  const Matrix& x = CoraSized().features;
  for (auto _ : state) benchmark::DoNotOptimize(LshCluster(x, LshConfig{}));
}
BENCHMARK(BM_LshCluster)->Unit(benchmark::kMillisecond);

void BM_Forward(benchmark::State& state) {
  const DatasetBundle& d = CoraSized();
  const NodeFeatures x(d.features);
  const GnnParams p = InitParams(d.features.cols(), state.range(0), 2,
                                 d.labels.num_classes, 0);
  for (auto _ : state) benchmark::DoNotOptimize(Forward(d.graph, x, p));
}
BENCHMARK(BM_Forward)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Backward(benchmark::State& state) {
  const DatasetBundle& d = CoraSized();
  const NodeFeatures x(d.features);
  const GnnParams p = InitParams(d.features.cols(), state.range(0), 2,
                                 d.labels.num_classes, 0);
  const LossTargets targets =
      BuildTargets(d.labels, Masks().train, LossWeighting{});
  for (auto _ : state) benchmark::DoNotOptimize(Backward(d.graph, x, p, targets));
}
BENCHMARK(BM_Backward)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_AdamStep(benchmark::State& state) {
  const DatasetBundle& d = CoraSized();
  GnnParams p = InitParams(d.features.cols(), 128, 2, d.labels.num_classes, 0);
  const GnnParams grads = InitParams(d.features.cols(), 128, 2, d.labels.num_classes, 1);
  OptimizerState opt = OptimizerState::For(p);
  for (auto _ : state) AdamStep(p, grads, opt, 0.01);
}
BENCHMARK(BM_AdamStep)->Unit(benchmark::kMicrosecond);

void BM_Augment(benchmark::State& state) {
  const DatasetBundle& d = CoraSized();
  const ClusterAssignment a = MetisPartition(d.graph, {.k = 3});
  const ForwardResult f =
      Forward(d.graph, d.features, InitParams(d.features.cols(), 128, 2, d.labels.num_classes, 0));
  SmoteConfig cfg;
  cfg.alpha = 4.0;
  cfg.minority_classes = MinorityClasses(ImbalanceSpec{}, d.labels.num_classes);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Augment(d.graph, f.embeddings, d.labels, Masks(), &a, cfg));
  }
}
BENCHMARK(BM_Augment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
