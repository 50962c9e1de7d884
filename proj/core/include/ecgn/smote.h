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

#ifndef ECGN_SMOTE_H_
#define ECGN_SMOTE_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ecgn/graph.h"
#include "ecgn/partition.h"

namespace ecgn {

enum class ConnectivityMode {
  kOutOfClass,    // neighbors whose label differs (unlabeled ones included)
  kOutOfCluster,  // neighbors in another cluster
};

enum class SeedSelection {
  kBoundary,  // the most connected train nodes of the class
  kRandom,    // every synthetic node draws its seed uniformly
};

struct SmoteConfig {
  double alpha = 4.0;
  // Optional per-class train count to reach; overrides alpha for the
  // classes listed.
  std::map<ClassId, std::int64_t> target_counts;
  // 0 picks min(10, class train size).
  int seed_count_k = 0;
  ConnectivityMode connectivity_mode = ConnectivityMode::kOutOfClass;
  SeedSelection seed_selection = SeedSelection::kBoundary;
  std::vector<ClassId> minority_classes;
  std::uint64_t seed = 0;
};

struct NodeScore {
  NodeId node;
  std::int64_t score;

  friend bool operator==(const NodeScore&, const NodeScore&) = default;
};

// Scores of the train nodes of class m, ascending by id. `a` is needed only
// for kOutOfCluster. Throws kClassEmpty if m has no train node.
std::vector<NodeScore> ConnectivityScores(const Graph& g,
                                          const LabelVector& labels,
                                          const NodeMask& train,
                                          const ClusterAssignment* a,
                                          ClassId m, ConnectivityMode mode);

// The k highest scores, ties to the lower id; everything if k exceeds the
// population.
std::vector<NodeId> SelectSeeds(std::span<const NodeScore> scores, int k);

// Euclidean-nearest train node of v's class other than v, ties to the lower
// id. Throws kSingletonClass when there is none.
NodeId NearestSameClass(const Matrix& h, const LabelVector& labels,
                        const NodeMask& train, NodeId v);

// (1 - delta) * h[v] + delta * h[u], kept inside the box spanned by the two
// rows.
RowVector Synthesize(const Matrix& h, NodeId v, NodeId u, double delta);

struct SynthOrigin {
  NodeId synth_id;
  NodeId seed;
  NodeId neighbor;
  double delta;
  ClassId label;

  friend bool operator==(const SynthOrigin&, const SynthOrigin&) = default;
};

struct AugmentationResult {
  Graph graph;
  EmbeddingMatrix embeddings;
  LabelVector labels;
  NodeMaskSet masks;
  ClusterAssignment clusters;  // empty when no assignment was given
  std::vector<SynthOrigin> synth_origin;
};

// Number of synthetic nodes requested for class m.
std::int64_t SyntheticCount(const SmoteConfig& cfg, ClassId m,
                            std::int64_t train_count);

// Appends synthetic minority nodes after the original ids, class by class.
// Each one interpolates a seed with its nearest same-class neighbor, is
// adjacent to the seed and all of its neighbors, is train-masked and joins
// the seed's cluster. Throws kCapExceeded when a class would receive at
// least half as many synthetic nodes as the largest train class has nodes,
// and kNothingToAugment when nodes were requested but no seed has a
// same-class neighbor.
AugmentationResult Augment(const Graph& g, const Matrix& h,
                           const LabelVector& labels, const NodeMaskSet& masks,
                           const ClusterAssignment* a, const SmoteConfig& cfg);

}  // namespace ecgn

#endif  // ECGN_SMOTE_H_
