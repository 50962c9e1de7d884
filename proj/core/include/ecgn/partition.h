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

#ifndef ECGN_PARTITION_H_
#define ECGN_PARTITION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ecgn/graph.h"

namespace ecgn {

using ClusterId = std::int32_t;

struct ClusterAssignment {
  std::vector<ClusterId> cluster_of;
  ClusterId num_clusters = 0;

  std::size_t size() const { return cluster_of.size(); }
  ClusterId operator[](std::size_t v) const { return cluster_of[v]; }

  // Node ids of each cluster, ascending.
  std::vector<std::vector<NodeId>> Members() const;
  std::vector<std::int64_t> Sizes() const;

  friend bool operator==(const ClusterAssignment&,
                         const ClusterAssignment&) = default;
};

// Throws kInvalidArgument unless every node has a cluster in [0, k) and
// every cluster is non-empty.
void ValidateAssignment(const ClusterAssignment& a, NodeId num_nodes);

struct PartitionConfig {
  ClusterId k = 2;
  double balance_eps = 0.1;
  // Stop coarsening at or below this many vertices; 0 means 100 * k.
  NodeId coarsen_stop = 0;
  int refine_passes = 10;
  std::uint64_t seed = 0;
};

// Largest admissible cluster weight: floor((1 + eps) * ceil(total / k)).
std::int64_t MaxClusterWeight(std::int64_t total_weight, ClusterId k,
                              double balance_eps);

// Undirected graph with integer vertex and edge weights, used for the
// coarse levels of the multilevel scheme.
struct WeightedGraph {
  std::vector<std::int64_t> row_offsets{0};
  std::vector<NodeId> col_indices;
  std::vector<std::int64_t> edge_weights;
  std::vector<std::int64_t> vertex_weights;

  NodeId num_nodes() const {
    return static_cast<NodeId>(row_offsets.size() - 1);
  }
  std::int64_t total_vertex_weight() const;

  static WeightedGraph FromGraph(const Graph& g);
};

struct CoarseLevel {
  WeightedGraph coarse;
  // fine_to_coarse[v] = coarse vertex that absorbed fine vertex v.
  std::vector<NodeId> fine_to_coarse;
};

// One round of heavy-edge matching: every vertex is matched with at most
// one unmatched neighbor along its heaviest incident edge and each pair is
// collapsed. Edge weights between collapsed vertices are summed, so any
// partition of the coarse graph has the same cut as its lift.
CoarseLevel HeavyEdgeMatching(const WeightedGraph& g, std::uint64_t seed);
CoarseLevel HeavyEdgeMatching(const Graph& g, std::uint64_t seed);

// Lifts a coarse assignment back onto the fine vertices.
ClusterAssignment ProjectAssignment(const ClusterAssignment& coarse,
                                    std::span<const NodeId> fine_to_coarse);

// Boundary refinement: greedy single-vertex moves and Kernighan-Lin style
// pair swaps, each applied only when it strictly lowers the cut and keeps
// every cluster non-empty and within MaxClusterWeight. The cut never
// increases.
ClusterAssignment KlRefine(const WeightedGraph& g, const ClusterAssignment& a,
                           const PartitionConfig& cfg);
ClusterAssignment KlRefine(const Graph& g, const ClusterAssignment& a,
                           const PartitionConfig& cfg);

// Multilevel k-way partition: heavy-edge coarsening, recursive greedy
// bisection of the coarsest graph, refinement at every level on the way
// back up, then a final rebalancing pass. Throws kTooFewNodes if n < k and
// kInvalidArgument for k < 2 or negative eps.
ClusterAssignment MetisPartition(const Graph& g, const PartitionConfig& cfg);

// Number of undirected edges whose endpoints lie in different clusters.
std::int64_t EdgeCut(const Graph& g, const ClusterAssignment& a);
std::int64_t EdgeCut(const WeightedGraph& g, const ClusterAssignment& a);

}  // namespace ecgn

#endif  // ECGN_PARTITION_H_
