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

#ifndef ECGN_GRAPH_H_
#define ECGN_GRAPH_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace ecgn {

using NodeId = std::int32_t;
using ClassId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

// Dense row-major real matrix. Used for raw features X, embeddings H and
// every weight tensor.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>;
using FeatureMatrix = Matrix;
using EmbeddingMatrix = Matrix;
using RowVector = Eigen::RowVectorXd;

// Immutable compressed-sparse-row adjacency. Neighbor lists are sorted,
// duplicate-free and never contain the owning node.
class Graph {
 public:
  Graph() : row_offsets_{0} {}

  // Takes already-canonical CSR arrays; checks the invariants and throws
  // kInvalidArgument when they do not hold.
  Graph(std::vector<std::int64_t> row_offsets, std::vector<NodeId> col_indices,
        bool undirected);

  NodeId num_nodes() const {
    return static_cast<NodeId>(row_offsets_.size() - 1);
  }
  // Directed entries in the CSR arrays (2x the edge count when undirected).
  std::int64_t num_entries() const {
    return static_cast<std::int64_t>(col_indices_.size());
  }
  // Undirected edge count when undirected, arc count otherwise.
  std::int64_t num_edges() const {
    return undirected_ ? num_entries() / 2 : num_entries();
  }
  bool undirected() const { return undirected_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {col_indices_.data() + row_offsets_[v],
            static_cast<std::size_t>(row_offsets_[v + 1] - row_offsets_[v])};
  }
  std::int64_t degree(NodeId v) const {
    return row_offsets_[v + 1] - row_offsets_[v];
  }
  bool has_edge(NodeId u, NodeId v) const;

  const std::vector<std::int64_t>& row_offsets() const { return row_offsets_; }
  const std::vector<NodeId>& col_indices() const { return col_indices_; }

  friend bool operator==(const Graph& a, const Graph& b) = default;

 private:
  std::vector<std::int64_t> row_offsets_;
  std::vector<NodeId> col_indices_;
  bool undirected_ = true;
};

// Builds a CSR graph. Self-loops and duplicates are dropped; when
// `symmetrize` is set every edge is stored in both directions.
// Throws kInvalidEdge for an endpoint outside [0, num_nodes).
Graph BuildGraph(std::span<const Edge> edges, NodeId num_nodes,
                 bool symmetrize = true);

// Each undirected edge once as (u, v) with u < v; arcs for directed graphs.
std::vector<Edge> EdgesOf(const Graph& g);

struct LabelVector {
  static constexpr ClassId kUnlabeled = -1;

  std::vector<ClassId> labels;
  ClassId num_classes = 0;

  std::size_t size() const { return labels.size(); }
  ClassId operator[](std::size_t i) const { return labels[i]; }
};

using NodeMask = std::vector<bool>;

struct NodeMaskSet {
  NodeMask train;
  NodeMask val;
  NodeMask test;
};

std::vector<NodeId> MaskIndices(const NodeMask& mask);
std::size_t MaskCount(const NodeMask& mask);

// Throws kInvalidArgument unless labels are in range and the masks are
// pairwise disjoint, sized to `labels`, and only cover labeled nodes.
void ValidateLabels(const LabelVector& labels);
void ValidateMasks(const NodeMaskSet& masks, const LabelVector& labels);

struct SubgraphView {
  // parent_ids[local] = global id; strictly ascending.
  std::vector<NodeId> parent_ids;
  Graph graph;
};

// Throws kEmptyCluster for an empty set, kInvalidArgument for ids out of
// range. Duplicate ids in `node_set` are ignored.
SubgraphView InducedSubgraph(const Graph& g, std::span<const NodeId> node_set);

// Appends one node adjacent (both directions) to `neighbor_ids`.
Graph AddNodeWithEdges(const Graph& g, std::span<const NodeId> neighbor_ids);

// Batch form: appends new_neighbors.size() nodes. Neighbor ids must refer to
// nodes of `g`; new nodes are never adjacent to each other.
Graph AddNodesWithEdges(const Graph& g,
                        const std::vector<std::vector<NodeId>>& new_neighbors);

// Keeps only edges whose endpoints share a group id. This is the disjoint
// union of the induced subgraphs of every group, in parent numbering.
Graph RestrictToGroups(const Graph& g, std::span<const std::int32_t> group_of);

// Rows `ids` of `m`, in order.
Matrix GatherRows(const Matrix& m, std::span<const NodeId> ids);

}  // namespace ecgn

#endif  // ECGN_GRAPH_H_
