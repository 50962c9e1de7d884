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

#include "ecgn/graph.h"

#include <algorithm>
#include <string>

#include "ecgn/error.h"

namespace ecgn {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidEdge: return "InvalidEdge";
    case ErrorCode::kEmptyCluster: return "EmptyCluster";
    case ErrorCode::kTooFewNodes: return "TooFewNodes";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kShapeError: return "ShapeError";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kMissingClusterParams: return "MissingClusterParams";
    case ErrorCode::kClassEmpty: return "ClassEmpty";
    case ErrorCode::kSingletonClass: return "SingletonClass";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kNothingToAugment: return "NothingToAugment";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInfeasibleSplit: return "InfeasibleSplit";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

Graph::Graph(std::vector<std::int64_t> row_offsets,
             std::vector<NodeId> col_indices, bool undirected)
    : row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      undirected_(undirected) {
  if (row_offsets_.empty() || row_offsets_.front() != 0 ||
      row_offsets_.back() != static_cast<std::int64_t>(col_indices_.size())) {
    throw Error(ErrorCode::kInvalidArgument, "malformed CSR offsets");
  }
  const NodeId n = num_nodes();
  for (NodeId v = 0; v < n; ++v) {
    if (row_offsets_[v] > row_offsets_[v + 1]) {
      throw Error(ErrorCode::kInvalidArgument, "offsets not monotone");
    }
    auto nbrs = neighbors(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (nbrs[i] < 0 || nbrs[i] >= n || nbrs[i] == v ||
          (i > 0 && nbrs[i] <= nbrs[i - 1])) {
        throw Error(ErrorCode::kInvalidArgument,
                    "neighbor list of node " + std::to_string(v) +
                        " is not sorted/unique/loop-free");
      }
    }
  }
  if (undirected_) {
    for (NodeId v = 0; v < n; ++v) {
      for (NodeId u : neighbors(v)) {
        if (!has_edge(u, v)) {
          throw Error(ErrorCode::kInvalidArgument, "adjacency not symmetric");
        }
      }
    }
  }
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

namespace {

// Canonical CSR from arcs; arcs may contain duplicates but no self-loops.
Graph FromArcs(std::vector<Edge>& arcs, NodeId num_nodes, bool undirected) {
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(num_nodes) + 1, 0);
  std::vector<NodeId> cols;
  cols.reserve(arcs.size());
  for (const auto& [u, v] : arcs) {
    ++offsets[u + 1];
    cols.push_back(v);
  }
  for (NodeId v = 0; v < num_nodes; ++v) offsets[v + 1] += offsets[v];
  return Graph(std::move(offsets), std::move(cols), undirected);
}

}  // namespace

Graph BuildGraph(std::span<const Edge> edges, NodeId num_nodes,
                 bool symmetrize) {
  if (num_nodes < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative node count");
  }
  std::vector<Edge> arcs;
  arcs.reserve(edges.size() * (symmetrize ? 2 : 1));
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes) {
      throw Error(ErrorCode::kInvalidEdge,
                  "edge (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") out of range for n=" + std::to_string(num_nodes));
    }
    if (u == v) continue;
    arcs.emplace_back(u, v);
    if (symmetrize) arcs.emplace_back(v, u);
  }
  return FromArcs(arcs, num_nodes, symmetrize);
}

std::vector<Edge> EdgesOf(const Graph& g) {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(g.num_edges()));
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (!g.undirected() || u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::vector<NodeId> MaskIndices(const NodeMask& mask) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

std::size_t MaskCount(const NodeMask& mask) {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

void ValidateLabels(const LabelVector& labels) {
  for (ClassId y : labels.labels) {
    if (y != LabelVector::kUnlabeled && (y < 0 || y >= labels.num_classes)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label " + std::to_string(y) + " outside [0, " +
                      std::to_string(labels.num_classes) + ")");
    }
  }
}

void ValidateMasks(const NodeMaskSet& masks, const LabelVector& labels) {
  const std::size_t n = labels.size();
  if (masks.train.size() != n || masks.val.size() != n ||
      masks.test.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "mask size mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int hits = int{masks.train[i]} + int{masks.val[i]} + int{masks.test[i]};
    if (hits > 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "masks overlap at node " + std::to_string(i));
    }
    if (hits == 1 && labels[i] == LabelVector::kUnlabeled) {
      throw Error(ErrorCode::kInvalidArgument,
                  "masked node " + std::to_string(i) + " is unlabeled");
    }
  }
}

SubgraphView InducedSubgraph(const Graph& g, std::span<const NodeId> node_set) {
  if (node_set.empty()) {
    throw Error(ErrorCode::kEmptyCluster, "induced subgraph of empty set");
  }
  SubgraphView view;
  view.parent_ids.assign(node_set.begin(), node_set.end());
  std::sort(view.parent_ids.begin(), view.parent_ids.end());
  view.parent_ids.erase(
      std::unique(view.parent_ids.begin(), view.parent_ids.end()),
      view.parent_ids.end());
  if (view.parent_ids.front() < 0 || view.parent_ids.back() >= g.num_nodes()) {
    throw Error(ErrorCode::kInvalidArgument, "subgraph id out of range");
  }
  std::vector<NodeId> local(static_cast<std::size_t>(g.num_nodes()), -1);
  for (std::size_t i = 0; i < view.parent_ids.size(); ++i) {
    local[view.parent_ids[i]] = static_cast<NodeId>(i);
  }
  std::vector<std::int64_t> offsets{0};
  std::vector<NodeId> cols;
  for (NodeId parent : view.parent_ids) {
    // Parent neighbor lists are sorted and the map is monotone, so the local
    // lists come out sorted too.
    for (NodeId u : g.neighbors(parent)) {
      if (local[u] >= 0) cols.push_back(local[u]);
    }
    offsets.push_back(static_cast<std::int64_t>(cols.size()));
  }
  view.graph = Graph(std::move(offsets), std::move(cols), g.undirected());
  return view;
}

Graph AddNodeWithEdges(const Graph& g, std::span<const NodeId> neighbor_ids) {
  return AddNodesWithEdges(
      g, {std::vector<NodeId>(neighbor_ids.begin(), neighbor_ids.end())});
}

Graph AddNodesWithEdges(const Graph& g,
                        const std::vector<std::vector<NodeId>>& new_neighbors) {
  const NodeId n = g.num_nodes();
  const NodeId total = n + static_cast<NodeId>(new_neighbors.size());
  // Canonicalize each new node's list and collect back-edges per old node.
  std::vector<std::vector<NodeId>> lists(new_neighbors.size());
  std::vector<std::vector<NodeId>> back(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < new_neighbors.size(); ++i) {
    auto& list = lists[i];
    list = new_neighbors[i];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (NodeId u : list) {
      if (u < 0 || u >= n) {
        throw Error(ErrorCode::kInvalidEdge,
                    "new node neighbor " + std::to_string(u) +
                        " not in graph of size " + std::to_string(n));
      }
      back[u].push_back(n + static_cast<NodeId>(i));
    }
  }
  std::vector<std::int64_t> offsets{0};
  offsets.reserve(static_cast<std::size_t>(total) + 1);
  std::vector<NodeId> cols;
  for (NodeId v = 0; v < n; ++v) {
    auto nbrs = g.neighbors(v);
    cols.insert(cols.end(), nbrs.begin(), nbrs.end());
    // New ids exceed every old id, and `back[v]` is ascending.
    if (g.undirected()) cols.insert(cols.end(), back[v].begin(), back[v].end());
    offsets.push_back(static_cast<std::int64_t>(cols.size()));
  }
  for (const auto& list : lists) {
    cols.insert(cols.end(), list.begin(), list.end());
    offsets.push_back(static_cast<std::int64_t>(cols.size()));
  }
  return Graph(std::move(offsets), std::move(cols), g.undirected());
}

Graph RestrictToGroups(const Graph& g, std::span<const std::int32_t> group_of) {
  if (group_of.size() != static_cast<std::size_t>(g.num_nodes())) {
    throw Error(ErrorCode::kShapeError, "group map size != node count");
  }
  std::vector<std::int64_t> offsets{0};
  std::vector<NodeId> cols;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    for (NodeId u : g.neighbors(v)) {
      if (group_of[u] == group_of[v]) cols.push_back(u);
    }
    offsets.push_back(static_cast<std::int64_t>(cols.size()));
  }
  return Graph(std::move(offsets), std::move(cols), g.undirected());
}

Matrix GatherRows(const Matrix& m, std::span<const NodeId> ids) {
  Matrix out(static_cast<Eigen::Index>(ids.size()), m.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(ids[i]);
  }
  return out;
}

}  // namespace ecgn
