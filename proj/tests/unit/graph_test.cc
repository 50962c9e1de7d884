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

#include <algorithm>
#include <random>
#include <set>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "ecgn/error.h"
#include "ecgn/graph.h"
#include "oracles.h"

namespace ecgn {
namespace {

using ::testing::ElementsAre;
using testing::DenseAdjacency;
using testing::ToDense;

std::vector<NodeId> Nbrs(const Graph& g, NodeId v) {
  return {g.neighbors(v).begin(), g.neighbors(v).end()};
}

Graph Path4() {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}};
  return BuildGraph(edges, 4);
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ecgn::Error thrown";
  return ErrorCode::kConfigError;
}

TEST(BuildGraph, PathHasExpectedDegrees) {
  const Graph g = Path4();
  EXPECT_EQ(g.num_nodes(), 4);
  EXPECT_EQ(g.num_edges(), 3);
  std::vector<std::int64_t> degrees;
  for (NodeId v = 0; v < 4; ++v) degrees.push_back(g.degree(v));
  EXPECT_THAT(degrees, ElementsAre(1, 2, 2, 1));
}

TEST(BuildGraph, DropsSelfLoopsAndDuplicates) {
  const std::vector<Edge> edges{{0, 0}, {0, 1}, {0, 1}};
  const Graph g = BuildGraph(edges, 2);
  EXPECT_EQ(g.num_edges(), 1);
  EXPECT_THAT(Nbrs(g, 0), ElementsAre(1));
  EXPECT_THAT(Nbrs(g, 1), ElementsAre(0));
}

TEST(BuildGraph, RejectsOutOfRangeEndpoint) {
  const std::vector<Edge> edges{{0, 5}};
  EXPECT_EQ(CodeOf([&] { BuildGraph(edges, 4); }), ErrorCode::kInvalidEdge);
}

TEST(BuildGraph, CsrInvariantsOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = testing::RandomGraph(20, 0.3, seed);
    const auto& offsets = g.row_offsets();
    ASSERT_EQ(offsets.front(), 0);
    ASSERT_EQ(offsets.back(), g.num_entries());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      ASSERT_LE(offsets[v], offsets[v + 1]);
      const auto nbrs = g.neighbors(v);
      ASSERT_TRUE(std::is_sorted(nbrs.begin(), nbrs.end()));
      ASSERT_EQ(std::adjacent_find(nbrs.begin(), nbrs.end()), nbrs.end());
      for (NodeId u : nbrs) {
        ASSERT_NE(u, v);
        ASSERT_TRUE(g.has_edge(u, v));
      }
    }
  }
}

TEST(BuildGraph, DirectedInputIsSymmetrized) {
  const std::vector<Edge> edges{{2, 0}, {1, 2}};
  const Graph g = BuildGraph(edges, 3);
  EXPECT_TRUE(g.has_edge(0, 2));
  EXPECT_TRUE(g.has_edge(2, 0));
  EXPECT_TRUE(g.has_edge(2, 1));
}

TEST(BuildGraph, RoundTripThroughEdgeList) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = testing::RandomGraph(25, 0.2, seed);
    const auto edges = EdgesOf(g);
    EXPECT_EQ(BuildGraph(edges, g.num_nodes()), g);
  }
}

TEST(InducedSubgraph, KeepsInternalEdge) {
  const std::vector<NodeId> ids{0, 1};
  const SubgraphView view = InducedSubgraph(Path4(), ids);
  EXPECT_EQ(view.graph.num_nodes(), 2);
  EXPECT_EQ(view.graph.num_edges(), 1);
  EXPECT_THAT(view.parent_ids, ElementsAre(0, 1));
}

TEST(InducedSubgraph, DropsCrossingEdges) {
  const std::vector<NodeId> ids{0, 2};
  const SubgraphView view = InducedSubgraph(Path4(), ids);
  EXPECT_EQ(view.graph.num_nodes(), 2);
  EXPECT_EQ(view.graph.num_edges(), 0);
}

TEST(InducedSubgraph, EmptySetIsAnError) {
  const std::vector<NodeId> ids;
  EXPECT_EQ(CodeOf([&] { InducedSubgraph(Path4(), ids); }),
            ErrorCode::kEmptyCluster);
}

TEST(InducedSubgraph, ParentIdsSortedForUnsortedInput) {
  const std::vector<NodeId> ids{3, 1, 2};
  const SubgraphView view = InducedSubgraph(Path4(), ids);
  EXPECT_THAT(view.parent_ids, ElementsAre(1, 2, 3));
  EXPECT_EQ(view.graph.num_edges(), 2);
}

// Re-embedding every view edge into the parent recovers exactly the parent
// edges with both endpoints inside the set.
TEST(InducedSubgraph, MatchesDenseOracle) {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const NodeId n = 2 + static_cast<NodeId>(seed % 31);
    const Graph g = testing::RandomGraph(n, 0.3, seed);
    const DenseAdjacency dense = ToDense(g);
    std::vector<NodeId> ids;
    for (NodeId v = 0; v < n; ++v) {
      if (rng() % 2 == 0) ids.push_back(v);
    }
    if (ids.empty()) ids.push_back(0);
    const SubgraphView view = InducedSubgraph(g, ids);
    const DenseAdjacency local = ToDense(view.graph);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = 0; j < ids.size(); ++j) {
        ASSERT_EQ(local[i][j], dense[view.parent_ids[i]][view.parent_ids[j]]);
      }
    }
  }
}

TEST(AddNodeWithEdges, AttachesToGivenNeighbors) {
  const std::vector<NodeId> nbrs{1, 2};
  const Graph g = AddNodeWithEdges(Path4(), nbrs);
  EXPECT_EQ(g.num_nodes(), 5);
  EXPECT_EQ(g.degree(4), 2);
  EXPECT_TRUE(g.has_edge(1, 4));
  EXPECT_TRUE(g.has_edge(4, 2));
}

TEST(AddNodeWithEdges, EmptyNeighborListGivesIsolatedNode) {
  const std::vector<NodeId> nbrs;
  const Graph g = AddNodeWithEdges(Path4(), nbrs);
  EXPECT_EQ(g.num_nodes(), 5);
  EXPECT_EQ(g.degree(4), 0);
  EXPECT_EQ(g.num_edges(), 3);
}

TEST(AddNodeWithEdges, CollapsesDuplicateNeighbors) {
  const std::vector<NodeId> nbrs{2, 2, 1};
  const Graph g = AddNodeWithEdges(Path4(), nbrs);
  EXPECT_THAT(Nbrs(g, 4), ElementsAre(1, 2));
}

TEST(AddNodeWithEdges, RejectsUnknownNeighbor) {
  const std::vector<NodeId> nbrs{7};
  EXPECT_EQ(CodeOf([&] { AddNodeWithEdges(Path4(), nbrs); }),
            ErrorCode::kInvalidEdge);
}

TEST(AddNodeWithEdges, MatchesDenseOracleOnRandomGraphs) {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const NodeId n = 1 + static_cast<NodeId>(seed % 20);
    const Graph g = testing::RandomGraph(n, 0.3, 100 + seed);
    std::set<NodeId> chosen;
    for (NodeId v = 0; v < n; ++v) {
      if (rng() % 3 == 0) chosen.insert(v);
    }
    const std::vector<NodeId> nbrs(chosen.begin(), chosen.end());
    const Graph h = AddNodeWithEdges(g, nbrs);

    DenseAdjacency expected = ToDense(g);
    for (auto& row : expected) row.push_back(0);
    expected.emplace_back(static_cast<std::size_t>(n + 1), 0);
    for (NodeId u : nbrs) {
      expected[n][u] = 1;
      expected[u][n] = 1;
    }
    ASSERT_EQ(ToDense(h), expected);
    // One more row, 2 * |neighbors| more directed entries.
    ASSERT_EQ(h.num_nodes(), g.num_nodes() + 1);
    ASSERT_EQ(h.num_entries(),
              g.num_entries() + 2 * static_cast<std::int64_t>(nbrs.size()));
  }
}

TEST(AddNodesWithEdges, AppendsInOrder) {
  const std::vector<std::vector<NodeId>> lists{{0}, {3, 1}};
  const Graph g = AddNodesWithEdges(Path4(), lists);
  EXPECT_EQ(g.num_nodes(), 6);
  EXPECT_THAT(Nbrs(g, 4), ElementsAre(0));
  EXPECT_THAT(Nbrs(g, 5), ElementsAre(1, 3));
  EXPECT_THAT(Nbrs(g, 3), ElementsAre(2, 5));
}

TEST(RestrictToGroups, KeepsOnlySameGroupEdges) {
  const std::vector<std::int32_t> groups{0, 0, 1, 1};
  const Graph g = RestrictToGroups(Path4(), groups);
  EXPECT_THAT(Nbrs(g, 1), ElementsAre(0));
  EXPECT_THAT(Nbrs(g, 2), ElementsAre(3));
}

TEST(ValidateMasks, RejectsOverlapAndUnlabeled) {
  LabelVector labels{{0, 1, LabelVector::kUnlabeled}, 2};
  NodeMaskSet masks{{true, false, false}, {true, false, false},
                    {false, false, false}};
  EXPECT_EQ(CodeOf([&] { ValidateMasks(masks, labels); }),
            ErrorCode::kInvalidArgument);
  masks.val = {false, false, true};
  EXPECT_EQ(CodeOf([&] { ValidateMasks(masks, labels); }),
            ErrorCode::kInvalidArgument);
  masks.val = {false, true, false};
  EXPECT_NO_THROW(ValidateMasks(masks, labels));
}

TEST(ValidateLabels, RejectsLabelAboveClassCount) {
  LabelVector labels{{0, 3}, 3};
  EXPECT_EQ(CodeOf([&] { ValidateLabels(labels); }),
            ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace ecgn
