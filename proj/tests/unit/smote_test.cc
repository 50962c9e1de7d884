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

#include <random>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "ecgn/error.h"
#include "ecgn/smote.h"
#include "oracles.h"
#include "suites.h"

namespace ecgn {
namespace {

using ::testing::ElementsAre;
using ::testing::UnorderedElementsAre;
using testing::RandomGraph;
using testing::RandomMatrix;
using testing::ToDense;

std::vector<NodeId> Nbrs(const Graph& g, NodeId v) {
  return {g.neighbors(v).begin(), g.neighbors(v).end()};
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

Graph Path4() {
  const std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3}};
  return BuildGraph(edges, 4);
}

TEST(ConnectivityScores, PathExample) {
  const LabelVector y{{0, 0, 1, 1}, 2};
  const NodeMask train(4, true);
  const auto scores = ConnectivityScores(Path4(), y, train, nullptr, 0,
                                         ConnectivityMode::kOutOfClass);
  EXPECT_THAT(scores, ElementsAre(NodeScore{0, 0}, NodeScore{1, 1}));
}

TEST(ConnectivityScores, IsolatedNodeScoresZero) {
  const Graph g = BuildGraph(std::vector<Edge>{{1, 2}}, 3);
  const LabelVector y{{0, 1, 1}, 2};
  const auto scores = ConnectivityScores(g, y, NodeMask(3, true), nullptr, 0,
                                         ConnectivityMode::kOutOfClass);
  EXPECT_THAT(scores, ElementsAre(NodeScore{0, 0}));
}

TEST(ConnectivityScores, UnlabeledNeighborsCountAsOutOfClass) {
  const LabelVector y{{0, LabelVector::kUnlabeled, 0, 0}, 2};
  const auto scores = ConnectivityScores(Path4(), y, {true, false, true, true},
                                         nullptr, 0, ConnectivityMode::kOutOfClass);
  EXPECT_THAT(scores, ElementsAre(NodeScore{0, 1}, NodeScore{2, 1},
                                  NodeScore{3, 0}));
}

TEST(ConnectivityScores, MatchDenseRowSums) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const NodeId n = 20;
    const Graph g = RandomGraph(n, 0.25, rng());
    const auto dense = ToDense(g);
    LabelVector y{std::vector<ClassId>(n), 3};
    NodeMask train(n);
    ClusterAssignment a;
    a.num_clusters = 3;
    for (NodeId v = 0; v < n; ++v) {
      y.labels[v] = static_cast<ClassId>(rng() % 3);
      train[v] = rng() % 3 != 0;
      a.cluster_of.push_back(v < 3 ? v : static_cast<ClusterId>(rng() % 3));
    }
    y.labels[0] = 1;
    train[0] = true;
    for (auto mode : {ConnectivityMode::kOutOfClass, ConnectivityMode::kOutOfCluster}) {
      const auto scores = ConnectivityScores(g, y, train, &a, 1, mode);
      std::size_t next = 0;
      for (NodeId v = 0; v < n; ++v) {
        if (!train[v] || y[v] != 1) continue;
        std::int64_t want = 0;
        for (NodeId u = 0; u < n; ++u) {
          const bool outside = mode == ConnectivityMode::kOutOfClass
                                   ? y[u] != 1
                                   : a[u] != a[v];
          want += dense[v][u] * outside;
        }
        ASSERT_LT(next, scores.size());
        ASSERT_EQ(scores[next], (NodeScore{v, want}));
        ++next;
      }
      ASSERT_EQ(next, scores.size());
    }
  }
}

TEST(ConnectivityScores, Errors) {
  const LabelVector y{{0, 0, 1, 1}, 3};
  EXPECT_EQ(CodeOf([&] {
              ConnectivityScores(Path4(), y, NodeMask(4, true), nullptr, 2,
                                 ConnectivityMode::kOutOfClass);
            }),
            ErrorCode::kClassEmpty);
  EXPECT_EQ(CodeOf([&] {
              ConnectivityScores(Path4(), y, NodeMask(4, true), nullptr, 0,
                                 ConnectivityMode::kOutOfCluster);
            }),
            ErrorCode::kInvalidArgument);
}

TEST(SelectSeeds, HighestScoresFirst) {
  const std::vector<NodeScore> s = {{0, 3}, {1, 1}, {2, 2}};
  EXPECT_THAT(SelectSeeds(s, 2), UnorderedElementsAre(0, 2));
}

TEST(SelectSeeds, TiesGoToLowerIds) {
  const std::vector<NodeScore> s = {{4, 1}, {7, 1}, {9, 1}, {12, 1}};
  EXPECT_THAT(SelectSeeds(s, 2), UnorderedElementsAre(4, 7));
}

TEST(SelectSeeds, WholePopulationWhenKIsLarge) {
  const std::vector<NodeScore> s = {{0, 3}, {1, 1}};
  EXPECT_THAT(SelectSeeds(s, 10), UnorderedElementsAre(0, 1));
}

TEST(NearestSameClass, Examples) {
  Matrix h(3, 1);
  h << 0, 1, 5;
  const LabelVector y{{0, 0, 0}, 1};
  EXPECT_EQ(NearestSameClass(h, y, NodeMask(3, true), 0), 1);

  Matrix dup(4, 2);
  dup << 0, 0, 3, 3, 1, 1, 1, 1;
  const LabelVector y4{{0, 0, 0, 0}, 1};
  EXPECT_EQ(NearestSameClass(dup, y4, NodeMask(4, true), 0), 2);
}

TEST(NearestSameClass, MatchesExhaustiveScan) {
  std::mt19937_64 rng(2);
  const NodeId n = 200;
  const Matrix h = RandomMatrix(n, 6, rng);
  LabelVector y{std::vector<ClassId>(n), 3};
  NodeMask train(n);
  for (NodeId v = 0; v < n; ++v) {
    y.labels[v] = static_cast<ClassId>(rng() % 3);
    train[v] = rng() % 4 != 0;
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!train[v]) continue;
    ASSERT_EQ(NearestSameClass(h, y, train, v),
              testing::BruteNearest(h, y, train, v));
  }
}

TEST(NearestSameClass, SingletonClassThrows) {
  const LabelVector y{{0, 1, 1}, 2};
  EXPECT_EQ(CodeOf([&] {
              NearestSameClass(Matrix::Ones(3, 2), y, NodeMask(3, true), 0);
            }),
            ErrorCode::kSingletonClass);
}

TEST(Synthesize, EndpointsAndBox) {
  std::mt19937_64 rng(3);
  const Matrix h = RandomMatrix(2, 5, rng);
  EXPECT_EQ(Synthesize(h, 0, 1, 0.0), RowVector(h.row(0)));
  EXPECT_EQ(Synthesize(h, 0, 1, 1.0), RowVector(h.row(1)));
  for (double delta : {0.1, 0.37, 0.5, 0.99}) {
    const RowVector s = Synthesize(h, 0, 1, delta);
    for (Eigen::Index d = 0; d < 5; ++d) {
      EXPECT_GE(s[d], std::min(h(0, d), h(1, d)));
      EXPECT_LE(s[d], std::max(h(0, d), h(1, d)));
      EXPECT_NEAR(s[d], (1 - delta) * h(0, d) + delta * h(1, d), 1e-15);
    }
  }
}

TEST(Augment, SyntheticNodeInheritsSeedNeighborhood) {
  // Seed 0 has neighbors {1, 2}; node 3 is its nearest class-1 partner.
  const std::vector<Edge> edges = {{0, 1}, {0, 2}, {3, 4}, {4, 5}, {5, 6}};
  const Graph g = BuildGraph(edges, 8);
  Matrix h(8, 1);
  h << 0, 10, 10, 1, 10, 10, 10, 10;
  const LabelVector y{{1, 0, 0, 1, 0, 0, 0, 0}, 2};
  NodeMaskSet masks{NodeMask(8, true), NodeMask(8, false), NodeMask(8, false)};
  SmoteConfig cfg;
  cfg.alpha = 0.5;  // one synthetic node
  cfg.seed_count_k = 1;
  cfg.minority_classes = {1};
  const AugmentationResult r = Augment(g, h, y, masks, nullptr, cfg);
  ASSERT_EQ(r.synth_origin.size(), 1u);
  EXPECT_EQ(r.synth_origin[0].seed, 0);
  EXPECT_EQ(r.synth_origin[0].neighbor, 3);
  EXPECT_THAT(Nbrs(r.graph, 8), ElementsAre(0, 1, 2));
  EXPECT_EQ(r.labels[8], 1);
  EXPECT_TRUE(r.masks.train[8]);
  EXPECT_FALSE(r.masks.val[8]);
}

TEST(Augment, TwentyTrainNodesBecomeOneHundred) {
  // Cora-like: 200 majority train nodes, 20 per minority class, alpha 4.
  std::mt19937_64 rng(4);
  const NodeId n = 260;
  const Graph g = RandomGraph(n, 0.02, 5);
  const Matrix h = RandomMatrix(n, 8, rng);
  LabelVector y{std::vector<ClassId>(n), 3};
  for (NodeId v = 0; v < n; ++v) y.labels[v] = v < 200 ? 0 : v < 230 ? 1 : 2;
  NodeMaskSet masks{NodeMask(n, false), NodeMask(n, false), NodeMask(n, false)};
  for (NodeId v = 0; v < n; ++v) {
    const bool train = v < 200 || (v >= 200 && v < 220) || (v >= 230 && v < 250);
    (train ? masks.train : masks.test)[v] = true;
  }
  SmoteConfig cfg;
  cfg.minority_classes = {1, 2};
  const AugmentationResult r = Augment(g, h, y, masks, nullptr, cfg);
  EXPECT_EQ(r.synth_origin.size(), 160u);
  std::vector<int> train_per_class(3);
  for (std::size_t v = 0; v < r.labels.size(); ++v) {
    if (r.masks.train[v]) ++train_per_class[r.labels[v]];
  }
  EXPECT_THAT(train_per_class, ElementsAre(200, 100, 100));

  // Explicit target counts express the same thing.
  SmoteConfig target;
  target.minority_classes = {1, 2};
  target.target_counts = {{1, 100}, {2, 100}};
  EXPECT_EQ(Augment(g, h, y, masks, nullptr, target).synth_origin.size(), 160u);
}

TEST(Augment, UntouchedNodesKeepTheirDegree) {
  std::mt19937_64 rng(6);
  const NodeId n = 80;
  const Graph g = RandomGraph(n, 0.06, 7);
  const Matrix h = RandomMatrix(n, 3, rng);
  LabelVector y{std::vector<ClassId>(n), 2};
  for (NodeId v = 0; v < n; ++v) y.labels[v] = v % 8 == 0 ? 1 : 0;
  NodeMaskSet masks{NodeMask(n, true), NodeMask(n, false), NodeMask(n, false)};
  SmoteConfig cfg;
  cfg.alpha = 2.0;
  cfg.seed_count_k = 3;
  cfg.minority_classes = {1};
  const AugmentationResult r = Augment(g, h, y, masks, nullptr, cfg);
  std::vector<int> added(n, 0);
  for (const SynthOrigin& o : r.synth_origin) {
    ++added[o.seed];
    for (NodeId u : g.neighbors(o.seed)) ++added[u];
  }
  for (NodeId v = 0; v < n; ++v) {
    ASSERT_EQ(r.graph.degree(v), g.degree(v) + added[v]) << "node " << v;
  }
}

TEST(Augment, SeedsCycleRoundRobin) {
  std::mt19937_64 rng(8);
  const NodeId n = 60;
  const Graph g = RandomGraph(n, 0.1, 9);
  const Matrix h = RandomMatrix(n, 3, rng);
  LabelVector y{std::vector<ClassId>(n), 2};
  for (NodeId v = 0; v < n; ++v) y.labels[v] = v < 6 ? 1 : 0;
  NodeMaskSet masks{NodeMask(n, true), NodeMask(n, false), NodeMask(n, false)};
  SmoteConfig cfg;
  cfg.alpha = 3.0;
  cfg.seed_count_k = 4;
  cfg.minority_classes = {1};
  const AugmentationResult r = Augment(g, h, y, masks, nullptr, cfg);
  ASSERT_EQ(r.synth_origin.size(), 18u);
  for (std::size_t j = 4; j < 18; ++j) {
    EXPECT_EQ(r.synth_origin[j].seed, r.synth_origin[j - 4].seed);
  }
}

TEST(Augment, CapAndNothingToAugment) {
  const Graph g = RandomGraph(30, 0.2, 10);
  const Matrix h = Matrix::Random(30, 2);
  LabelVector y{std::vector<ClassId>(30, 0), 2};
  for (NodeId v = 0; v < 4; ++v) y.labels[v] = 1;
  NodeMaskSet masks{NodeMask(30, true), NodeMask(30, false), NodeMask(30, false)};
  SmoteConfig cfg;
  cfg.minority_classes = {1};
  cfg.alpha = 3.25;  // 13 synthetic vs a majority of 26: 13 >= 26 / 2
  EXPECT_EQ(CodeOf([&] { Augment(g, h, y, masks, nullptr, cfg); }),
            ErrorCode::kCapExceeded);
  cfg.alpha = 3.0;  // 12 < 13
  EXPECT_NO_THROW(Augment(g, h, y, masks, nullptr, cfg));

  // A minority class with a single train node cannot be interpolated.
  NodeMaskSet lonely = masks;
  for (NodeId v = 1; v < 4; ++v) {
    lonely.train[v] = false;
    lonely.test[v] = true;
  }
  cfg.alpha = 2.0;
  EXPECT_EQ(CodeOf([&] { Augment(g, h, y, lonely, nullptr, cfg); }),
            ErrorCode::kNothingToAugment);
}

TEST(Augment, DeterministicForSeed) {
  std::mt19937_64 rng(11);
  const Graph g = RandomGraph(50, 0.1, 12);
  const Matrix h = RandomMatrix(50, 4, rng);
  LabelVector y{std::vector<ClassId>(50), 3};
  for (NodeId v = 0; v < 50; ++v) y.labels[v] = v < 36 ? 0 : v < 44 ? 1 : 2;
  NodeMaskSet masks{NodeMask(50, true), NodeMask(50, false), NodeMask(50, false)};
  SmoteConfig cfg;
  cfg.alpha = 1.5;
  cfg.minority_classes = {1, 2};
  cfg.seed = 77;
  const AugmentationResult a = Augment(g, h, y, masks, nullptr, cfg);
  const AugmentationResult b = Augment(g, h, y, masks, nullptr, cfg);
  EXPECT_EQ(a.synth_origin, b.synth_origin);
  EXPECT_EQ(a.embeddings, b.embeddings);
  cfg.seed = 78;
  EXPECT_NE(Augment(g, h, y, masks, nullptr, cfg).synth_origin, a.synth_origin);
}

TEST(Augment, PropertySuite) {
  const testing::SuiteOutcome r = testing::SmoteSuite(300, 5);
  EXPECT_TRUE(r.ok()) << r.first_failure;
  EXPECT_EQ(r.cases, 300);
  // Most cases must reach the structural checks, not stop at an exception.
  EXPECT_LT(r.expected_errors, 100);
  EXPECT_GT(r.expected_errors, 0);
}

}  // namespace
}  // namespace ecgn
