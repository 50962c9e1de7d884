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

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "ecgn/error.h"
#include "ecgn/gnn.h"
#include "oracles.h"
#include "suites.h"

namespace ecgn {
namespace {

using testing::DenseForward;
using testing::RandomGraph;
using testing::RandomMatrix;
using testing::ToDense;

Graph Path4() {
  const std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3}};
  return BuildGraph(edges, 4);
}

LabelVector Labels(std::vector<ClassId> y, ClassId c) {
  return LabelVector{std::move(y), c};
}

TEST(SageLayerForward, IsolatedNodeSeesZeroNeighborhood) {
  const Graph g = BuildGraph(std::vector<Edge>{}, 1);
  Matrix h(1, 2);
  h << 2.0, -1.0;
  // Bottom rows would add the neighborhood mean; it is zero here.
  Matrix w(4, 2);
  w << Matrix::Identity(2, 2), Matrix::Identity(2, 2);
  const Matrix out = SageLayerForward(h, g, w, Activation::kIdentity);
  EXPECT_DOUBLE_EQ(out(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(out(0, 1), -1.0);
}

TEST(SageLayerForward, TwoNodeExample) {
  const Graph g = BuildGraph(std::vector<Edge>{{0, 1}}, 2);
  Matrix h(2, 1);
  h << 1.0, 3.0;
  Matrix w(2, 1);
  w << 1.0, 1.0;
  const Matrix out = SageLayerForward(h, g, w, Activation::kIdentity);
  EXPECT_DOUBLE_EQ(out(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(out(1, 0), 4.0);
}

TEST(SageLayerForward, RestrictedViewDropsCrossClusterNeighbors) {
  ClusterAssignment a;
  a.cluster_of = {0, 0, 1, 1};
  a.num_clusters = 2;
  Matrix h(4, 1);
  h << 10.0, 20.0, 1000.0, 2000.0;
  Matrix w(2, 1);
  w << 0.0, 1.0;  // output is the neighborhood mean alone
  const Matrix out = SageLayerForward(h, Path4(), w, Activation::kIdentity, &a);
  EXPECT_DOUBLE_EQ(out(1, 0), 10.0);
  EXPECT_DOUBLE_EQ(out(2, 0), 2000.0);
  const Matrix full = SageLayerForward(h, Path4(), w, Activation::kIdentity);
  EXPECT_DOUBLE_EQ(full(1, 0), (10.0 + 1000.0) / 2);
}

TEST(SageLayerForward, ReluClampsNegatives) {
  const Graph g = BuildGraph(std::vector<Edge>{{0, 1}}, 2);
  Matrix h(2, 1);
  h << -1.0, 3.0;
  Matrix w(2, 1);
  w << 1.0, 0.0;
  const Matrix out = SageLayerForward(h, g, w, Activation::kRelu);
  EXPECT_DOUBLE_EQ(out(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(out(1, 0), 3.0);
}

TEST(SageLayerForward, ShapeMismatchThrows) {
  const Matrix h = Matrix::Ones(4, 3);
  try {
    SageLayerForward(h, Path4(), Matrix::Ones(5, 2), Activation::kRelu);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeError);
  }
  EXPECT_THROW(
      SageLayerForward(Matrix::Ones(3, 3), Path4(), Matrix::Ones(6, 2),
                       Activation::kRelu),
      Error);
}

TEST(Forward, ZeroWeightsGiveBiasRows) {
  GnnParams p = InitParams(5, 4, 2, 3, 1);
  for (Matrix* t : p.Tensors()) t->setZero();
  p.bias << 0.5, -1.0, 2.0;
  const Matrix x = Matrix::Ones(4, 5);
  const ForwardResult r = Forward(Path4(), x, p);
  for (Eigen::Index i = 0; i < 4; ++i) {
    EXPECT_EQ(Matrix(r.logits.row(i)), p.bias);
  }
}

TEST(Forward, SingleLayerIsLayerPlusClassifier) {
  std::mt19937_64 rng(3);
  const Matrix x = RandomMatrix(4, 3, rng);
  GnnParams p = InitParams(3, 5, 1, 2, 9);
  p.bias << 0.1, 0.2;
  const ForwardResult r = Forward(Path4(), x, p);
  const Matrix h = SageLayerForward(x, Path4(), p.layer_weights[0], p.activation);
  Matrix logits = h * p.classifier;
  logits.rowwise() += p.bias.row(0);
  EXPECT_LT((r.embeddings - h).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((r.logits - logits).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Forward, MatchesDenseReferenceOnEightNodeGraphs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = RandomGraph(8, 0.35, rng());
    const Matrix x = RandomMatrix(8, 6, rng);
    GnnParams p = InitParams(6, 5, 2, 3, rng());
    p.bias = RandomMatrix(1, 3, rng);
    const ForwardResult fast = Forward(g, x, p);
    const auto ref = DenseForward(ToDense(g), x, p);
    ASSERT_LT((Eigen::MatrixXd(fast.logits) - ref.logits).cwiseAbs().maxCoeff(),
              1e-10);
  }
}

TEST(Forward, SparseAndDenseFeaturePathsAgree) {
  std::mt19937_64 rng(12);
  const Graph g = RandomGraph(40, 0.1, 2);
  Matrix x = Matrix::Zero(40, 50);
  for (int i = 0; i < 60; ++i) x(rng() % 40, rng() % 50) = 1.0;
  const NodeFeatures sparse(x);
  const NodeFeatures dense(x, /*max_sparse_density=*/0.0);
  ASSERT_TRUE(sparse.is_sparse());
  ASSERT_FALSE(dense.is_sparse());
  const GnnParams p = InitParams(50, 8, 2, 3, 5);
  EXPECT_LT((Forward(g, sparse, p).logits - Forward(g, dense, p).logits)
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(Forward, PermutationEquivariant) {
  std::mt19937_64 rng(13);
  const NodeId n = 12;
  const auto edges = testing::RandomEdges(n, 0.3, 4);
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Edge> permuted;
  for (const auto& [u, v] : edges) permuted.emplace_back(perm[u], perm[v]);
  const Graph g = BuildGraph(edges, n);
  const Graph gp = BuildGraph(permuted, n);
  const Matrix x = RandomMatrix(n, 4, rng);
  Matrix xp(n, 4);
  for (NodeId v = 0; v < n; ++v) xp.row(perm[v]) = x.row(v);
  const GnnParams p = InitParams(4, 6, 2, 3, 8);
  const Matrix a = Forward(g, x, p).logits;
  const Matrix b = Forward(gp, xp, p).logits;
  for (NodeId v = 0; v < n; ++v) {
    ASSERT_LT((a.row(v) - b.row(perm[v])).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(InitParams, ShapesChainAndBiasIsZero) {
  const GnnParams p = InitParams(7, 5, 3, 4, 1);
  ASSERT_EQ(p.num_layers(), 3);
  EXPECT_EQ(p.layer_weights[0].rows(), 14);
  EXPECT_EQ(p.layer_weights[0].cols(), 5);
  EXPECT_EQ(p.layer_weights[2].rows(), 10);
  EXPECT_EQ(p.classifier.rows(), 5);
  EXPECT_EQ(p.classifier.cols(), 4);
  EXPECT_TRUE(p.bias.isZero());
  EXPECT_NO_THROW(ValidateParams(p));
  EXPECT_EQ(p, InitParams(7, 5, 3, 4, 1));
  EXPECT_NE(p, InitParams(7, 5, 3, 4, 2));
  // Glorot bound for the first layer.
  EXPECT_LE(p.layer_weights[0].cwiseAbs().maxCoeff(), std::sqrt(6.0 / 19));
}

TEST(InitParams, ZeroLayersReadsRawFeatures) {
  const GnnParams p = InitParams(7, 5, 0, 4, 1);
  EXPECT_EQ(p.classifier.rows(), 7);
  EXPECT_EQ(p.embedding_dim(), 7);
}

TEST(Loss, UniformLogitsGiveLogC) {
  for (ClassId c : {2, 3, 7}) {
    const Matrix logits = Matrix::Constant(5, c, 0.3);
    const LabelVector y = Labels({0, 1, 1, 0, 1}, c);
    const NodeMask mask(5, true);
    EXPECT_NEAR(Loss(logits, y, mask, {}), std::log(static_cast<double>(c)),
                1e-12);
  }
}

TEST(Loss, PeakedCorrectLogitsApproachZero) {
  const LabelVector y = Labels({0, 1}, 2);
  const NodeMask mask(2, true);
  double previous = INFINITY;
  for (double peak : {1.0, 10.0, 100.0, 1000.0}) {
    Matrix logits(2, 2);
    logits << peak, 0, 0, peak;
    const double l = Loss(logits, y, mask, {});
    EXPECT_TRUE(std::isfinite(l));
    EXPECT_LE(l, previous);
    previous = l;
  }
  EXPECT_LT(previous, 1e-12);
}

TEST(Loss, BalancedClusterIsSumOfTwoMeans) {
  std::mt19937_64 rng(21);
  const Matrix logits = RandomMatrix(10, 3, rng);
  const LabelVector y = Labels({2, 2, 0, 0, 1, 0, 1, 1, 0, 1}, 3);
  const NodeMask mask(10, true);
  const ClassId minority[] = {2};
  const LossWeighting w = MakeWeighting(WeightMode::kBalancedCluster, y, mask,
                                        0.9999, minority);
  auto ce = [&](int i) {
    const double lse = std::log(logits.row(i).array().exp().sum());
    return lse - logits(i, y[i]);
  };
  const double minority_mean = (ce(0) + ce(1)) / 2;
  double majority = 0;
  for (int i = 2; i < 10; ++i) majority += ce(i);
  EXPECT_NEAR(Loss(logits, y, mask, w), minority_mean + majority / 8, 1e-12);
}

TEST(Loss, ClassWeightedMeans) {
  const LabelVector y = Labels({0, 0, 0, 1}, 2);
  const NodeMask mask(4, true);
  const LossWeighting inv =
      MakeWeighting(WeightMode::kInverseFreq, y, mask, 0.0);
  EXPECT_NEAR(inv.class_weights[0], 1.0 / 3, 1e-15);
  EXPECT_NEAR(inv.class_weights[1], 1.0, 1e-15);
  const LossWeighting en =
      MakeWeighting(WeightMode::kEffectiveNumber, y, mask, 0.5);
  EXPECT_NEAR(en.class_weights[0], 0.5 / (1 - 0.125), 1e-15);
  EXPECT_NEAR(en.class_weights[1], 1.0, 1e-15);

  Matrix logits(4, 2);
  logits << 1, 0, 2, 0, 0, 0, 0, 3;
  auto ce = [&](int i) {
    return std::log(logits.row(i).array().exp().sum()) - logits(i, y[i]);
  };
  const double expected = ((ce(0) + ce(1) + ce(2)) / 3 + ce(3)) / 2;
  EXPECT_NEAR(Loss(logits, y, mask, inv), expected, 1e-12);
}

TEST(Loss, EmptyMaskThrows) {
  const LabelVector y = Labels({0, 1}, 2);
  try {
    Loss(Matrix::Zero(2, 2), y, NodeMask(2, false), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyMask);
  }
}

TEST(Loss, OversamplingRepeatsTargets) {
  const LabelVector y = Labels({0, 1, 1}, 2);
  const NodeMask mask(3, true);
  const int multiplicity[] = {3, 1, 1};
  const LossTargets t = BuildTargets(y, mask, {}, multiplicity);
  EXPECT_EQ(t.size(), 5u);
  EXPECT_NEAR(std::accumulate(t.coeff.begin(), t.coeff.end(), 0.0), 1.0, 1e-15);
}

TEST(Backward, MatchesFiniteDifferences) {
  const testing::SuiteOutcome r = testing::GradientSuite(20, 99);
  EXPECT_TRUE(r.ok()) << r.first_failure;
  EXPECT_EQ(r.cases, 20);
  EXPECT_LE(r.worst, 1e-4);
}

TEST(Backward, ZeroClassifierStopsLayerGradients) {
  std::mt19937_64 rng(31);
  const Graph g = RandomGraph(10, 0.3, 1);
  GnnParams p = InitParams(4, 5, 2, 2, 3);
  p.classifier.setZero();
  const LabelVector y = Labels({0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, 2);
  const LossTargets t = BuildTargets(y, NodeMask(10, true), {});
  const Gradients grads = Backward(g, NodeFeatures(RandomMatrix(10, 4, rng)), p, t);
  for (const Matrix& w : grads.grads.layer_weights) EXPECT_TRUE(w.isZero());
  // Symmetric labels and equal logits: the bias gradient cancels too.
  EXPECT_LT(grads.grads.bias.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Backward, UnusedFeatureGetsNoGradientWithoutLayers) {
  std::mt19937_64 rng(32);
  const Graph g = RandomGraph(6, 0.5, 2);
  Matrix x = RandomMatrix(6, 4, rng);
  NodeMask mask = {true, true, true, false, false, false};
  // Feature 2 is only non-zero on unmasked nodes.
  x.col(2).setZero();
  x(4, 2) = 5.0;
  GnnParams p = InitParams(4, 3, 0, 3, 7);
  const LabelVector y = Labels({0, 1, 2, 0, 1, 2}, 3);
  const Gradients grads =
      Backward(g, NodeFeatures(x), p, BuildTargets(y, mask, {}));
  EXPECT_TRUE(grads.grads.classifier.row(2).isZero());
  EXPECT_FALSE(grads.grads.classifier.row(0).isZero());
}

TEST(Backward, ReportsLossAndForward) {
  std::mt19937_64 rng(33);
  const Graph g = RandomGraph(8, 0.3, 3);
  const NodeFeatures x(RandomMatrix(8, 3, rng));
  const GnnParams p = InitParams(3, 4, 2, 2, 1);
  const LabelVector y = Labels({0, 1, 0, 1, 0, 1, 0, 1}, 2);
  const LossTargets t = BuildTargets(y, NodeMask(8, true), {});
  const Gradients grads = Backward(g, x, p, t);
  EXPECT_NEAR(grads.loss, CrossEntropy(Forward(g, x, p).logits, t), 1e-14);
  EXPECT_EQ(grads.forward.logits, Forward(g, x, p).logits);
}

TEST(AdamStep, ZeroGradientLeavesParameters) {
  GnnParams p = InitParams(3, 4, 2, 2, 1);
  const GnnParams before = p;
  OptimizerState state = OptimizerState::For(p);
  AdamStep(p, p.ZerosLike(), state, 0.01);
  EXPECT_EQ(p, before);
  EXPECT_EQ(state.step, 1);
}

TEST(AdamStep, FirstStepMovesEachCoordinateByLearningRate) {
  std::mt19937_64 rng(41);
  GnnParams p = InitParams(3, 4, 1, 2, 1);
  const GnnParams before = p;
  GnnParams g = p.ZerosLike();
  for (Matrix* t : g.Tensors()) *t = RandomMatrix(t->rows(), t->cols(), rng);
  OptimizerState state = OptimizerState::For(p);
  AdamStep(p, g, state, 0.01);
  const auto after_t = p.Tensors();
  const auto before_t = before.Tensors();
  const auto grad_t = g.Tensors();
  for (std::size_t t = 0; t < after_t.size(); ++t) {
    for (Eigen::Index i = 0; i < after_t[t]->size(); ++i) {
      const double delta = after_t[t]->data()[i] - before_t[t]->data()[i];
      const double sign = grad_t[t]->data()[i] > 0 ? -1.0 : 1.0;
      ASSERT_NEAR(delta, sign * 0.01, 1e-6);
    }
  }
}

TEST(AdamStep, QuadraticBowlDescends) {
  // f(theta) = sum(theta^2) / 2 over every tensor, so grad = theta.
  GnnParams p = InitParams(4, 3, 1, 2, 5);
  p.bias << 1.0, -2.0;
  OptimizerState state = OptimizerState::For(p);
  auto f = [](const GnnParams& q) {
    double s = 0;
    for (const Matrix* t : q.Tensors()) s += t->squaredNorm() / 2;
    return s;
  };
  std::vector<double> history = {f(p)};
  for (int step = 0; step < 100; ++step) {
    AdamStep(p, p, state, 0.01);
    history.push_back(f(p));
  }
  for (std::size_t i = 11; i < history.size(); ++i) {
    ASSERT_LT(history[i], history[i - 1]) << "step " << i;
  }
  EXPECT_LT(history.back(), history.front());
}

TEST(AdamStep, MismatchedStateThrows) {
  GnnParams p = InitParams(3, 4, 1, 2, 1);
  OptimizerState state = OptimizerState::For(InitParams(3, 4, 2, 2, 1));
  EXPECT_THROW(AdamStep(p, p.ZerosLike(), state, 0.01), Error);
}

}  // namespace
}  // namespace ecgn
