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

#ifndef ECGN_GNN_H_
#define ECGN_GNN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "ecgn/graph.h"
#include "ecgn/partition.h"

namespace ecgn {

enum class Activation { kRelu, kIdentity };
enum class Aggregator { kMean };

// GraphSAGE stack. Layer k maps concat(h_v, mean_{u in N(v)} h_u), a row of
// width 2 * d_in, through a (2 * d_in) x d_out weight; the top rows act on
// the node's own state and the bottom rows on the neighborhood mean. A
// linear softmax classifier sits on top of the last layer.
struct GnnParams {
  std::vector<Matrix> layer_weights;
  Matrix classifier;  // d_final x c
  Matrix bias;        // 1 x c
  Activation activation = Activation::kRelu;
  Aggregator aggregator = Aggregator::kMean;

  int num_layers() const { return static_cast<int>(layer_weights.size()); }
  Eigen::Index input_dim() const;
  Eigen::Index embedding_dim() const;
  Eigen::Index num_classes() const { return classifier.cols(); }

  // Every trainable tensor, layers first, then classifier and bias.
  std::vector<Matrix*> Tensors();
  std::vector<const Matrix*> Tensors() const;

  // Same shapes, all zeros.
  GnnParams ZerosLike() const;

  friend bool operator==(const GnnParams&, const GnnParams&) = default;
};

// Throws kShapeError unless the layer shapes chain and the classifier
// matches the last layer.
void ValidateParams(const GnnParams& p);

// Glorot-uniform weights from `seed`, zero bias. num_layers may be 0, in
// which case the classifier reads the raw features.
GnnParams InitParams(Eigen::Index input_dim, Eigen::Index hidden_dim,
                     int num_layers, Eigen::Index num_classes,
                     std::uint64_t seed,
                     Activation activation = Activation::kRelu);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Node feature operand. Keeps a sparse copy when the matrix is sparse
// enough, so products with bag-of-words inputs skip the zeros.
class NodeFeatures {
 public:
  NodeFeatures() = default;
  explicit NodeFeatures(Matrix dense, double max_sparse_density = 0.1);

  Eigen::Index rows() const { return dense_.rows(); }
  Eigen::Index cols() const { return dense_.cols(); }
  const Matrix& dense() const { return dense_; }
  bool is_sparse() const { return sparse_.has_value(); }

  Matrix Times(const Matrix& w) const;           // X * W
  Matrix TransposeTimes(const Matrix& m) const;  // X^T * M

 private:
  Matrix dense_;
  std::optional<SparseMatrix> sparse_;
};

// out[v] = mean_{u in N(v)} m[u]; isolated nodes get the zero vector.
Matrix MeanAggregate(const Graph& g, const Matrix& m);
// Adjoint of MeanAggregate: out[u] = sum_{v : u in N(v)} m[v] / deg(v).
Matrix MeanAggregateTranspose(const Graph& g, const Matrix& m);

// One GraphSAGE layer. With `restrict` set, N(v) only contains neighbors in
// v's own cluster. Throws kShapeError on mismatched shapes.
Matrix SageLayerForward(const Matrix& h, const Graph& g, const Matrix& w,
                        Activation activation,
                        const ClusterAssignment* restrict = nullptr);

struct ForwardResult {
  EmbeddingMatrix embeddings;  // h^(K)
  Matrix logits;
};

ForwardResult Forward(const Graph& g, const NodeFeatures& x,
                      const GnnParams& p,
                      const ClusterAssignment* restrict = nullptr);
ForwardResult Forward(const Graph& g, const FeatureMatrix& x,
                      const GnnParams& p,
                      const ClusterAssignment* restrict = nullptr);

enum class WeightMode {
  kUniform,
  kInverseFreq,
  kEffectiveNumber,
  kBalancedCluster,
};

// How masked nodes contribute to the loss.
//  kUniform: plain mean.
//  kInverseFreq / kEffectiveNumber: class-weighted mean,
//    sum_i w_{y_i} l_i / sum_i w_{y_i}.
//  kBalancedCluster: mean over minority-class nodes plus mean over the rest.
struct LossWeighting {
  WeightMode mode = WeightMode::kUniform;
  std::vector<double> class_weights;
  std::vector<ClassId> minority_classes;
};

// Class weights from masked class counts: 1/n_c for kInverseFreq,
// (1 - beta) / (1 - beta^n_c) for kEffectiveNumber. Classes without masked
// nodes get weight 0.
LossWeighting MakeWeighting(WeightMode mode, const LabelVector& labels,
                            const NodeMask& mask, double en_beta,
                            std::span<const ClassId> minority_classes = {});

// Loss = sum_j coeff[j] * CE(logits[nodes[j]], labels[j]). Nodes may repeat.
struct LossTargets {
  std::vector<NodeId> nodes;
  std::vector<ClassId> labels;
  std::vector<double> coeff;

  std::size_t size() const { return nodes.size(); }
};

// Throws kEmptyMask when the mask selects nothing. `multiplicity`, when
// given, repeats node i multiplicity[i] times (oversampling).
LossTargets BuildTargets(const LabelVector& labels, const NodeMask& mask,
                         const LossWeighting& weighting,
                         std::span<const int> multiplicity = {});

// Softmax cross-entropy with max subtraction, evaluated in log space.
double CrossEntropy(const Matrix& logits, const LossTargets& targets);
double Loss(const Matrix& logits, const LabelVector& labels,
            const NodeMask& mask, const LossWeighting& weighting);

struct Gradients {
  GnnParams grads;
  double loss = 0.0;
  ForwardResult forward;
};

// Exact reverse-mode gradients of CrossEntropy(Forward(...)) with respect
// to every tensor of `p`.
Gradients Backward(const Graph& g, const NodeFeatures& x, const GnnParams& p,
                   const LossTargets& targets);

struct OptimizerState {
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
  std::int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static OptimizerState For(const GnnParams& p);
};

// Bias-corrected Adam update, in place.
void AdamStep(GnnParams& p, const GnnParams& grads, OptimizerState& state,
              double learning_rate);

}  // namespace ecgn

#endif  // ECGN_GNN_H_
