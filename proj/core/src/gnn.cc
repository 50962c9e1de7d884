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

#include "ecgn/gnn.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecgn/error.h"
#include "ecgn/rng.h"

namespace ecgn {
namespace {

std::string Shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void ApplyActivation(Activation a, Matrix& z) {
  if (a == Activation::kRelu) z = z.cwiseMax(0.0);
}

// dZ = dH * act'(Z).
Matrix ActivationBackward(Activation a, const Matrix& z, const Matrix& dh) {
  if (a == Activation::kIdentity) return dh;
  return (z.array() > 0.0).select(dh, 0.0);
}

Matrix GlorotUniform(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix w(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      w(i, j) = UniformReal(rng, -limit, limit);
    }
  }
  return w;
}

// Pre-activation of one layer: H * W_self + A_mean * (H * W_neigh), which
// equals concat(H, A_mean H) * W without materializing the concatenation.
template <typename ProductFn>
Matrix LayerPreactivation(Eigen::Index in_dim, const ProductFn& times,
                          const Graph& g, const Matrix& w) {
  Matrix z = times(w.topRows(in_dim));
  z += MeanAggregate(g, times(w.bottomRows(in_dim)));
  return z;
}

void CheckLayerShape(Eigen::Index rows, Eigen::Index in_dim, const Graph& g,
                     const Matrix& w) {
  if (rows != g.num_nodes()) {
    throw Error(ErrorCode::kShapeError,
                "feature rows " + std::to_string(rows) + " != nodes " +
                    std::to_string(g.num_nodes()));
  }
  if (w.rows() != 2 * in_dim) {
    throw Error(ErrorCode::kShapeError, "layer weight " + Shape(w) +
                                            " does not take 2x" +
                                            std::to_string(in_dim) + " input");
  }
}

struct ForwardTrace {
  std::vector<Matrix> hidden;  // hidden[k] = h^(k+1)
  std::vector<Matrix> preact;  // preact[k] = z^(k+1)
  Matrix logits;
};

ForwardTrace Trace(const Graph& g, const NodeFeatures& x, const GnnParams& p) {
  ValidateParams(p);
  if (x.cols() != p.input_dim()) {
    throw Error(ErrorCode::kShapeError,
                "features have " + std::to_string(x.cols()) +
                    " columns, model expects " +
                    std::to_string(p.input_dim()));
  }
  if (x.rows() != g.num_nodes()) {
    throw Error(ErrorCode::kShapeError, "feature rows != node count");
  }
  ForwardTrace t;
  for (int k = 0; k < p.num_layers(); ++k) {
    const Matrix& w = p.layer_weights[k];
    Matrix z;
    if (k == 0) {
      z = LayerPreactivation(
          x.cols(), [&](const auto& wpart) { return x.Times(wpart); }, g, w);
    } else {
      const Matrix& h = t.hidden.back();
      z = LayerPreactivation(
          h.cols(), [&](const auto& wpart) -> Matrix { return h * wpart; }, g,
          w);
    }
    Matrix h = z;
    ApplyActivation(p.activation, h);
    t.preact.push_back(std::move(z));
    t.hidden.push_back(std::move(h));
  }
  const Matrix logits_in =
      p.num_layers() == 0 ? x.Times(p.classifier) : t.hidden.back() * p.classifier;
  t.logits = logits_in.rowwise() + p.bias.row(0);
  return t;
}

}  // namespace

Eigen::Index GnnParams::input_dim() const {
  return layer_weights.empty() ? classifier.rows()
                               : layer_weights.front().rows() / 2;
}

Eigen::Index GnnParams::embedding_dim() const {
  return layer_weights.empty() ? classifier.rows()
                               : layer_weights.back().cols();
}

std::vector<Matrix*> GnnParams::Tensors() {
  std::vector<Matrix*> out;
  for (auto& w : layer_weights) out.push_back(&w);
  out.push_back(&classifier);
  out.push_back(&bias);
  return out;
}

std::vector<const Matrix*> GnnParams::Tensors() const {
  std::vector<const Matrix*> out;
  for (const auto& w : layer_weights) out.push_back(&w);
  out.push_back(&classifier);
  out.push_back(&bias);
  return out;
}

GnnParams GnnParams::ZerosLike() const {
  GnnParams z = *this;
  for (Matrix* t : z.Tensors()) t->setZero();
  return z;
}

void ValidateParams(const GnnParams& p) {
  Eigen::Index width = p.input_dim();
  for (const Matrix& w : p.layer_weights) {
    if (w.rows() != 2 * width) {
      throw Error(ErrorCode::kShapeError,
                  "layer weight " + Shape(w) + " breaks the chain at width " +
                      std::to_string(width));
    }
    width = w.cols();
  }
  if (p.classifier.rows() != width) {
    throw Error(ErrorCode::kShapeError,
                "classifier " + Shape(p.classifier) + " after width " +
                    std::to_string(width));
  }
  if (p.bias.rows() != 1 || p.bias.cols() != p.classifier.cols()) {
    throw Error(ErrorCode::kShapeError, "bias " + Shape(p.bias));
  }
}

GnnParams InitParams(Eigen::Index input_dim, Eigen::Index hidden_dim,
                     int num_layers, Eigen::Index num_classes,
                     std::uint64_t seed, Activation activation) {
  if (input_dim < 1 || num_classes < 1 || num_layers < 0 ||
      (num_layers > 0 && hidden_dim < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid model dimensions");
  }
  Rng rng(SplitMix64(seed ^ 0x6a09e667f3bcc908ULL));
  GnnParams p;
  p.activation = activation;
  Eigen::Index width = input_dim;
  for (int k = 0; k < num_layers; ++k) {
    p.layer_weights.push_back(GlorotUniform(2 * width, hidden_dim, rng));
    width = hidden_dim;
  }
  p.classifier = GlorotUniform(width, num_classes, rng);
  p.bias = Matrix::Zero(1, num_classes);
  return p;
}

NodeFeatures::NodeFeatures(Matrix dense, double max_sparse_density)
    : dense_(std::move(dense)) {
  const Eigen::Index total = dense_.size();
  if (total == 0) return;
  const auto nonzeros = (dense_.array() != 0.0).count();
  if (static_cast<double>(nonzeros) <=
      max_sparse_density * static_cast<double>(total)) {
    sparse_ = dense_.sparseView();
    sparse_->makeCompressed();
  }
}

Matrix NodeFeatures::Times(const Matrix& w) const {
  if (sparse_) return Matrix(*sparse_ * w);
  return dense_ * w;
}

Matrix NodeFeatures::TransposeTimes(const Matrix& m) const {
  if (sparse_) return Matrix(sparse_->transpose() * m);
  return dense_.transpose() * m;
}

Matrix MeanAggregate(const Graph& g, const Matrix& m) {
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto nbrs = g.neighbors(v);
    if (nbrs.empty()) continue;
    auto row = out.row(v);
    for (NodeId u : nbrs) row += m.row(u);
    row /= static_cast<double>(nbrs.size());
  }
  return out;
}

Matrix MeanAggregateTranspose(const Graph& g, const Matrix& m) {
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto nbrs = g.neighbors(v);
    if (nbrs.empty()) continue;
    const RowVector share = m.row(v) / static_cast<double>(nbrs.size());
    for (NodeId u : nbrs) out.row(u) += share;
  }
  return out;
}

Matrix SageLayerForward(const Matrix& h, const Graph& g, const Matrix& w,
                        Activation activation,
                        const ClusterAssignment* restrict) {
  CheckLayerShape(h.rows(), h.cols(), g, w);
  const Graph local =
      restrict ? RestrictToGroups(g, restrict->cluster_of) : Graph();
  const Graph& graph = restrict ? local : g;
  Matrix z = LayerPreactivation(
      h.cols(), [&](const auto& wpart) -> Matrix { return h * wpart; }, graph,
      w);
  ApplyActivation(activation, z);
  return z;
}

ForwardResult Forward(const Graph& g, const NodeFeatures& x,
                      const GnnParams& p, const ClusterAssignment* restrict) {
  const Graph local =
      restrict ? RestrictToGroups(g, restrict->cluster_of) : Graph();
  ForwardTrace t = Trace(restrict ? local : g, x, p);
  ForwardResult r;
  r.embeddings = p.num_layers() == 0 ? x.dense() : std::move(t.hidden.back());
  r.logits = std::move(t.logits);
  return r;
}

ForwardResult Forward(const Graph& g, const FeatureMatrix& x,
                      const GnnParams& p, const ClusterAssignment* restrict) {
  return Forward(g, NodeFeatures(x), p, restrict);
}

LossWeighting MakeWeighting(WeightMode mode, const LabelVector& labels,
                            const NodeMask& mask, double en_beta,
                            std::span<const ClassId> minority_classes) {
  LossWeighting w;
  w.mode = mode;
  w.minority_classes.assign(minority_classes.begin(), minority_classes.end());
  std::vector<std::int64_t> counts(static_cast<std::size_t>(labels.num_classes),
                                   0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (mask[i] && labels[i] != LabelVector::kUnlabeled) ++counts[labels[i]];
  }
  w.class_weights.assign(counts.size(), 1.0);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const double n = static_cast<double>(counts[c]);
    switch (mode) {
      case WeightMode::kInverseFreq:
        w.class_weights[c] = counts[c] > 0 ? 1.0 / n : 0.0;
        break;
      case WeightMode::kEffectiveNumber:
        w.class_weights[c] =
            counts[c] > 0 ? (1.0 - en_beta) / (1.0 - std::pow(en_beta, n))
                          : 0.0;
        break;
      default:
        break;
    }
  }
  return w;
}

LossTargets BuildTargets(const LabelVector& labels, const NodeMask& mask,
                         const LossWeighting& weighting,
                         std::span<const int> multiplicity) {
  LossTargets t;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!mask[i] || labels[i] == LabelVector::kUnlabeled) continue;
    const int copies = multiplicity.empty() ? 1 : multiplicity[i];
    for (int r = 0; r < copies; ++r) {
      t.nodes.push_back(static_cast<NodeId>(i));
      t.labels.push_back(labels[i]);
    }
  }
  if (t.nodes.empty()) {
    throw Error(ErrorCode::kEmptyMask, "loss mask selects no labeled node");
  }
  t.coeff.assign(t.nodes.size(), 0.0);
  switch (weighting.mode) {
    case WeightMode::kUniform:
      std::fill(t.coeff.begin(), t.coeff.end(),
                1.0 / static_cast<double>(t.nodes.size()));
      break;
    case WeightMode::kInverseFreq:
    case WeightMode::kEffectiveNumber: {
      double total = 0.0;
      for (std::size_t j = 0; j < t.size(); ++j) {
        t.coeff[j] = weighting.class_weights.at(t.labels[j]);
        total += t.coeff[j];
      }
      for (double& c : t.coeff) c /= total;
      break;
    }
    case WeightMode::kBalancedCluster: {
      const auto is_minority = [&](ClassId y) {
        return std::find(weighting.minority_classes.begin(),
                         weighting.minority_classes.end(),
                         y) != weighting.minority_classes.end();
      };
      double minority = 0.0;
      double majority = 0.0;
      for (ClassId y : t.labels) (is_minority(y) ? minority : majority) += 1.0;
      for (std::size_t j = 0; j < t.size(); ++j) {
        t.coeff[j] = is_minority(t.labels[j]) ? 1.0 / minority : 1.0 / majority;
      }
      break;
    }
  }
  return t;
}

double CrossEntropy(const Matrix& logits, const LossTargets& targets) {
  double loss = 0.0;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const auto row = logits.row(targets.nodes[j]);
    const double max = row.maxCoeff();
    const double log_sum = max + std::log((row.array() - max).exp().sum());
    loss += targets.coeff[j] * (log_sum - row(targets.labels[j]));
  }
  return loss;
}

double Loss(const Matrix& logits, const LabelVector& labels,
            const NodeMask& mask, const LossWeighting& weighting) {
  return CrossEntropy(logits, BuildTargets(labels, mask, weighting));
}

Gradients Backward(const Graph& g, const NodeFeatures& x, const GnnParams& p,
                   const LossTargets& targets) {
  ForwardTrace t = Trace(g, x, p);
  Gradients out;
  out.loss = CrossEntropy(t.logits, targets);
  out.grads = p.ZerosLike();

  Matrix dlogits = Matrix::Zero(t.logits.rows(), t.logits.cols());
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const auto row = t.logits.row(targets.nodes[j]);
    const double max = row.maxCoeff();
    RowVector prob = (row.array() - max).exp();
    prob /= prob.sum();
    prob(targets.labels[j]) -= 1.0;
    dlogits.row(targets.nodes[j]) += targets.coeff[j] * prob;
  }
  out.grads.bias = dlogits.colwise().sum();

  const int depth = p.num_layers();
  if (depth == 0) {
    out.grads.classifier = x.TransposeTimes(dlogits);
  } else {
    out.grads.classifier = t.hidden.back().transpose() * dlogits;
    Matrix dh = dlogits * p.classifier.transpose();
    for (int k = depth - 1; k >= 0; --k) {
      const Matrix dz = ActivationBackward(p.activation, t.preact[k], dh);
      const Matrix& w = p.layer_weights[k];
      const Eigen::Index in_dim = w.rows() / 2;
      const Matrix dz_neigh = MeanAggregateTranspose(g, dz);
      Matrix& dw = out.grads.layer_weights[k];
      if (k == 0) {
        dw.topRows(in_dim) = x.TransposeTimes(dz);
        dw.bottomRows(in_dim) = x.TransposeTimes(dz_neigh);
      } else {
        const Matrix& h = t.hidden[k - 1];
        dw.topRows(in_dim) = h.transpose() * dz;
        dw.bottomRows(in_dim) = h.transpose() * dz_neigh;
        dh = dz * w.topRows(in_dim).transpose() +
             dz_neigh * w.bottomRows(in_dim).transpose();
      }
    }
  }
  out.forward.embeddings =
      depth == 0 ? x.dense() : std::move(t.hidden.back());
  out.forward.logits = std::move(t.logits);
  return out;
}

OptimizerState OptimizerState::For(const GnnParams& p) {
  OptimizerState s;
  for (const Matrix* t : p.Tensors()) {
    s.first_moment.push_back(Matrix::Zero(t->rows(), t->cols()));
    s.second_moment.push_back(Matrix::Zero(t->rows(), t->cols()));
  }
  return s;
}

void AdamStep(GnnParams& p, const GnnParams& grads, OptimizerState& state,
              double learning_rate) {
  auto params = p.Tensors();
  auto gs = grads.Tensors();
  if (state.first_moment.size() != params.size() ||
      gs.size() != params.size()) {
    throw Error(ErrorCode::kShapeError, "optimizer state does not match model");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& m = state.first_moment[i];
    Matrix& v = state.second_moment[i];
    const Matrix& g = *gs[i];
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
    params[i]->array() -=
        learning_rate * (m.array() / correction1) /
        ((v.array() / correction2).sqrt() + state.eps);
  }
}

}  // namespace ecgn
