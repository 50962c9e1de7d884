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

#ifndef ECGN_TRAIN_H_
#define ECGN_TRAIN_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ecgn/gnn.h"
#include "ecgn/graph.h"
#include "ecgn/partition.h"
#include "ecgn/rng.h"

namespace ecgn {

struct TrainConfig {
  double learning_rate = 0.01;
  int max_epochs = 1500;
  int patience = 40;
  Eigen::Index hidden_dim = 128;
  int num_layers = 2;
  WeightMode weight_mode = WeightMode::kUniform;
  double en_beta = 0.9999;
  // L2 penalty added to the gradient of every weight matrix (not the bias).
  double weight_decay = 5e-4;
  Activation activation = Activation::kRelu;
  std::vector<ClassId> minority_classes;
  std::uint64_t seed = 0;
};

// Throws kConfigError for a non-positive learning rate, patience above
// max_epochs or negative sizes.
void ValidateTrainConfig(const TrainConfig& cfg);

struct TrainReport {
  std::vector<double> train_loss;  // loss before each epoch's update
  std::vector<double> val_f1;      // validation macro-F1 after the update
  int best_epoch = -1;
  double best_val_f1 = 0.0;
  // "patience", "max_epochs" or "untrained".
  std::string stop_reason;
  // True when no validation node was available and train F1 stood in.
  bool selected_on_train = false;

  friend bool operator==(const TrainReport&, const TrainReport&) = default;
};

// Produces the loss targets of one epoch; used by the resampling baselines.
using TargetSampler = std::function<LossTargets(int epoch, Rng& rng)>;

struct TrainOptions {
  // Restrict neighborhoods to nodes of the same cluster.
  const ClusterAssignment* restrict = nullptr;
  // Defaults to all train-masked nodes weighted by cfg.weight_mode.
  TargetSampler sampler;
};

struct TrainResult {
  GnnParams params;  // parameters of the best validation epoch
  TrainReport report;
};

// Full-batch Adam with early stopping on validation macro-F1. Parameters are
// scored after each update and the best ones are kept; training stops once
// `patience` epochs pass without improvement. Throws kEmptyMask when the
// train mask is empty.
TrainResult Train(const Graph& g, const NodeFeatures& x,
                  const LabelVector& labels, const NodeMaskSet& masks,
                  GnnParams p0, const TrainConfig& cfg,
                  const TrainOptions& options = {});

struct ClusterModel {
  std::vector<NodeId> members;  // ascending global ids
  GnnParams params;
  TrainReport report;
  bool trained = false;  // false when the cluster had no labeled train node
};

struct PretrainResult {
  EmbeddingMatrix embeddings;  // h^(K) per node, written at global ids
  Matrix cluster_logits;       // each node scored by its own cluster's head
  std::vector<ClusterModel> clusters;
  GnnParams init;  // the shared initialization
};

// One GNN per cluster, all starting from the same initialization, each
// trained on its induced subgraph with the cluster's own train and
// validation nodes. Clusters run on up to `num_workers` threads (0 = one per
// hardware thread); the result does not depend on the worker count.
PretrainResult PretrainClusters(const Graph& g, const FeatureMatrix& x,
                                const LabelVector& labels,
                                const NodeMaskSet& masks,
                                const ClusterAssignment& a,
                                const TrainConfig& cfg, int num_workers = 1);

enum class Transfer { kNone, kAverage, kLargest, kBest };

struct GlobalResult {
  EmbeddingMatrix embeddings;
  Matrix logits;
  GnnParams params;
  TrainReport report;
};

// Initial parameters of the global layer and classifier. kNone draws fresh
// weights; the other strategies copy the last layer and classifier of the
// mean, the largest or the best-validated cluster model. Throws
// kMissingClusterParams when no cluster model has matching shapes.
GnnParams GlobalInit(Eigen::Index input_dim, Eigen::Index num_classes,
                     const TrainConfig& cfg, Transfer transfer,
                     std::span<const ClusterModel> clusters);

// One unrestricted GraphSAGE layer plus classifier over the augmented graph
// with the pre-trained embeddings as node features.
GlobalResult GlobalIntegrate(const Graph& g_aug, const EmbeddingMatrix& h_aug,
                             const LabelVector& labels_aug,
                             const NodeMaskSet& masks_aug,
                             const TrainConfig& cfg, Transfer transfer,
                             std::span<const ClusterModel> clusters);

}  // namespace ecgn

#endif  // ECGN_TRAIN_H_
