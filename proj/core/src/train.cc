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

#include "ecgn/train.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <thread>

#include <spdlog/spdlog.h>

#include "ecgn/error.h"
#include "ecgn/metrics.h"

namespace ecgn {
namespace {

void AddWeightDecay(GnnParams& grads, const GnnParams& p, double decay) {
  if (decay == 0.0) return;
  for (int k = 0; k < p.num_layers(); ++k) {
    grads.layer_weights[k] += decay * p.layer_weights[k];
  }
  grads.classifier += decay * p.classifier;
}

NodeMask Slice(const NodeMask& mask, std::span<const NodeId> ids) {
  NodeMask out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out[i] = mask[ids[i]];
  return out;
}

bool HasLabeled(const LabelVector& labels, const NodeMask& mask) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (mask[i] && labels[i] != LabelVector::kUnlabeled) return true;
  }
  return false;
}

bool SameShape(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

}  // namespace

void ValidateTrainConfig(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) {
    throw Error(ErrorCode::kConfigError, "learning_rate must be positive");
  }
  if (cfg.max_epochs < 1 || cfg.patience < 0 ||
      cfg.patience > cfg.max_epochs) {
    throw Error(ErrorCode::kConfigError,
                "need max_epochs >= 1 and 0 <= patience <= max_epochs");
  }
  if (cfg.hidden_dim < 1 || cfg.num_layers < 0) {
    throw Error(ErrorCode::kConfigError, "invalid hidden_dim or num_layers");
  }
  if (cfg.weight_decay < 0.0 || !(cfg.en_beta >= 0.0 && cfg.en_beta < 1.0)) {
    throw Error(ErrorCode::kConfigError,
                "weight_decay must be >= 0 and en_beta in [0, 1)");
  }
}

TrainResult Train(const Graph& g, const NodeFeatures& x,
                  const LabelVector& labels, const NodeMaskSet& masks,
                  GnnParams p0, const TrainConfig& cfg,
                  const TrainOptions& options) {
  ValidateTrainConfig(cfg);
  ValidateParams(p0);
  if (labels.size() != static_cast<std::size_t>(g.num_nodes()) ||
      masks.train.size() != labels.size() || masks.val.size() != labels.size()) {
    throw Error(ErrorCode::kShapeError, "labels or masks do not match graph");
  }
  const Graph local = options.restrict
                          ? RestrictToGroups(g, options.restrict->cluster_of)
                          : Graph();
  const Graph& graph = options.restrict ? local : g;

  Rng rng = DeriveRng(cfg.seed, 0x747261696eULL);
  TargetSampler sampler = options.sampler;
  if (!sampler) {
    const LossWeighting weighting =
        MakeWeighting(cfg.weight_mode, labels, masks.train, cfg.en_beta,
                      cfg.minority_classes);
    sampler = [fixed = BuildTargets(labels, masks.train, weighting)](
                  int, Rng&) { return fixed; };
  }

  TrainResult result;
  TrainReport& report = result.report;
  report.selected_on_train = !HasLabeled(labels, masks.val);
  const NodeMask& select = report.selected_on_train ? masks.train : masks.val;

  GnnParams p = std::move(p0);
  OptimizerState state = OptimizerState::For(p);
  Gradients grads = Backward(graph, x, p, sampler(0, rng));
  double best_f1 = -std::numeric_limits<double>::infinity();
  report.stop_reason = "max_epochs";
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    report.train_loss.push_back(grads.loss);
    AddWeightDecay(grads.grads, p, cfg.weight_decay);
    AdamStep(p, grads.grads, state, cfg.learning_rate);
    // The next gradient pass also yields the logits of the updated model.
    grads = Backward(graph, x, p, sampler(epoch + 1, rng));
    const double f1 =
        MacroF1(Predict(grads.forward.logits), labels, select);
    report.val_f1.push_back(f1);
    if (f1 > best_f1) {
      best_f1 = f1;
      report.best_epoch = epoch;
      result.params = p;
    }
    if (epoch - report.best_epoch >= cfg.patience) {
      report.stop_reason = "patience";
      break;
    }
  }
  report.best_val_f1 = best_f1;
  return result;
}

PretrainResult PretrainClusters(const Graph& g, const FeatureMatrix& x,
                                const LabelVector& labels,
                                const NodeMaskSet& masks,
                                const ClusterAssignment& a,
                                const TrainConfig& cfg, int num_workers) {
  ValidateTrainConfig(cfg);
  ValidateAssignment(a, g.num_nodes());
  if (x.rows() != g.num_nodes()) {
    throw Error(ErrorCode::kShapeError, "feature rows != node count");
  }
  PretrainResult out;
  out.init = InitParams(x.cols(), cfg.hidden_dim, cfg.num_layers,
                        labels.num_classes, cfg.seed, cfg.activation);
  out.embeddings = Matrix::Zero(x.rows(), out.init.embedding_dim());
  out.cluster_logits = Matrix::Zero(x.rows(), labels.num_classes);

  const auto members = a.Members();
  out.clusters.resize(members.size());
  std::vector<std::exception_ptr> errors(members.size());

  const auto run_cluster = [&](std::size_t c) {
    ClusterModel& model = out.clusters[c];
    model.members = members[c];
    const SubgraphView view = InducedSubgraph(g, model.members);
    const NodeFeatures xl(GatherRows(x, model.members));
    LabelVector ll;
    ll.num_classes = labels.num_classes;
    for (NodeId v : model.members) ll.labels.push_back(labels[v]);
    NodeMaskSet ml;
    ml.train = Slice(masks.train, model.members);
    ml.val = Slice(masks.val, model.members);
    ml.test = NodeMask(model.members.size(), false);

    if (HasLabeled(ll, ml.train)) {
      TrainConfig local = cfg;
      local.seed = DeriveRng(cfg.seed, c)();
      TrainResult r = Train(view.graph, xl, ll, ml, out.init, local);
      model.params = std::move(r.params);
      model.report = std::move(r.report);
      model.trained = true;
    } else {
      spdlog::warn(
          "ClusterUnlabeled: cluster {} has no labeled train node, keeping "
          "the shared initialization",
          c);
      model.params = out.init;
      model.report.stop_reason = "untrained";
    }
    const ForwardResult f = Forward(view.graph, xl, model.params);
    for (std::size_t i = 0; i < model.members.size(); ++i) {
      out.embeddings.row(model.members[i]) = f.embeddings.row(i);
      out.cluster_logits.row(model.members[i]) = f.logits.row(i);
    }
  };

  std::size_t workers =
      num_workers > 0 ? static_cast<std::size_t>(num_workers)
                      : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, members.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t c = next++; c < members.size(); c = next++) {
      try {
        run_cluster(c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

GnnParams GlobalInit(Eigen::Index input_dim, Eigen::Index num_classes,
                     const TrainConfig& cfg, Transfer transfer,
                     std::span<const ClusterModel> clusters) {
  GnnParams p = InitParams(input_dim, cfg.hidden_dim, 1, num_classes,
                           DeriveRng(cfg.seed, 0x676c6f62ULL)(),
                           cfg.activation);
  if (transfer == Transfer::kNone) return p;

  std::vector<const ClusterModel*> usable;
  for (const ClusterModel& m : clusters) {
    if (m.params.num_layers() > 0 &&
        SameShape(m.params.layer_weights.back(), p.layer_weights[0]) &&
        SameShape(m.params.classifier, p.classifier) &&
        SameShape(m.params.bias, p.bias)) {
      usable.push_back(&m);
    }
  }
  if (usable.empty()) {
    throw Error(ErrorCode::kMissingClusterParams,
                "no cluster model with a last layer of shape " +
                    std::to_string(p.layer_weights[0].rows()) + "x" +
                    std::to_string(p.layer_weights[0].cols()));
  }
  const auto copy_from = [&p](const GnnParams& src) {
    p.layer_weights[0] = src.layer_weights.back();
    p.classifier = src.classifier;
    p.bias = src.bias;
  };
  switch (transfer) {
    case Transfer::kAverage: {
      GnnParams sum = p.ZerosLike();
      for (const ClusterModel* m : usable) {
        sum.layer_weights[0] += m->params.layer_weights.back();
        sum.classifier += m->params.classifier;
        sum.bias += m->params.bias;
      }
      const double inv = 1.0 / static_cast<double>(usable.size());
      for (Matrix* t : sum.Tensors()) *t *= inv;
      copy_from(sum);
      break;
    }
    case Transfer::kLargest: {
      const ClusterModel* best = usable.front();
      for (const ClusterModel* m : usable) {
        if (m->members.size() > best->members.size()) best = m;
      }
      copy_from(best->params);
      break;
    }
    case Transfer::kBest: {
      const ClusterModel* best = usable.front();
      for (const ClusterModel* m : usable) {
        if (m->report.best_val_f1 > best->report.best_val_f1) best = m;
      }
      copy_from(best->params);
      break;
    }
    case Transfer::kNone:
      break;
  }
  return p;
}

GlobalResult GlobalIntegrate(const Graph& g_aug, const EmbeddingMatrix& h_aug,
                             const LabelVector& labels_aug,
                             const NodeMaskSet& masks_aug,
                             const TrainConfig& cfg, Transfer transfer,
                             std::span<const ClusterModel> clusters) {
  if (h_aug.rows() != g_aug.num_nodes()) {
    throw Error(ErrorCode::kShapeError, "embedding rows != node count");
  }
  const NodeFeatures x(h_aug);
  GnnParams p0 = GlobalInit(h_aug.cols(), labels_aug.num_classes, cfg,
                            transfer, clusters);
  TrainResult r = Train(g_aug, x, labels_aug, masks_aug, std::move(p0), cfg);
  GlobalResult out;
  ForwardResult f = Forward(g_aug, x, r.params);
  out.embeddings = std::move(f.embeddings);
  out.logits = std::move(f.logits);
  out.params = std::move(r.params);
  out.report = std::move(r.report);
  return out;
}

}  // namespace ecgn
