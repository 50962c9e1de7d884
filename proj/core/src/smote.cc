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

#include "ecgn/smote.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <spdlog/spdlog.h>

#include "ecgn/error.h"
#include "ecgn/rng.h"

namespace ecgn {
namespace {

std::vector<NodeId> TrainNodesOf(const LabelVector& labels,
                                 const NodeMask& train, ClassId m) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (train[i] && labels[i] == m) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

}  // namespace

std::vector<NodeScore> ConnectivityScores(const Graph& g,
                                          const LabelVector& labels,
                                          const NodeMask& train,
                                          const ClusterAssignment* a,
                                          ClassId m, ConnectivityMode mode) {
  if (mode == ConnectivityMode::kOutOfCluster && a == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "out-of-cluster connectivity needs a cluster assignment");
  }
  const std::vector<NodeId> nodes = TrainNodesOf(labels, train, m);
  if (nodes.empty()) {
    throw Error(ErrorCode::kClassEmpty,
                "class " + std::to_string(m) + " has no train node");
  }
  std::vector<NodeScore> scores;
  scores.reserve(nodes.size());
  for (NodeId v : nodes) {
    std::int64_t s = 0;
    for (NodeId u : g.neighbors(v)) {
      if (mode == ConnectivityMode::kOutOfClass) {
        s += labels[u] != m;
      } else {
        s += (*a)[u] != (*a)[v];
      }
    }
    scores.push_back({v, s});
  }
  return scores;
}

std::vector<NodeId> SelectSeeds(std::span<const NodeScore> scores, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "seed count k < 1");
  std::vector<NodeScore> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const NodeScore& a, const NodeScore& b) {
              return a.score != b.score ? a.score > b.score : a.node < b.node;
            });
  sorted.resize(std::min(sorted.size(), static_cast<std::size_t>(k)));
  std::vector<NodeId> seeds;
  for (const NodeScore& s : sorted) seeds.push_back(s.node);
  return seeds;
}

NodeId NearestSameClass(const Matrix& h, const LabelVector& labels,
                        const NodeMask& train, NodeId v) {
  const ClassId m = labels[v];
  NodeId best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto u = static_cast<NodeId>(i);
    if (u == v || !train[i] || labels[i] != m) continue;
    const double d = (h.row(u) - h.row(v)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = u;
    }
  }
  if (best < 0) {
    throw Error(ErrorCode::kSingletonClass,
                "node " + std::to_string(v) + " has no same-class train peer");
  }
  return best;
}

RowVector Synthesize(const Matrix& h, NodeId v, NodeId u, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta outside [0, 1]");
  }
  const auto a = h.row(v);
  const auto b = h.row(u);
  RowVector out = (1.0 - delta) * a + delta * b;
  // Rounding can push a coordinate one ulp past an endpoint.
  out = out.cwiseMax(a.cwiseMin(b)).cwiseMin(a.cwiseMax(b));
  return out;
}

std::int64_t SyntheticCount(const SmoteConfig& cfg, ClassId m,
                            std::int64_t train_count) {
  if (auto it = cfg.target_counts.find(m); it != cfg.target_counts.end()) {
    return std::max<std::int64_t>(0, it->second - train_count);
  }
  return std::llround(cfg.alpha * static_cast<double>(train_count));
}

AugmentationResult Augment(const Graph& g, const Matrix& h,
                           const LabelVector& labels, const NodeMaskSet& masks,
                           const ClusterAssignment* a, const SmoteConfig& cfg) {
  if (!(cfg.alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be positive");
  }
  if (h.rows() != g.num_nodes() ||
      labels.size() != static_cast<std::size_t>(g.num_nodes())) {
    throw Error(ErrorCode::kShapeError, "embeddings or labels do not match graph");
  }
  std::vector<ClassId> classes = cfg.minority_classes;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  std::vector<std::int64_t> train_count(
      static_cast<std::size_t>(labels.num_classes), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (masks.train[i] && labels[i] != LabelVector::kUnlabeled) {
      ++train_count[labels[i]];
    }
  }
  const std::int64_t largest =
      *std::max_element(train_count.begin(), train_count.end());
  std::vector<std::int64_t> wanted;
  for (ClassId m : classes) {
    if (m < 0 || m >= labels.num_classes) {
      throw Error(ErrorCode::kInvalidArgument,
                  "minority class " + std::to_string(m) + " out of range");
    }
    const std::int64_t n_syn = SyntheticCount(cfg, m, train_count[m]);
    if (2 * n_syn >= largest) {
      throw Error(ErrorCode::kCapExceeded,
                  "class " + std::to_string(m) + " would get " +
                      std::to_string(n_syn) +
                      " synthetic nodes, the cap is below half of " +
                      std::to_string(largest));
    }
    wanted.push_back(n_syn);
  }

  AugmentationResult out;
  std::vector<std::vector<NodeId>> new_neighbors;
  std::vector<RowVector> new_rows;
  std::int64_t requested = 0;
  NodeId next_id = g.num_nodes();
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    const ClassId m = classes[ci];
    const std::int64_t n_syn = wanted[ci];
    requested += n_syn;
    if (n_syn == 0) continue;
    Rng rng = DeriveRng(cfg.seed, static_cast<std::uint64_t>(m));

    std::vector<NodeId> seeds;
    if (cfg.seed_selection == SeedSelection::kBoundary) {
      const auto scores = ConnectivityScores(g, labels, masks.train, a, m,
                                             cfg.connectivity_mode);
      const int k = cfg.seed_count_k > 0
                        ? cfg.seed_count_k
                        : static_cast<int>(std::min<std::size_t>(
                              10, scores.size()));
      seeds = SelectSeeds(scores, k);
    } else {
      seeds = TrainNodesOf(labels, masks.train, m);
      if (seeds.empty()) {
        throw Error(ErrorCode::kClassEmpty,
                    "class " + std::to_string(m) + " has no train node");
      }
    }
    std::vector<NodeId> usable;
    std::vector<NodeId> partner;
    for (NodeId v : seeds) {
      try {
        const NodeId u = NearestSameClass(h, labels, masks.train, v);
        usable.push_back(v);
        partner.push_back(u);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSingletonClass) throw;
        spdlog::warn("smote: skipping seed {}: {}", v, e.what());
      }
    }
    if (usable.empty()) continue;

    for (std::int64_t j = 0; j < n_syn; ++j) {
      const std::size_t s =
          cfg.seed_selection == SeedSelection::kBoundary
              ? static_cast<std::size_t>(j) % usable.size()
              : UniformIndex(rng, usable.size());
      const NodeId v = usable[s];
      const double delta = Uniform01(rng);
      new_rows.push_back(Synthesize(h, v, partner[s], delta));
      std::vector<NodeId> nbrs(g.neighbors(v).begin(), g.neighbors(v).end());
      nbrs.push_back(v);
      new_neighbors.push_back(std::move(nbrs));
      out.synth_origin.push_back({next_id++, v, partner[s], delta, m});
    }
  }
  if (requested > 0 && out.synth_origin.empty()) {
    throw Error(ErrorCode::kNothingToAugment,
                "no minority seed has a same-class neighbor");
  }

  const auto added = static_cast<Eigen::Index>(new_rows.size());
  out.graph = AddNodesWithEdges(g, new_neighbors);
  out.embeddings.resize(h.rows() + added, h.cols());
  out.embeddings.topRows(h.rows()) = h;
  for (Eigen::Index i = 0; i < added; ++i) {
    out.embeddings.row(h.rows() + i) = new_rows[i];
  }
  out.labels = labels;
  out.masks = masks;
  out.masks.train.resize(labels.size() + added, true);
  out.masks.val.resize(labels.size() + added, false);
  out.masks.test.resize(labels.size() + added, false);
  if (a != nullptr) out.clusters = *a;
  for (const SynthOrigin& o : out.synth_origin) {
    out.labels.labels.push_back(o.label);
    if (a != nullptr) out.clusters.cluster_of.push_back((*a)[o.seed]);
  }
  return out;
}

}  // namespace ecgn
