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

#include "ecgn/baselines.h"

#include <algorithm>
#include <utility>

#include "ecgn/error.h"
#include "ecgn/rng.h"

namespace ecgn {
namespace {

std::vector<std::vector<NodeId>> TrainNodesByClass(const LabelVector& labels,
                                                   const NodeMask& train) {
  std::vector<std::vector<NodeId>> out(
      static_cast<std::size_t>(labels.num_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (train[i] && labels[i] != LabelVector::kUnlabeled) {
      out[labels[i]].push_back(static_cast<NodeId>(i));
    }
  }
  return out;
}

}  // namespace

std::vector<int> OversampleMultiplicity(const LabelVector& labels,
                                        const NodeMask& train) {
  const auto by_class = TrainNodesByClass(labels, train);
  std::size_t largest = 0;
  for (const auto& nodes : by_class) largest = std::max(largest, nodes.size());
  std::vector<int> copies(labels.size(), 0);
  for (const auto& nodes : by_class) {
    if (nodes.empty()) continue;
    const std::size_t base = largest / nodes.size();
    const std::size_t extra = largest % nodes.size();
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      copies[nodes[j]] = static_cast<int>(base + (j < extra ? 1 : 0));
    }
  }
  return copies;
}

TargetSampler ClassBalancedSampler(const LabelVector& labels,
                                   const NodeMask& train) {
  auto by_class = TrainNodesByClass(labels, train);
  std::vector<ClassId> class_of;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (!by_class[c].empty()) class_of.push_back(static_cast<ClassId>(c));
  }
  std::erase_if(by_class, [](const auto& nodes) { return nodes.empty(); });
  if (by_class.empty()) {
    throw Error(ErrorCode::kEmptyMask, "no labeled train node");
  }
  std::size_t smallest = by_class.front().size();
  for (const auto& nodes : by_class) smallest = std::min(smallest, nodes.size());
  return [by_class, class_of, smallest](int, Rng& rng) mutable {
    LossTargets t;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      auto& nodes = by_class[c];
      for (std::size_t j = 0; j < smallest; ++j) {
        std::swap(nodes[j], nodes[j + UniformIndex(rng, nodes.size() - j)]);
        t.nodes.push_back(nodes[j]);
        t.labels.push_back(class_of[c]);
      }
    }
    t.coeff.assign(t.nodes.size(), 1.0 / static_cast<double>(t.nodes.size()));
    return t;
  };
}

Matrix AppendClusterOneHot(const Matrix& x, const ClusterAssignment& a) {
  Matrix out = Matrix::Zero(x.rows(), x.cols() + a.num_clusters);
  out.leftCols(x.cols()) = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i, x.cols() + a[i]) = 1.0;
  return out;
}

}  // namespace ecgn
