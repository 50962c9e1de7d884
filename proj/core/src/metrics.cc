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

#include "ecgn/metrics.h"

#include <string>

#include "ecgn/error.h"

namespace ecgn {

std::vector<ClassId> Predict(const Matrix& logits) {
  std::vector<ClassId> pred(static_cast<std::size_t>(logits.rows()), 0);
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < logits.cols(); ++j) {
      if (logits(i, j) > logits(i, best)) best = j;
    }
    pred[i] = static_cast<ClassId>(best);
  }
  return pred;
}

ClassificationMetrics Evaluate(std::span<const ClassId> pred,
                               const LabelVector& truth, const NodeMask& mask) {
  if (pred.size() != truth.size() || mask.size() != truth.size()) {
    throw Error(ErrorCode::kShapeError,
                "prediction, truth and mask lengths differ (" +
                    std::to_string(pred.size()) + ", " +
                    std::to_string(truth.size()) + ", " +
                    std::to_string(mask.size()) + ")");
  }
  ClassId c = truth.num_classes;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (mask[i] && pred[i] >= c) c = pred[i] + 1;
  }
  const auto nc = static_cast<std::size_t>(c);
  ClassificationMetrics m;
  m.confusion.assign(nc, std::vector<std::int64_t>(nc, 0));
  std::int64_t total = 0;
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!mask[i] || truth[i] == LabelVector::kUnlabeled) continue;
    if (pred[i] < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative predicted class");
    }
    ++m.confusion[truth[i]][pred[i]];
    ++total;
    if (truth[i] == pred[i]) ++correct;
  }
  if (total == 0) {
    throw Error(ErrorCode::kEmptyMask, "no labeled node under the mask");
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  // Every node is counted once as either right or wrong, so micro-averaged
  // precision, recall and F1 all equal accuracy in single-label problems.
  m.micro_f1 = m.accuracy;

  m.per_class_f1.assign(nc, 0.0);
  double sum = 0.0;
  int present = 0;
  for (std::size_t k = 0; k < nc; ++k) {
    std::int64_t tp = m.confusion[k][k];
    std::int64_t in_truth = 0;
    std::int64_t in_pred = 0;
    for (std::size_t j = 0; j < nc; ++j) {
      in_truth += m.confusion[k][j];
      in_pred += m.confusion[j][k];
    }
    if (in_truth == 0 && in_pred == 0) continue;
    m.per_class_f1[k] = 2.0 * static_cast<double>(tp) /
                        static_cast<double>(in_truth + in_pred);
    sum += m.per_class_f1[k];
    ++present;
  }
  m.macro_f1 = sum / present;
  return m;
}

double MacroF1(std::span<const ClassId> pred, const LabelVector& truth,
               const NodeMask& mask) {
  return Evaluate(pred, truth, mask).macro_f1;
}

}  // namespace ecgn
