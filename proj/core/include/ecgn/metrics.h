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

#ifndef ECGN_METRICS_H_
#define ECGN_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ecgn/graph.h"

namespace ecgn {

// Row-wise argmax; ties go to the lowest class id.
std::vector<ClassId> Predict(const Matrix& logits);

struct ClassificationMetrics {
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  double accuracy = 0.0;
  // F1 per class id; classes absent from both truth and prediction get 0
  // here but are left out of the macro average.
  std::vector<double> per_class_f1;
  // confusion[t][p] counts masked nodes of true class t predicted as p.
  std::vector<std::vector<std::int64_t>> confusion;
};

// Metrics over masked, labeled nodes. Throws kEmptyMask when none are
// selected and kShapeError when the inputs disagree in length.
ClassificationMetrics Evaluate(std::span<const ClassId> pred,
                               const LabelVector& truth, const NodeMask& mask);

// Unweighted mean of per-class F1 over the classes occurring in the masked
// truth or predictions.
double MacroF1(std::span<const ClassId> pred, const LabelVector& truth,
               const NodeMask& mask);

}  // namespace ecgn

#endif  // ECGN_METRICS_H_
