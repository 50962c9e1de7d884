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

#ifndef ECGN_BASELINES_H_
#define ECGN_BASELINES_H_

#include <vector>

#include "ecgn/graph.h"
#include "ecgn/partition.h"
#include "ecgn/train.h"

namespace ecgn {

// Oversampling: copies per train node so that every class reaches the
// largest class's train count; a class's remainder goes to its lowest ids.
// Nodes outside the train mask get 0.
std::vector<int> OversampleMultiplicity(const LabelVector& labels,
                                        const NodeMask& train);

// Class-balanced sampling: every epoch draws, without replacement, as many
// train nodes from each class as the smallest non-empty class has. Throws
// kEmptyMask when there is no labeled train node.
TargetSampler ClassBalancedSampler(const LabelVector& labels,
                                   const NodeMask& train);

// X with a one-hot block of the node's cluster id appended.
Matrix AppendClusterOneHot(const Matrix& x, const ClusterAssignment& a);

}  // namespace ecgn

#endif  // ECGN_BASELINES_H_
