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

#ifndef ECGN_LSH_H_
#define ECGN_LSH_H_

#include <cstdint>
#include <vector>

#include "ecgn/graph.h"
#include "ecgn/partition.h"
#include "ecgn/rng.h"

namespace ecgn {

struct LshConfig {
  int num_tables = 8;
  int num_projections = 16;  // at most 64
  double similarity_threshold = 0.5;
  // Clusters below this size are folded into the most similar centroid.
  std::int64_t min_cluster_size = 1;
  std::uint64_t seed = 0;
};

// Sparse random projection with entries in {+s, 0, -s}: nonzero with
// probability 1/sqrt(d), s = sqrt(sqrt(d) / P), so column norms are
// preserved in expectation.
Matrix SparseRandomProjection(Eigen::Index dim, int num_projections, Rng& rng);

// Per-table P-bit sign keys: bit j is set iff (x_i . R_t[:, j]) > 0.
std::vector<std::vector<std::uint64_t>> LshKeys(const FeatureMatrix& x,
                                                const LshConfig& cfg);

struct LshResult {
  ClusterAssignment assignment;
  // Rows with zero norm; they keep their hash-derived cluster.
  std::int64_t zero_rows = 0;
};

// Feature-space clustering: rows sharing a bucket in any table are merged
// (union-find), each row then moves to the centroid with the highest cosine
// similarity when that similarity exceeds the threshold, and undersized
// clusters are merged into their nearest centroid. Cluster ids are numbered
// by lowest member id. Throws kInvalidArgument for an empty matrix or a
// config outside its ranges.
LshResult LshCluster(const FeatureMatrix& x, const LshConfig& cfg);

}  // namespace ecgn

#endif  // ECGN_LSH_H_
