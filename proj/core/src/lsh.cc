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

#include "ecgn/lsh.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <spdlog/spdlog.h>

#include "ecgn/error.h"

namespace ecgn {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t Find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  // The smaller root becomes the representative.
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Renumbers cluster ids by lowest member id.
ClusterAssignment Canonical(const std::vector<std::int64_t>& raw) {
  std::map<std::int64_t, ClusterId> ids;
  ClusterAssignment out;
  out.cluster_of.reserve(raw.size());
  for (std::int64_t r : raw) {
    auto [it, inserted] = ids.emplace(r, static_cast<ClusterId>(ids.size()));
    out.cluster_of.push_back(it->second);
  }
  out.num_clusters = static_cast<ClusterId>(ids.size());
  return out;
}

// Unit-norm centroids, one row per cluster; zero rows stay zero.
Matrix NormalizedCentroids(const FeatureMatrix& x, const ClusterAssignment& a) {
  Matrix c = Matrix::Zero(a.num_clusters, x.cols());
  std::vector<double> count(static_cast<std::size_t>(a.num_clusters), 0.0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    c.row(a[i]) += x.row(i);
    count[a[i]] += 1.0;
  }
  for (ClusterId k = 0; k < a.num_clusters; ++k) {
    c.row(k) /= count[k];
    const double norm = c.row(k).norm();
    if (norm > 0) c.row(k) /= norm;
  }
  return c;
}

}  // namespace

Matrix SparseRandomProjection(Eigen::Index dim, int num_projections,
                              Rng& rng) {
  const double density = 1.0 / std::sqrt(static_cast<double>(dim));
  const double scale = std::sqrt(1.0 / density / num_projections);
  Matrix r = Matrix::Zero(dim, num_projections);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (int j = 0; j < num_projections; ++j) {
      const double u = Uniform01(rng);
      if (u < density / 2) {
        r(i, j) = scale;
      } else if (u < density) {
        r(i, j) = -scale;
      }
    }
  }
  return r;
}

std::vector<std::vector<std::uint64_t>> LshKeys(const FeatureMatrix& x,
                                                const LshConfig& cfg) {
  std::vector<std::vector<std::uint64_t>> keys(
      static_cast<std::size_t>(cfg.num_tables),
      std::vector<std::uint64_t>(static_cast<std::size_t>(x.rows()), 0));
  for (int t = 0; t < cfg.num_tables; ++t) {
    Rng rng = DeriveRng(cfg.seed, static_cast<std::uint64_t>(t));
    const Matrix projected =
        x * SparseRandomProjection(x.cols(), cfg.num_projections, rng);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      std::uint64_t key = 0;
      for (int j = 0; j < cfg.num_projections; ++j) {
        if (projected(i, j) > 0) key |= std::uint64_t{1} << j;
      }
      keys[t][i] = key;
    }
  }
  return keys;
}

LshResult LshCluster(const FeatureMatrix& x, const LshConfig& cfg) {
  if (x.rows() == 0 || x.cols() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "LSH on empty feature matrix");
  }
  if (cfg.num_tables < 1 || cfg.num_projections < 1 ||
      cfg.num_projections > 64 || cfg.similarity_threshold < -1 ||
      cfg.similarity_threshold > 1) {
    throw Error(ErrorCode::kInvalidArgument, "LSH config out of range");
  }
  const auto n = static_cast<std::size_t>(x.rows());
  const auto keys = LshKeys(x, cfg);

  // Rows sharing a bucket in any table end up in one preliminary cluster.
  DisjointSets sets(n);
  for (const auto& table : keys) {
    std::map<std::uint64_t, std::size_t> first_in_bucket;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, inserted] = first_in_bucket.emplace(table[i], i);
      if (!inserted) sets.Union(it->second, i);
    }
  }
  std::vector<std::int64_t> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[i] = static_cast<std::int64_t>(sets.Find(i));
  }
  ClusterAssignment a = Canonical(raw);

  LshResult result;
  Eigen::VectorXd norms = x.rowwise().norm();
  Matrix unit = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (norms[i] > 0) {
      unit.row(i) /= norms[i];
    } else {
      ++result.zero_rows;
    }
  }
  if (result.zero_rows > 0) {
    spdlog::warn("lsh: {} zero-norm rows keep their hash cluster",
                 result.zero_rows);
  }

  // Refinement against the preliminary centroids.
  {
    const Matrix centroids = NormalizedCentroids(x, a);
    const Matrix sim = unit * centroids.transpose();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (norms[i] == 0) continue;
      Eigen::Index best = 0;
      sim.row(i).maxCoeff(&best);  // first maximum = lowest cluster id
      if (sim(i, best) > cfg.similarity_threshold) {
        raw[i] = static_cast<std::int64_t>(best);
      } else {
        raw[i] = a[i];
      }
    }
    a = Canonical(raw);
  }

  // Fold undersized clusters into the most similar surviving centroid.
  for (;;) {
    const std::vector<std::int64_t> sizes = a.Sizes();
    if (a.num_clusters < 2) break;
    ClusterId small = -1;
    for (ClusterId c = 0; c < a.num_clusters; ++c) {
      if (sizes[c] < cfg.min_cluster_size &&
          (small < 0 || sizes[c] < sizes[small])) {
        small = c;
      }
    }
    if (small < 0) break;
    const Matrix centroids = NormalizedCentroids(x, a);
    ClusterId target = -1;
    double best_sim = -2.0;
    for (ClusterId c = 0; c < a.num_clusters; ++c) {
      if (c == small || sizes[c] < cfg.min_cluster_size) continue;
      const double s = centroids.row(small).dot(centroids.row(c));
      if (s > best_sim) {
        best_sim = s;
        target = c;
      }
    }
    if (target < 0) {
      // Everything is undersized: merge into the largest other cluster.
      for (ClusterId c = 0; c < a.num_clusters; ++c) {
        if (c != small && (target < 0 || sizes[c] > sizes[target])) target = c;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      raw[i] = a[i] == small ? target : a[i];
    }
    a = Canonical(raw);
  }

  result.assignment = std::move(a);
  return result;
}

}  // namespace ecgn
