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

#include "ecgn/partition.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "ecgn/error.h"
#include "ecgn/rng.h"

namespace ecgn {

std::vector<std::vector<NodeId>> ClusterAssignment::Members() const {
  std::vector<std::vector<NodeId>> out(static_cast<std::size_t>(num_clusters));
  for (std::size_t v = 0; v < cluster_of.size(); ++v) {
    out[cluster_of[v]].push_back(static_cast<NodeId>(v));
  }
  return out;
}

std::vector<std::int64_t> ClusterAssignment::Sizes() const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(num_clusters), 0);
  for (ClusterId c : cluster_of) ++out[c];
  return out;
}

void ValidateAssignment(const ClusterAssignment& a, NodeId num_nodes) {
  if (a.cluster_of.size() != static_cast<std::size_t>(num_nodes)) {
    throw Error(ErrorCode::kInvalidArgument,
                "assignment covers " + std::to_string(a.cluster_of.size()) +
                    " nodes, graph has " + std::to_string(num_nodes));
  }
  if (a.num_clusters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "assignment has no clusters");
  }
  std::vector<bool> seen(static_cast<std::size_t>(a.num_clusters), false);
  for (ClusterId c : a.cluster_of) {
    if (c < 0 || c >= a.num_clusters) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cluster id " + std::to_string(c) + " out of range");
    }
    seen[c] = true;
  }
  for (ClusterId c = 0; c < a.num_clusters; ++c) {
    if (!seen[c]) {
      throw Error(ErrorCode::kEmptyCluster,
                  "cluster " + std::to_string(c) + " is empty");
    }
  }
}

std::int64_t MaxClusterWeight(std::int64_t total_weight, ClusterId k,
                              double balance_eps) {
  const std::int64_t ideal = (total_weight + k - 1) / k;
  // The epsilon guards against 1.1 * 10 evaluating to 10.999...
  return static_cast<std::int64_t>(
      std::floor((1.0 + balance_eps) * static_cast<double>(ideal) + 1e-9));
}

std::int64_t WeightedGraph::total_vertex_weight() const {
  return std::accumulate(vertex_weights.begin(), vertex_weights.end(),
                         std::int64_t{0});
}

WeightedGraph WeightedGraph::FromGraph(const Graph& g) {
  if (!g.undirected()) {
    throw Error(ErrorCode::kInvalidArgument, "partitioning needs undirected");
  }
  WeightedGraph w;
  w.row_offsets = g.row_offsets();
  w.col_indices = g.col_indices();
  w.edge_weights.assign(w.col_indices.size(), 1);
  w.vertex_weights.assign(static_cast<std::size_t>(g.num_nodes()), 1);
  return w;
}

namespace {

constexpr std::int64_t kNoLimit = std::numeric_limits<std::int64_t>::max();

CoarseLevel Coarsen(const WeightedGraph& g, std::uint64_t seed,
                    std::int64_t max_vertex_weight) {
  const NodeId n = g.num_nodes();
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(SplitMix64(seed));
  Shuffle(std::span<NodeId>(order), rng);

  std::vector<NodeId> match(static_cast<std::size_t>(n), -1);
  for (NodeId v : order) {
    if (match[v] >= 0) continue;
    NodeId best = -1;
    std::int64_t best_w = 0;
    for (std::int64_t e = g.row_offsets[v]; e < g.row_offsets[v + 1]; ++e) {
      const NodeId u = g.col_indices[e];
      if (match[u] >= 0) continue;
      if (g.vertex_weights[v] + g.vertex_weights[u] > max_vertex_weight) {
        continue;
      }
      // Neighbor lists are ascending, so strict > keeps the lowest id on ties.
      if (g.edge_weights[e] > best_w) {
        best_w = g.edge_weights[e];
        best = u;
      }
    }
    match[v] = best >= 0 ? best : v;
    if (best >= 0) match[best] = v;
  }

  CoarseLevel level;
  level.fine_to_coarse.assign(static_cast<std::size_t>(n), -1);
  NodeId next = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (level.fine_to_coarse[v] >= 0) continue;
    level.fine_to_coarse[v] = next;
    level.fine_to_coarse[match[v]] = next;
    ++next;
  }

  std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(next));
  for (NodeId v = 0; v < n; ++v) members[level.fine_to_coarse[v]].push_back(v);

  WeightedGraph& c = level.coarse;
  c.vertex_weights.assign(static_cast<std::size_t>(next), 0);
  std::vector<std::int64_t> acc(static_cast<std::size_t>(next), 0);
  std::vector<NodeId> touched;
  for (NodeId cv = 0; cv < next; ++cv) {
    touched.clear();
    for (NodeId v : members[cv]) {
      c.vertex_weights[cv] += g.vertex_weights[v];
      for (std::int64_t e = g.row_offsets[v]; e < g.row_offsets[v + 1]; ++e) {
        const NodeId cu = level.fine_to_coarse[g.col_indices[e]];
        if (cu == cv) continue;
        if (acc[cu] == 0) touched.push_back(cu);
        acc[cu] += g.edge_weights[e];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (NodeId cu : touched) {
      c.col_indices.push_back(cu);
      c.edge_weights.push_back(acc[cu]);
      acc[cu] = 0;
    }
    c.row_offsets.push_back(static_cast<std::int64_t>(c.col_indices.size()));
  }
  return level;
}

// Mutable k-way partition state with per-cluster weight caps.
struct PartitionState {
  const WeightedGraph& g;
  std::vector<ClusterId> part;
  ClusterId k;
  std::vector<std::int64_t> weight;
  std::vector<std::int64_t> count;
  std::vector<std::int64_t> max_weight;

  PartitionState(const WeightedGraph& graph, std::vector<ClusterId> p,
                 ClusterId num_clusters, std::vector<std::int64_t> caps)
      : g(graph),
        part(std::move(p)),
        k(num_clusters),
        weight(static_cast<std::size_t>(num_clusters), 0),
        count(static_cast<std::size_t>(num_clusters), 0),
        max_weight(std::move(caps)) {
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      weight[part[v]] += g.vertex_weights[v];
      ++count[part[v]];
    }
  }

  // conn[c] = total edge weight from v into cluster c.
  void Connectivity(NodeId v, std::vector<std::int64_t>& conn) const {
    std::fill(conn.begin(), conn.end(), 0);
    for (std::int64_t e = g.row_offsets[v]; e < g.row_offsets[v + 1]; ++e) {
      conn[part[g.col_indices[e]]] += g.edge_weights[e];
    }
  }

  std::int64_t EdgeWeightBetween(NodeId u, NodeId v) const {
    const auto begin = g.col_indices.begin() + g.row_offsets[u];
    const auto end = g.col_indices.begin() + g.row_offsets[u + 1];
    auto it = std::lower_bound(begin, end, v);
    if (it == end || *it != v) return 0;
    return g.edge_weights[static_cast<std::size_t>(it - g.col_indices.begin())];
  }

  void Move(NodeId v, ClusterId to) {
    const ClusterId from = part[v];
    weight[from] -= g.vertex_weights[v];
    --count[from];
    weight[to] += g.vertex_weights[v];
    ++count[to];
    part[v] = to;
  }

  bool CanMove(NodeId v, ClusterId to) const {
    return count[part[v]] > 1 &&
           weight[to] + g.vertex_weights[v] <= max_weight[to];
  }

  // One sweep of strictly improving single moves in ascending id order.
  bool SingleMovePass() {
    bool moved = false;
    std::vector<std::int64_t> conn(static_cast<std::size_t>(k));
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      Connectivity(v, conn);
      const ClusterId own = part[v];
      ClusterId best = -1;
      std::int64_t best_gain = 0;
      for (ClusterId c = 0; c < k; ++c) {
        if (c == own) continue;
        const std::int64_t gain = conn[c] - conn[own];
        if (gain > best_gain && CanMove(v, c)) {
          best_gain = gain;
          best = c;
        }
      }
      if (best >= 0) {
        Move(v, best);
        moved = true;
      }
    }
    return moved;
  }

  // Finds and applies the best strictly improving balance-preserving swap.
  // Candidates per ordered cluster pair are the top vertices by move gain.
  bool BestSwap() {
    constexpr std::size_t kTop = 16;
    struct Candidate {
      std::int64_t gain;
      NodeId v;
    };
    const std::size_t kk = static_cast<std::size_t>(k);
    std::vector<std::vector<Candidate>> top(kk * kk);
    std::vector<std::int64_t> conn(kk);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      Connectivity(v, conn);
      const ClusterId own = part[v];
      for (ClusterId c = 0; c < k; ++c) {
        if (c == own) continue;
        top[static_cast<std::size_t>(own) * kk + c].push_back(
            {conn[c] - conn[own], v});
      }
    }
    const auto better = [](const Candidate& a, const Candidate& b) {
      return a.gain != b.gain ? a.gain > b.gain : a.v < b.v;
    };
    for (auto& list : top) {
      if (list.size() > kTop) {
        std::partial_sort(list.begin(), list.begin() + kTop, list.end(),
                          better);
        list.resize(kTop);
      } else {
        std::sort(list.begin(), list.end(), better);
      }
    }
    std::int64_t best_gain = 0;
    NodeId best_u = -1;
    NodeId best_v = -1;
    for (ClusterId a = 0; a < k; ++a) {
      for (ClusterId b = a + 1; b < k; ++b) {
        for (const Candidate& cu : top[static_cast<std::size_t>(a) * kk + b]) {
          for (const Candidate& cv :
               top[static_cast<std::size_t>(b) * kk + a]) {
            if (cu.gain + cv.gain <= best_gain) continue;
            const std::int64_t gain =
                cu.gain + cv.gain - 2 * EdgeWeightBetween(cu.v, cv.v);
            if (gain <= best_gain) continue;
            const std::int64_t wu = g.vertex_weights[cu.v];
            const std::int64_t wv = g.vertex_weights[cv.v];
            if (weight[a] - wu + wv > max_weight[a] ||
                weight[b] - wv + wu > max_weight[b]) {
              continue;
            }
            best_gain = gain;
            best_u = cu.v;
            best_v = cv.v;
          }
        }
      }
    }
    if (best_u < 0) return false;
    const ClusterId a = part[best_u];
    const ClusterId b = part[best_v];
    Move(best_u, b);
    Move(best_v, a);
    return true;
  }

  void Refine(int passes) {
    const NodeId max_swaps = std::max<NodeId>(g.num_nodes(), 1);
    for (int pass = 0; pass < passes; ++pass) {
      bool changed = SingleMovePass();
      for (NodeId s = 0; s < max_swaps && BestSwap(); ++s) changed = true;
      if (!changed) break;
    }
  }

  // Moves vertices out of clusters above their cap, cheapest cut increase
  // first, then refills any empty cluster from the largest one.
  void Rebalance() {
    std::vector<std::int64_t> conn(static_cast<std::size_t>(k));
    for (;;) {
      ClusterId over = -1;
      for (ClusterId c = 0; c < k && over < 0; ++c) {
        if (weight[c] > max_weight[c]) over = c;
      }
      if (over < 0) break;
      NodeId best_v = -1;
      ClusterId best_c = -1;
      std::int64_t best_gain = std::numeric_limits<std::int64_t>::min();
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (part[v] != over) continue;
        Connectivity(v, conn);
        for (ClusterId c = 0; c < k; ++c) {
          if (c == over || !CanMove(v, c)) continue;
          const std::int64_t gain = conn[c] - conn[over];
          if (gain > best_gain) {
            best_gain = gain;
            best_v = v;
            best_c = c;
          }
        }
      }
      if (best_v < 0) break;  // infeasible with these vertex weights
      Move(best_v, best_c);
    }
    for (ClusterId empty = 0; empty < k; ++empty) {
      if (count[empty] > 0) continue;
      const ClusterId donor = static_cast<ClusterId>(
          std::max_element(count.begin(), count.end()) - count.begin());
      NodeId best_v = -1;
      std::int64_t best_gain = std::numeric_limits<std::int64_t>::min();
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (part[v] != donor) continue;
        Connectivity(v, conn);
        const std::int64_t gain = conn[empty] - conn[donor];
        if (gain > best_gain) {
          best_gain = gain;
          best_v = v;
        }
      }
      Move(best_v, empty);
    }
  }
};

std::int64_t CutOf(const WeightedGraph& g, std::span<const ClusterId> part) {
  std::int64_t cut = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    for (std::int64_t e = g.row_offsets[v]; e < g.row_offsets[v + 1]; ++e) {
      if (part[v] != part[g.col_indices[e]]) cut += g.edge_weights[e];
    }
  }
  return cut / 2;
}

WeightedGraph InducedWeighted(const WeightedGraph& g,
                              std::span<const NodeId> nodes) {
  std::vector<NodeId> local(static_cast<std::size_t>(g.num_nodes()), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    local[nodes[i]] = static_cast<NodeId>(i);
  }
  WeightedGraph out;
  for (NodeId v : nodes) {
    out.vertex_weights.push_back(g.vertex_weights[v]);
    for (std::int64_t e = g.row_offsets[v]; e < g.row_offsets[v + 1]; ++e) {
      const NodeId u = local[g.col_indices[e]];
      if (u < 0) continue;
      out.col_indices.push_back(u);
      out.edge_weights.push_back(g.edge_weights[e]);
    }
    out.row_offsets.push_back(static_cast<std::int64_t>(out.col_indices.size()));
  }
  return out;
}

// Subset of connected components whose weight lies in [lo, hi], closest to
// `target`; empty if none exists or the graph is connected.
std::vector<ClusterId> PackComponents(const WeightedGraph& g,
                                      std::int64_t target, std::int64_t lo,
                                      std::int64_t hi) {
  const NodeId n = g.num_nodes();
  std::vector<NodeId> comp(static_cast<std::size_t>(n), -1);
  std::vector<std::int64_t> comp_weight;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const NodeId id = static_cast<NodeId>(comp_weight.size());
    comp_weight.push_back(0);
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      comp_weight[id] += g.vertex_weights[v];
      for (std::int64_t e = g.row_offsets[v]; e < g.row_offsets[v + 1]; ++e) {
        const NodeId u = g.col_indices[e];
        if (comp[u] < 0) {
          comp[u] = id;
          stack.push_back(u);
        }
      }
    }
  }
  if (comp_weight.size() < 2 || lo > hi) return {};
  const std::int64_t total = g.total_vertex_weight();
  constexpr double kMaxTableCells = 5e7;
  if (static_cast<double>(comp_weight.size()) * static_cast<double>(total) >
      kMaxTableCells) {
    return {};
  }
  // reach[i][w]: weight w reachable with the first i components.
  const std::size_t m = comp_weight.size();
  std::vector<std::vector<bool>> reach(
      m + 1, std::vector<bool>(static_cast<std::size_t>(total) + 1, false));
  reach[0][0] = true;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::int64_t w = 0; w <= total; ++w) {
      if (!reach[i][w]) continue;
      reach[i + 1][w] = true;
      if (w + comp_weight[i] <= total) reach[i + 1][w + comp_weight[i]] = true;
    }
  }
  std::int64_t best = -1;
  for (std::int64_t w = std::max<std::int64_t>(lo, 1);
       w <= std::min(hi, total - 1); ++w) {
    if (reach[m][w] && (best < 0 || std::llabs(w - target) <
                                        std::llabs(best - target))) {
      best = w;
    }
  }
  if (best < 0) return {};
  std::vector<bool> take(m, false);
  std::int64_t w = best;
  for (std::size_t i = m; i > 0; --i) {
    if (!reach[i - 1][w]) {
      take[i - 1] = true;
      w -= comp_weight[i - 1];
    }
  }
  std::vector<ClusterId> side(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) side[v] = take[comp[v]] ? 0 : 1;
  return side;
}

// Greedy graph growing from `start`: absorb the frontier vertex with the
// largest (edges into region - edges out) until side 0 reaches `target`.
std::vector<ClusterId> GrowRegion(const WeightedGraph& g, NodeId start,
                                  std::int64_t target, std::int64_t cap) {
  const NodeId n = g.num_nodes();
  std::vector<ClusterId> side(static_cast<std::size_t>(n), 1);
  std::vector<std::int64_t> gain(static_cast<std::size_t>(n), 0);
  for (NodeId v = 0; v < n; ++v) {
    for (std::int64_t e = g.row_offsets[v]; e < g.row_offsets[v + 1]; ++e) {
      gain[v] -= g.edge_weights[e];
    }
  }
  std::set<std::pair<std::int64_t, NodeId>> frontier;  // (-gain, id)
  std::vector<bool> in_frontier(static_cast<std::size_t>(n), false);
  std::int64_t weight0 = 0;
  NodeId next_unvisited = 0;

  auto absorb = [&](NodeId v) {
    side[v] = 0;
    weight0 += g.vertex_weights[v];
    for (std::int64_t e = g.row_offsets[v]; e < g.row_offsets[v + 1]; ++e) {
      const NodeId u = g.col_indices[e];
      if (side[u] == 0) continue;
      if (in_frontier[u]) frontier.erase({-gain[u], u});
      gain[u] += 2 * g.edge_weights[e];
      frontier.insert({-gain[u], u});
      in_frontier[u] = true;
    }
  };

  absorb(start);
  while (weight0 < target) {
    NodeId pick = -1;
    for (auto it = frontier.begin(); it != frontier.end(); ++it) {
      if (weight0 + g.vertex_weights[it->second] <= cap) {
        pick = it->second;
        frontier.erase(it);
        in_frontier[pick] = false;
        break;
      }
    }
    if (pick < 0) {
      // Frontier exhausted: jump to the lowest-id vertex still outside.
      while (next_unvisited < n &&
             (side[next_unvisited] == 0 ||
              weight0 + g.vertex_weights[next_unvisited] > cap)) {
        ++next_unvisited;
      }
      if (next_unvisited >= n) break;
      pick = next_unvisited;
      if (in_frontier[pick]) {
        frontier.erase({-gain[pick], pick});
        in_frontier[pick] = false;
      }
    }
    absorb(pick);
  }
  return side;
}

// Splits `g` in two with side-0 weight near total * k0 / (k0 + k1).
std::vector<ClusterId> Bisect(const WeightedGraph& g, ClusterId k0,
                              ClusterId k1, double eps, std::uint64_t seed,
                              int refine_passes) {
  const NodeId n = g.num_nodes();
  const std::int64_t total = g.total_vertex_weight();
  const std::int64_t target0 = total * k0 / (k0 + k1);
  const std::int64_t cap0 = std::max<std::int64_t>(
      static_cast<std::int64_t>(std::floor((1.0 + eps) * target0 + 1e-9)), 1);
  const std::int64_t cap1 = std::max<std::int64_t>(
      static_cast<std::int64_t>(
          std::floor((1.0 + eps) * (total - target0) + 1e-9)),
      1);

  std::vector<ClusterId> packed =
      PackComponents(g, target0, total - cap1, cap0);
  if (!packed.empty()) return packed;

  std::vector<NodeId> starts(static_cast<std::size_t>(n));
  std::iota(starts.begin(), starts.end(), 0);
  Rng rng(SplitMix64(seed ^ 0xb15ec7ULL));
  Shuffle(std::span<NodeId>(starts), rng);
  const NodeId trials = n <= 32 ? n : std::min<NodeId>(n, 12);

  std::vector<ClusterId> best;
  std::int64_t best_cut = std::numeric_limits<std::int64_t>::max();
  for (NodeId t = 0; t < trials; ++t) {
    std::vector<ClusterId> side = GrowRegion(g, starts[t], target0, cap0);
    PartitionState state(g, std::move(side), 2, {cap0, cap1});
    state.Refine(refine_passes);
    const std::int64_t cut = CutOf(g, state.part);
    if (cut < best_cut) {
      best_cut = cut;
      best = std::move(state.part);
    }
  }
  return best;
}

void RecursiveBisect(const WeightedGraph& g, std::span<const NodeId> nodes,
                     ClusterId k, ClusterId first_id, double eps,
                     std::uint64_t seed, int refine_passes,
                     std::vector<ClusterId>& out) {
  if (k == 1) {
    for (NodeId v : nodes) out[v] = first_id;
    return;
  }
  const WeightedGraph sub = InducedWeighted(g, nodes);
  const ClusterId k0 = k / 2;
  const ClusterId k1 = k - k0;
  const std::vector<ClusterId> side =
      Bisect(sub, k0, k1, eps, seed, refine_passes);
  std::vector<NodeId> left;
  std::vector<NodeId> right;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    (side[i] == 0 ? left : right).push_back(nodes[i]);
  }
  RecursiveBisect(g, left, k0, first_id, eps, SplitMix64(seed + 1),
                  refine_passes, out);
  RecursiveBisect(g, right, k1, first_id + k0, eps, SplitMix64(seed + 2),
                  refine_passes, out);
}

std::vector<std::int64_t> UniformCaps(const WeightedGraph& g, ClusterId k,
                                      double eps) {
  return std::vector<std::int64_t>(
      static_cast<std::size_t>(k),
      MaxClusterWeight(g.total_vertex_weight(), k, eps));
}

}  // namespace

CoarseLevel HeavyEdgeMatching(const WeightedGraph& g, std::uint64_t seed) {
  return Coarsen(g, seed, kNoLimit);
}

CoarseLevel HeavyEdgeMatching(const Graph& g, std::uint64_t seed) {
  return Coarsen(WeightedGraph::FromGraph(g), seed, kNoLimit);
}

ClusterAssignment ProjectAssignment(const ClusterAssignment& coarse,
                                    std::span<const NodeId> fine_to_coarse) {
  ClusterAssignment fine;
  fine.num_clusters = coarse.num_clusters;
  fine.cluster_of.reserve(fine_to_coarse.size());
  for (NodeId c : fine_to_coarse) fine.cluster_of.push_back(coarse[c]);
  return fine;
}

ClusterAssignment KlRefine(const WeightedGraph& g, const ClusterAssignment& a,
                           const PartitionConfig& cfg) {
  PartitionState state(g, a.cluster_of, a.num_clusters,
                       UniformCaps(g, a.num_clusters, cfg.balance_eps));
  state.Refine(cfg.refine_passes);
  return {std::move(state.part), a.num_clusters};
}

ClusterAssignment KlRefine(const Graph& g, const ClusterAssignment& a,
                           const PartitionConfig& cfg) {
  ValidateAssignment(a, g.num_nodes());
  return KlRefine(WeightedGraph::FromGraph(g), a, cfg);
}

ClusterAssignment MetisPartition(const Graph& g, const PartitionConfig& cfg) {
  if (cfg.k < 2) {
    throw Error(ErrorCode::kInvalidArgument, "k must be at least 2");
  }
  if (cfg.balance_eps < 0) {
    throw Error(ErrorCode::kInvalidArgument, "balance_eps must be >= 0");
  }
  if (g.num_nodes() < cfg.k) {
    throw Error(ErrorCode::kTooFewNodes,
                std::to_string(g.num_nodes()) + " nodes cannot form " +
                    std::to_string(cfg.k) + " clusters");
  }
  const NodeId stop = cfg.coarsen_stop > 0 ? cfg.coarsen_stop : 100 * cfg.k;

  std::vector<WeightedGraph> graphs{WeightedGraph::FromGraph(g)};
  std::vector<std::vector<NodeId>> maps;
  // Coarse vertices heavier than this make a balanced split impossible.
  const std::int64_t max_vertex_weight = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(1.5 * g.num_nodes() / stop));
  while (graphs.back().num_nodes() > stop) {
    CoarseLevel level =
        Coarsen(graphs.back(), SplitMix64(cfg.seed + maps.size()),
                max_vertex_weight);
    if (level.coarse.num_nodes() >
        static_cast<NodeId>(0.95 * graphs.back().num_nodes())) {
      break;
    }
    maps.push_back(std::move(level.fine_to_coarse));
    graphs.push_back(std::move(level.coarse));
  }

  const WeightedGraph& coarsest = graphs.back();
  std::vector<NodeId> all(static_cast<std::size_t>(coarsest.num_nodes()));
  std::iota(all.begin(), all.end(), 0);
  ClusterAssignment a;
  a.num_clusters = cfg.k;
  a.cluster_of.assign(all.size(), 0);
  RecursiveBisect(coarsest, all, cfg.k, 0, cfg.balance_eps, cfg.seed,
                  cfg.refine_passes, a.cluster_of);
  a = KlRefine(coarsest, a, cfg);

  for (std::size_t level = maps.size(); level > 0; --level) {
    a = ProjectAssignment(a, maps[level - 1]);
    a = KlRefine(graphs[level - 1], a, cfg);
  }

  PartitionState state(graphs.front(), std::move(a.cluster_of), cfg.k,
                       UniformCaps(graphs.front(), cfg.k, cfg.balance_eps));
  state.Rebalance();
  state.Refine(cfg.refine_passes);
  return {std::move(state.part), cfg.k};
}

std::int64_t EdgeCut(const Graph& g, const ClusterAssignment& a) {
  if (a.size() != static_cast<std::size_t>(g.num_nodes())) {
    throw Error(ErrorCode::kInvalidArgument, "assignment size mismatch");
  }
  std::int64_t cut = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if ((!g.undirected() || u < v) && a[u] != a[v]) ++cut;
    }
  }
  return cut;
}

std::int64_t EdgeCut(const WeightedGraph& g, const ClusterAssignment& a) {
  return CutOf(g, a.cluster_of);
}

}  // namespace ecgn
