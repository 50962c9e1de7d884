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

#include "ecgn/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <string_view>
#include <unordered_map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "ecgn/error.h"
#include "ecgn/rng.h"
#include "ecgn/serialize.h"

namespace ecgn {
namespace {

namespace fs = std::filesystem;

std::ifstream OpenOrThrow(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return in;
}

std::vector<std::string_view> Split(std::string_view line, bool comma) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  const auto is_sep = [comma](char ch) {
    return comma ? ch == ',' : (ch == ' ' || ch == '\t' || ch == '\r');
  };
  if (comma) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.remove_suffix(1);
    }
    if (line.empty()) return out;
    for (;;) {
      const std::size_t j = line.find(',', i);
      out.push_back(line.substr(i, j == std::string_view::npos ? j : j - i));
      if (j == std::string_view::npos) break;
      i = j + 1;
    }
    return out;
  }
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void ParseFail(const fs::path& path, std::size_t line,
                            const std::string& what) {
  throw Error(ErrorCode::kParseError,
              path.string() + ":" + std::to_string(line) + ": " + what);
}

double ParseDouble(std::string_view token, const fs::path& path,
                   std::size_t line) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() ||
      !std::isfinite(v)) {
    ParseFail(path, line, "bad number '" + std::string(token) + "'");
  }
  return v;
}

std::int64_t ParseInt(std::string_view token, const fs::path& path,
                      std::size_t line) {
  std::int64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    ParseFail(path, line, "bad integer '" + std::string(token) + "'");
  }
  return v;
}

// Class ids by sorted name.
LabelVector IndexLabels(const std::vector<std::string>& names,
                        std::vector<std::string>& class_names) {
  std::map<std::string, ClassId> ids;
  for (const auto& n : names) {
    if (!n.empty()) ids.emplace(n, 0);
  }
  class_names.clear();
  for (auto& [name, id] : ids) {
    id = static_cast<ClassId>(class_names.size());
    class_names.push_back(name);
  }
  LabelVector labels;
  labels.num_classes = static_cast<ClassId>(class_names.size());
  for (const auto& n : names) {
    labels.labels.push_back(n.empty() ? LabelVector::kUnlabeled : ids.at(n));
  }
  return labels;
}

}  // namespace

DatasetBundle LoadContentCites(const fs::path& content_path,
                               const fs::path& cites_path) {
  DatasetBundle b;
  b.name = content_path.stem().string();
  std::unordered_map<std::string, NodeId> index;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> label_names;
  {
    std::ifstream in = OpenOrThrow(content_path);
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = Split(line, false);
      if (tokens.empty()) continue;
      if (tokens.size() < 3) {
        ParseFail(content_path, line_no, "expected id, features and label");
      }
      const std::size_t d = tokens.size() - 2;
      if (rows.empty()) {
        dim = d;
      } else if (d != dim) {
        ParseFail(content_path, line_no,
                  "row has " + std::to_string(d) + " features, expected " +
                      std::to_string(dim));
      }
      std::string id(tokens.front());
      if (!index.emplace(id, static_cast<NodeId>(rows.size())).second) {
        ParseFail(content_path, line_no, "duplicate node id '" + id + "'");
      }
      std::vector<double> row(d);
      for (std::size_t j = 0; j < d; ++j) {
        row[j] = ParseDouble(tokens[j + 1], content_path, line_no);
      }
      rows.push_back(std::move(row));
      b.node_ids.push_back(std::move(id));
      label_names.emplace_back(tokens.back());
    }
    if (rows.empty()) ParseFail(content_path, line_no, "no nodes");
    b.features.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < dim; ++j) b.features(i, j) = rows[i][j];
    }
  }
  b.labels = IndexLabels(label_names, b.class_names);

  std::vector<Edge> edges;
  {
    std::ifstream in = OpenOrThrow(cites_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = Split(line, false);
      if (tokens.empty()) continue;
      if (tokens.size() != 2) {
        ParseFail(cites_path, line_no, "expected two node ids");
      }
      const auto u = index.find(std::string(tokens[0]));
      const auto v = index.find(std::string(tokens[1]));
      if (u == index.end() || v == index.end()) {
        ++b.dropped_edges;
        continue;
      }
      edges.emplace_back(u->second, v->second);
    }
  }
  if (b.dropped_edges > 0) {
    spdlog::info("{}: dropped {} citations to unknown ids", b.name,
                 b.dropped_edges);
  }
  b.graph = BuildGraph(edges, static_cast<NodeId>(rows.size()));
  return b;
}

DatasetBundle LoadTrio(const fs::path& dir) {
  DatasetBundle b;
  b.name = dir.filename().string();
  if (b.name.empty()) b.name = dir.parent_path().filename().string();
  std::vector<std::vector<double>> rows;
  {
    const fs::path path = dir / "features.csv";
    std::ifstream in = OpenOrThrow(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = Split(line, true);
      if (tokens.empty()) continue;
      if (!rows.empty() && tokens.size() != rows.front().size()) {
        ParseFail(path, line_no, "inconsistent feature count");
      }
      std::vector<double> row;
      for (auto t : tokens) row.push_back(ParseDouble(t, path, line_no));
      rows.push_back(std::move(row));
    }
    if (rows.empty()) ParseFail(path, line_no, "no nodes");
  }
  const auto n = static_cast<NodeId>(rows.size());
  b.features.resize(n, static_cast<Eigen::Index>(rows.front().size()));
  for (NodeId i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      b.features(i, j) = rows[i][j];
    }
    b.node_ids.push_back(std::to_string(i));
  }

  std::vector<std::string> names(static_cast<std::size_t>(n));
  {
    const fs::path path = dir / "labels.tsv";
    std::ifstream in = OpenOrThrow(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = Split(line, false);
      if (tokens.empty()) continue;
      if (tokens.size() != 2) ParseFail(path, line_no, "expected id and class");
      const std::int64_t v = ParseInt(tokens[0], path, line_no);
      if (v < 0 || v >= n) ParseFail(path, line_no, "node id out of range");
      names[v] = std::string(tokens[1]);
    }
  }
  b.labels = IndexLabels(names, b.class_names);

  std::vector<Edge> edges;
  {
    const fs::path path = dir / "edges.tsv";
    std::ifstream in = OpenOrThrow(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = Split(line, false);
      if (tokens.empty()) continue;
      if (tokens.size() != 2) ParseFail(path, line_no, "expected two node ids");
      const std::int64_t u = ParseInt(tokens[0], path, line_no);
      const std::int64_t v = ParseInt(tokens[1], path, line_no);
      if (u < 0 || v < 0 || u >= n || v >= n) {
        ++b.dropped_edges;
        continue;
      }
      edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
  }
  if (b.dropped_edges > 0) {
    spdlog::info("{}: dropped {} edges to unknown ids", b.name,
                 b.dropped_edges);
  }
  b.graph = BuildGraph(edges, n);
  return b;
}

DatasetBundle LoadDataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, dir.string() + " is not a directory");
  }
  if (fs::exists(dir / "edges.tsv") && fs::exists(dir / "features.csv") &&
      fs::exists(dir / "labels.tsv")) {
    return LoadTrio(dir);
  }
  std::vector<fs::path> content;
  std::vector<fs::path> cites;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".content") content.push_back(entry.path());
    if (entry.path().extension() == ".cites") cites.push_back(entry.path());
  }
  if (content.size() != 1 || cites.size() != 1) {
    throw Error(ErrorCode::kIoError,
                dir.string() +
                    " holds neither one .content/.cites pair nor "
                    "edges.tsv, features.csv and labels.tsv");
  }
  return LoadContentCites(content.front(), cites.front());
}

std::vector<ClassId> MinorityClasses(const ImbalanceSpec& spec,
                                     ClassId num_classes) {
  std::vector<ClassId> out = spec.minority_classes;
  if (out.empty()) {
    if (spec.num_minority_classes < 0 ||
        spec.num_minority_classes > num_classes) {
      throw Error(ErrorCode::kInfeasibleSplit,
                  "cannot pick " + std::to_string(spec.num_minority_classes) +
                      " minority classes out of " +
                      std::to_string(num_classes));
    }
    for (ClassId c = num_classes - spec.num_minority_classes; c < num_classes;
         ++c) {
      out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (ClassId c : out) {
    if (c < 0 || c >= num_classes) {
      throw Error(ErrorCode::kInfeasibleSplit,
                  "minority class " + std::to_string(c) + " out of range");
    }
  }
  return out;
}

SplitSizes PlanSplit(const LabelVector& labels, const ImbalanceSpec& spec) {
  if (spec.majority_train_per_class < 1 || spec.minority_train_per_class < 1 ||
      spec.val_count < 0 || spec.test_count < 0) {
    throw Error(ErrorCode::kInfeasibleSplit, "negative or zero split count");
  }
  const auto minority = MinorityClasses(spec, labels.num_classes);
  std::vector<std::int64_t> population(
      static_cast<std::size_t>(labels.num_classes), 0);
  std::int64_t labeled = 0;
  for (ClassId y : labels.labels) {
    if (y == LabelVector::kUnlabeled) continue;
    ++population[y];
    ++labeled;
  }
  SplitSizes s;
  for (ClassId c = 0; c < labels.num_classes; ++c) {
    const bool is_minority =
        std::binary_search(minority.begin(), minority.end(), c);
    const std::int64_t want = is_minority ? spec.minority_train_per_class
                                          : spec.majority_train_per_class;
    if (population[c] < want) {
      throw Error(ErrorCode::kInfeasibleSplit,
                  "class " + std::to_string(c) + " has " +
                      std::to_string(population[c]) + " nodes, " +
                      std::to_string(want) + " requested for training");
    }
    s.train += want;
  }
  const std::int64_t rest = labeled - s.train;
  s.val = spec.val_count;
  s.test = spec.test_count;
  if (s.val + s.test > rest) {
    const double scale =
        static_cast<double>(rest) / static_cast<double>(s.val + s.test);
    s.val = static_cast<std::int64_t>(
        std::floor(static_cast<double>(spec.val_count) * scale));
    s.test = spec.test_count > 0 ? rest - s.val : 0;
    if (spec.test_count == 0) s.val = rest;
  }
  if ((spec.val_count > 0 && s.val == 0) ||
      (spec.test_count > 0 && s.test == 0)) {
    throw Error(ErrorCode::kInfeasibleSplit,
                "no nodes left for validation or test after training (" +
                    std::to_string(rest) + " remaining)");
  }
  return s;
}

NodeMaskSet SimulateImbalance(const LabelVector& labels,
                              const ImbalanceSpec& spec) {
  ValidateLabels(labels);
  const SplitSizes sizes = PlanSplit(labels, spec);
  const auto minority = MinorityClasses(spec, labels.num_classes);
  const std::size_t n = labels.size();
  NodeMaskSet masks{NodeMask(n, false), NodeMask(n, false),
                    NodeMask(n, false)};

  Rng rng = DeriveRng(spec.seed, 0x73706c6974ULL);
  std::vector<std::vector<NodeId>> by_class(
      static_cast<std::size_t>(labels.num_classes));
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != LabelVector::kUnlabeled) {
      by_class[labels[i]].push_back(static_cast<NodeId>(i));
    }
  }
  for (ClassId c = 0; c < labels.num_classes; ++c) {
    auto& nodes = by_class[c];
    Shuffle(std::span<NodeId>(nodes), rng);
    const bool is_minority =
        std::binary_search(minority.begin(), minority.end(), c);
    const std::int64_t want = is_minority ? spec.minority_train_per_class
                                          : spec.majority_train_per_class;
    for (std::int64_t j = 0; j < want; ++j) masks.train[nodes[j]] = true;
  }
  std::vector<NodeId> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != LabelVector::kUnlabeled && !masks.train[i]) {
      rest.push_back(static_cast<NodeId>(i));
    }
  }
  Shuffle(std::span<NodeId>(rest), rng);
  for (std::int64_t j = 0; j < sizes.val; ++j) masks.val[rest[j]] = true;
  for (std::int64_t j = 0; j < sizes.test; ++j) {
    masks.test[rest[sizes.val + j]] = true;
  }
  return masks;
}

DatasetBundle MakeSyntheticDataset(const SyntheticSpec& spec) {
  const auto c = static_cast<ClassId>(spec.class_sizes.size());
  if (c < 1 || spec.dim < c || spec.words_per_node < 1 ||
      std::any_of(spec.class_sizes.begin(), spec.class_sizes.end(),
                  [](NodeId s) { return s < 1; })) {
    throw Error(ErrorCode::kInvalidArgument, "invalid synthetic dataset parameters");
  }
  const NodeId n = std::accumulate(spec.class_sizes.begin(),
                                   spec.class_sizes.end(), NodeId{0});
  Rng rng = DeriveRng(spec.seed, 0x73796e7468ULL);

  // Random relabeling so node ids carry no class information.
  std::vector<NodeId> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Shuffle(std::span<NodeId>(perm), rng);
  std::vector<NodeId> block_start{0};
  for (NodeId s : spec.class_sizes) block_start.push_back(block_start.back() + s);

  DatasetBundle b;
  b.name = "synthetic";
  b.labels.num_classes = c;
  b.labels.labels.assign(static_cast<std::size_t>(n), 0);
  for (ClassId k = 0; k < c; ++k) {
    b.class_names.push_back("class_" + std::to_string(k));
    for (NodeId i = block_start[k]; i < block_start[k + 1]; ++i) {
      b.labels.labels[perm[i]] = k;
    }
  }
  for (NodeId i = 0; i < n; ++i) b.node_ids.push_back(std::to_string(i));

  // Edges per block pair by geometric skipping over candidate pairs.
  std::vector<Edge> edges;
  for (ClassId a = 0; a < c; ++a) {
    for (ClassId bb = a; bb < c; ++bb) {
      const double p = a == bb ? spec.p_in : spec.p_out;
      if (p <= 0.0) continue;
      const std::int64_t sa = spec.class_sizes[a];
      const std::int64_t sb = spec.class_sizes[bb];
      const std::int64_t total = sa * sb;
      const double log_q = std::log1p(-std::min(p, 1.0 - 1e-16));
      for (std::int64_t idx = -1;;) {
        double u = Uniform01(rng);
        while (u <= 0.0) u = Uniform01(rng);
        idx += 1 + (p >= 1.0 ? 0
                             : static_cast<std::int64_t>(
                                   std::floor(std::log(u) / log_q)));
        if (idx >= total) break;
        const std::int64_t i = idx / sb;
        const std::int64_t j = idx % sb;
        if (a == bb && i >= j) continue;
        edges.emplace_back(perm[block_start[a] + i], perm[block_start[bb] + j]);
      }
    }
  }
  b.graph = BuildGraph(edges, n);

  b.features = Matrix::Zero(n, spec.dim);
  const Eigen::Index band = spec.dim / c;
  for (NodeId v = 0; v < n; ++v) {
    const ClassId k = b.labels[v];
    for (int w = 0; w < spec.words_per_node; ++w) {
      const Eigen::Index word =
          Uniform01(rng) < spec.topic_strength
              ? k * band + static_cast<Eigen::Index>(UniformIndex(rng, band))
              : static_cast<Eigen::Index>(UniformIndex(rng, spec.dim));
      b.features(v, word) = 1.0;
    }
  }
  return b;
}

void SaveTrio(const DatasetBundle& data, const fs::path& dir) {
  std::string edges;
  for (const Edge& e : EdgesOf(data.graph)) {
    edges += fmt::format("{}\t{}\n", e.first, e.second);
  }
  std::string features;
  for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
      if (j > 0) features += ',';
      features += fmt::format("{}", data.features(i, j));
    }
    features += '\n';
  }
  std::string labels;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    if (data.labels[i] == LabelVector::kUnlabeled) continue;
    labels += fmt::format("{}\t{}\n", i, data.class_names[data.labels[i]]);
  }
  WriteText(dir / "edges.tsv", edges);
  WriteText(dir / "features.csv", features);
  WriteText(dir / "labels.tsv", labels);
}

}  // namespace ecgn
