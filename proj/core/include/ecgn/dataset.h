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

#ifndef ECGN_DATASET_H_
#define ECGN_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ecgn/graph.h"

namespace ecgn {

struct DatasetBundle {
  std::string name;
  Graph graph;
  FeatureMatrix features;
  LabelVector labels;
  std::vector<std::string> class_names;  // indexed by class id
  std::vector<std::string> node_ids;     // external id of each node
  // Citations or edges naming an unknown node; dropped on load.
  std::int64_t dropped_edges = 0;
};

// Raw citation corpus: content lines are `id f_1 .. f_d label`, cites lines
// `cited citing`, fields separated by tabs or spaces. Class ids follow the
// sorted label names; edges are symmetrized. Throws kParseError with the
// line number on malformed input and kIoError when a file cannot be read.
DatasetBundle LoadContentCites(const std::filesystem::path& content_path,
                               const std::filesystem::path& cites_path);

// Generic trio: edges.tsv (`u v` integer ids), features.csv (one dense row
// per node, comma separated), labels.tsv (`node_id class_name`). Nodes
// missing from labels.tsv are unlabeled.
DatasetBundle LoadTrio(const std::filesystem::path& dir);

// Picks the loader from the directory contents: a single *.content and
// *.cites pair, or the trio above.
DatasetBundle LoadDataset(const std::filesystem::path& dir);

struct ImbalanceSpec {
  int num_minority_classes = 3;
  std::int64_t majority_train_per_class = 200;
  std::int64_t minority_train_per_class = 20;
  std::int64_t val_count = 2050;
  std::int64_t test_count = 1426;
  // When non-empty, these classes are the minority instead of the last
  // num_minority_classes ids.
  std::vector<ClassId> minority_classes;
  std::uint64_t seed = 0;
};

// Minority class ids chosen by an ImbalanceSpec, ascending.
std::vector<ClassId> MinorityClasses(const ImbalanceSpec& spec,
                                     ClassId num_classes);

struct SplitSizes {
  std::int64_t train = 0;
  std::int64_t val = 0;
  std::int64_t test = 0;
};

// Train takes the exact per-class counts. Validation and test are drawn
// from the remaining labeled nodes; if the requested totals do not fit they
// are scaled down in proportion so that together they fill the remainder.
// Throws kInfeasibleSplit when a class is too small for its train count or
// a requested validation or test count would become 0.
SplitSizes PlanSplit(const LabelVector& labels, const ImbalanceSpec& spec);

// Seeded split following PlanSplit. Train nodes are drawn uniformly within
// each class, then validation and test uniformly from the rest.
NodeMaskSet SimulateImbalance(const LabelVector& labels,
                              const ImbalanceSpec& spec);

// Planted-partition benchmark graph with bag-of-words features, used by
// tests, benchmarks and the demo command.
struct SyntheticSpec {
  std::vector<NodeId> class_sizes = {200, 200, 200, 200};
  double p_in = 0.02;    // edge probability inside a class
  double p_out = 0.002;  // edge probability across classes
  Eigen::Index dim = 200;
  // Each class favours a band of dim / num_classes words; a node draws
  // `words_per_node` words, each from its band with probability
  // `topic_strength`, else uniformly.
  int words_per_node = 12;
  double topic_strength = 0.6;
  std::uint64_t seed = 0;
};

DatasetBundle MakeSyntheticDataset(const SyntheticSpec& spec);

// Writes the bundle in the trio format read by LoadTrio.
void SaveTrio(const DatasetBundle& data, const std::filesystem::path& dir);

}  // namespace ecgn

#endif  // ECGN_DATASET_H_
