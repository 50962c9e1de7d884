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

#ifndef ECGN_PIPELINE_H_
#define ECGN_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecgn/dataset.h"
#include "ecgn/lsh.h"
#include "ecgn/metrics.h"
#include "ecgn/partition.h"
#include "ecgn/serialize.h"
#include "ecgn/smote.h"
#include "ecgn/train.h"

namespace ecgn {

enum class Method {
  kEcgn,
  kEcgnNoSmote,
  kEcgnNoGlobal,
  kGraphSage,
  kGraphSageClusterFeat,
  kSmoteFeatures,
  kReweight,
  kEnWeight,
  kOversample,
  kCbSample,
  kClusterSmoteOnly,
};

enum class ClusterBackend { kMetis, kLsh, kFile };

struct ExperimentConfig {
  std::string name;
  // Directory loaded by LoadDataset; empty selects the synthetic generator.
  std::string dataset_path;
  SyntheticSpec synthetic;
  ImbalanceSpec imbalance;

  ClusterBackend backend = ClusterBackend::kMetis;
  PartitionConfig partition{.k = 3};
  LshConfig lsh;
  std::string assignment_file;

  TrainConfig train;
  // Loss weighting of the per-cluster pre-training.
  WeightMode pretrain_weight_mode = WeightMode::kBalancedCluster;
  SmoteConfig smote;

  Method method = Method::kEcgn;
  Transfer transfer = Transfer::kNone;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3};
  int num_workers = 1;
};

std::string_view MethodName(Method m);
std::string_view TransferName(Transfer t);
std::string_view WeightModeName(WeightMode m);

// Strict JSON schema: unknown keys and wrong types raise kConfigError.
ExperimentConfig ConfigFromJson(const Json& j);
Json ToJson(const ExperimentConfig& cfg);

// `dotted.key=value`; the value is read as JSON when it parses and as a
// string otherwise. Throws kConfigError for a malformed override.
void ApplyOverride(Json& j, std::string_view assignment);

ExperimentConfig LoadConfig(const std::filesystem::path& path,
                            std::span<const std::string> overrides = {});

struct SeedRun {
  std::uint64_t seed = 0;
  ClassificationMetrics test;
  double val_macro_f1 = 0.0;
  double seconds = 0.0;
  std::int64_t synthetic_nodes = 0;
  std::int64_t num_clusters = 0;
  std::int64_t edge_cut = 0;
};

struct MetricsReport {
  std::string name;
  std::string dataset;
  std::string method;
  std::vector<std::string> class_names;
  std::vector<SeedRun> runs;
  // Over runs' test macro-F1; std is the population standard deviation.
  double mean_macro_f1 = 0.0;
  double std_macro_f1 = 0.0;
  double min_macro_f1 = 0.0;
  double max_macro_f1 = 0.0;
  double mean_micro_f1 = 0.0;
  double mean_accuracy = 0.0;
  std::vector<double> mean_per_class_f1;
  std::vector<std::vector<std::int64_t>> confusion;  // summed over runs
  double wall_seconds = 0.0;
};

// Recomputes the aggregate fields from `runs`.
void Summarize(MetricsReport& report);

Json ToJson(const MetricsReport& r);
MetricsReport MetricsReportFromJson(const Json& j);
std::string ToMarkdown(const MetricsReport& r);

// The dataset named by the config (loaded from disk or generated).
DatasetBundle LoadExperimentData(const ExperimentConfig& cfg);

// One seed of the configured method. Failures are rethrown with the stage
// (split, cluster, pretrain, smote, integrate, train) prefixed.
SeedRun RunSeed(const DatasetBundle& data, const ExperimentConfig& cfg,
                std::uint64_t seed);

// Every seed of the config on an already loaded dataset.
MetricsReport RunPipeline(const DatasetBundle& data,
                          const ExperimentConfig& cfg);
MetricsReport RunPipeline(const ExperimentConfig& cfg);

struct SweepRow {
  ClusterId k = 0;
  std::optional<MetricsReport> report;
  std::string error;  // set when the run failed
};

// One full pipeline per k; failed runs are recorded and the sweep goes on.
std::vector<SweepRow> SweepClusters(const DatasetBundle& data,
                                    const ExperimentConfig& cfg,
                                    std::span<const ClusterId> k_list);
std::string SweepCsv(std::span<const SweepRow> rows);
std::string SweepMarkdown(std::span<const SweepRow> rows);

}  // namespace ecgn

#endif  // ECGN_PIPELINE_H_
