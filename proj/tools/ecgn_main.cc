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

// ecgn: command-line front end.
//
//   ecgn run       --config cfg.json [--override key=value]... [--out DIR]
//   ecgn sweep     --config cfg.json --k 2,3,4 [--override key=value]...
//   ecgn partition --dataset DIR --k K --out assignment.tsv
//   ecgn synth     --out DIR
//
// Exit codes: 0 success, 2 configuration or usage error, 3 runtime error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "ecgn/dataset.h"
#include "ecgn/error.h"
#include "ecgn/lsh.h"
#include "ecgn/partition.h"
#include "ecgn/pipeline.h"
#include "ecgn/serialize.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct RunArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  int workers = 0;
};

struct SweepArgs {
  RunArgs run;
  std::vector<ecgn::ClusterId> k_list;
};

struct PartitionArgs {
  std::string dataset;
  ecgn::ClusterId k = 3;
  std::string out;
  std::string backend = "metis";
  double eps = 0.1;
  int refine_passes = 10;
  std::uint64_t seed = 0;
};

struct SynthArgs {
  std::string out;
  ecgn::SyntheticSpec spec;
};

ecgn::ExperimentConfig LoadRunConfig(const RunArgs& args) {
  ecgn::ExperimentConfig cfg = ecgn::LoadConfig(args.config, args.overrides);
  if (args.workers > 0) cfg.num_workers = args.workers;
  return cfg;
}

int Run(const RunArgs& args) {
  const ecgn::ExperimentConfig cfg = LoadRunConfig(args);
  const ecgn::MetricsReport report = ecgn::RunPipeline(cfg);
  const std::string md = ecgn::ToMarkdown(report);
  std::cout << md;
  if (!args.out.empty()) {
    ecgn::SaveJson(fs::path(args.out) / "report.json", ecgn::ToJson(report));
    ecgn::WriteText(fs::path(args.out) / "report.md", md);
    ecgn::SaveJson(fs::path(args.out) / "config.json", ecgn::ToJson(cfg));
  }
  return kExitOk;
}

int Sweep(const SweepArgs& args) {
  const ecgn::ExperimentConfig cfg = LoadRunConfig(args.run);
  const ecgn::DatasetBundle data = ecgn::LoadExperimentData(cfg);
  const auto rows = ecgn::SweepClusters(data, cfg, args.k_list);
  const std::string md = ecgn::SweepMarkdown(rows);
  std::cout << md;
  if (!args.run.out.empty()) {
    ecgn::WriteText(fs::path(args.run.out) / "sweep.csv", ecgn::SweepCsv(rows));
    ecgn::WriteText(fs::path(args.run.out) / "sweep.md", md);
  }
  for (const auto& row : rows) {
    if (!row.error.empty()) return kExitRuntime;
  }
  return kExitOk;
}

int Partition(const PartitionArgs& args) {
  const ecgn::DatasetBundle data = ecgn::LoadDataset(args.dataset);
  ecgn::ClusterAssignment a;
  if (args.backend == "metis") {
    ecgn::PartitionConfig pc;
    pc.k = args.k;
    pc.balance_eps = args.eps;
    pc.refine_passes = args.refine_passes;
    pc.seed = args.seed;
    a = ecgn::MetisPartition(data.graph, pc);
  } else {
    ecgn::LshConfig lc;
    lc.seed = args.seed;
    a = ecgn::LshCluster(data.features, lc).assignment;
  }
  ecgn::SaveAssignment(args.out, a);
  std::int64_t largest = 0;
  for (std::int64_t s : a.Sizes()) largest = std::max(largest, s);
  std::cout << fmt::format(
      "nodes {} edges {} clusters {} edge_cut {} largest_cluster {}\n",
      data.graph.num_nodes(), data.graph.num_edges(), a.num_clusters,
      ecgn::EdgeCut(data.graph, a), largest);
  return kExitOk;
}

int Synth(const SynthArgs& args) {
  const ecgn::DatasetBundle data = ecgn::MakeSyntheticDataset(args.spec);
  ecgn::SaveTrio(data, args.out);
  std::cout << fmt::format("wrote {} nodes, {} edges to {}\n",
                           data.graph.num_nodes(), data.graph.num_edges(),
                           args.out);
  return kExitOk;
}

void AddRunOptions(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("--config", args.config, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--override", args.overrides,
                  "dotted.key=value applied on top of the config")
      ->allow_extra_args(false);
  cmd->add_option("--out", args.out, "Directory for the written reports");
  cmd->add_option("--workers", args.workers,
                  "Threads for cluster pre-training (0 keeps the config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster-aware GNN training with latent-space SMOTE"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  AddRunOptions(run, run_args);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run a config for several k");
  AddRunOptions(sweep, sweep_args.run);
  sweep->add_option("--k", sweep_args.k_list, "Cluster counts, e.g. 2,3,4")
      ->required()
      ->delimiter(',');

  PartitionArgs part_args;
  auto* part = app.add_subcommand("partition", "Cluster a dataset's nodes");
  part->add_option("--dataset", part_args.dataset, "Dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  part->add_option("--k", part_args.k, "Number of clusters (metis)");
  part->add_option("--out", part_args.out, "Assignment TSV")->required();
  part->add_option("--backend", part_args.backend)
      ->check(CLI::IsMember({"metis", "lsh"}));
  part->add_option("--eps", part_args.eps, "Balance tolerance");
  part->add_option("--refine-passes", part_args.refine_passes);
  part->add_option("--seed", part_args.seed);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Write a planted-partition dataset");
  synth->add_option("--out", synth_args.out, "Output directory")->required();
  synth->add_option("--class-sizes", synth_args.spec.class_sizes)
      ->delimiter(',');
  synth->add_option("--p-in", synth_args.spec.p_in);
  synth->add_option("--p-out", synth_args.spec.p_out);
  synth->add_option("--dim", synth_args.spec.dim);
  synth->add_option("--seed", synth_args.spec.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*run) return Run(run_args);
    if (*sweep) return Sweep(sweep_args);
    if (*part) return Partition(part_args);
    if (*synth) return Synth(synth_args);
  } catch (const ecgn::Error& e) {
    spdlog::error("{}", e.what());
    return e.code() == ecgn::ErrorCode::kConfigError ? kExitConfig
                                                     : kExitRuntime;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitRuntime;
  }
  return kExitConfig;
}
