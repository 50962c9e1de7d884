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

#include "ecgn/pipeline.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <set>
#include <utility>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "ecgn/baselines.h"
#include "ecgn/error.h"
#include "ecgn/rng.h"

namespace ecgn {
namespace {

namespace fs = std::filesystem;

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<Method, 11> kMethods{{
    {Method::kEcgn, "ecgn"},
    {Method::kEcgnNoSmote, "ecgn_no_smote"},
    {Method::kEcgnNoGlobal, "ecgn_no_global"},
    {Method::kGraphSage, "graphsage"},
    {Method::kGraphSageClusterFeat, "graphsage_cluster_feat"},
    {Method::kSmoteFeatures, "smote_features"},
    {Method::kReweight, "reweight"},
    {Method::kEnWeight, "en_weight"},
    {Method::kOversample, "oversample"},
    {Method::kCbSample, "cb_sample"},
    {Method::kClusterSmoteOnly, "cluster_smote_only"},
}};
constexpr NameTable<Transfer, 4> kTransfers{{
    {Transfer::kNone, "none"},
    {Transfer::kAverage, "average"},
    {Transfer::kLargest, "largest"},
    {Transfer::kBest, "best"},
}};
constexpr NameTable<WeightMode, 4> kWeightModes{{
    {WeightMode::kUniform, "uniform"},
    {WeightMode::kInverseFreq, "inverse_freq"},
    {WeightMode::kEffectiveNumber, "effective_number"},
    {WeightMode::kBalancedCluster, "balanced_cluster"},
}};
constexpr NameTable<ClusterBackend, 3> kBackends{{
    {ClusterBackend::kMetis, "metis"},
    {ClusterBackend::kLsh, "lsh"},
    {ClusterBackend::kFile, "file"},
}};
constexpr NameTable<ConnectivityMode, 2> kConnectivity{{
    {ConnectivityMode::kOutOfClass, "out_of_class"},
    {ConnectivityMode::kOutOfCluster, "out_of_cluster"},
}};
constexpr NameTable<Activation, 2> kActivations{{
    {Activation::kRelu, "relu"},
    {Activation::kIdentity, "identity"},
}};

template <typename E, std::size_t N>
std::string_view NameOf(const NameTable<E, N>& table, E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "unknown";
}

template <typename E, std::size_t N>
E ValueOf(const NameTable<E, N>& table, std::string_view name,
          std::string_view key) {
  for (const auto& [e, n] : table) {
    if (n == name) return e;
  }
  std::string options;
  for (const auto& [e, n] : table) {
    options += options.empty() ? "" : ", ";
    options += n;
  }
  throw Error(ErrorCode::kConfigError,
              fmt::format("{}: '{}' is not one of {}", key, name, options));
}

// Reads one JSON object, remembering which keys were consumed so that
// leftovers (typos) can be reported.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw Error(ErrorCode::kConfigError, Where() + " must be an object");
    }
  }

  template <typename T>
  void Get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("{}.{}: {}", path_, key, e.what()));
    }
  }

  template <typename E, std::size_t N>
  void GetEnum(const char* key, const NameTable<E, N>& table, E& out) {
    std::string name;
    Get(key, name);
    if (j_.contains(key)) out = ValueOf(table, name, path_ + "." + key);
  }

  std::optional<ObjectReader> Child(const char* key) {
    if (!j_.contains(key)) return std::nullopt;
    seen_.insert(key);
    return ObjectReader(j_.at(key), path_ + "." + key);
  }

  void Finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) {
        throw Error(ErrorCode::kConfigError,
                    fmt::format("unknown key {}.{}", path_, key));
      }
    }
  }

 private:
  std::string Where() const { return path_.empty() ? "config" : path_; }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
auto Stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw e.WithContext(name);
  }
}

ClusterAssignment ClusterNodes(const DatasetBundle& data,
                               const ExperimentConfig& cfg,
                               std::uint64_t seed) {
  switch (cfg.backend) {
    case ClusterBackend::kMetis: {
      PartitionConfig pc = cfg.partition;
      pc.seed = seed;
      return MetisPartition(data.graph, pc);
    }
    case ClusterBackend::kLsh: {
      LshConfig lc = cfg.lsh;
      lc.seed = seed;
      return LshCluster(data.features, lc).assignment;
    }
    case ClusterBackend::kFile: {
      ClusterAssignment a = LoadAssignment(cfg.assignment_file);
      ValidateAssignment(a, data.graph.num_nodes());
      return a;
    }
  }
  throw Error(ErrorCode::kConfigError, "unknown clustering backend");
}

bool NeedsClusters(const ExperimentConfig& cfg) {
  switch (cfg.method) {
    case Method::kEcgn:
    case Method::kEcgnNoSmote:
    case Method::kEcgnNoGlobal:
    case Method::kGraphSageClusterFeat:
      return true;
    case Method::kClusterSmoteOnly:
      return cfg.smote.connectivity_mode == ConnectivityMode::kOutOfCluster;
    default:
      return false;
  }
}

Matrix TrainAndScore(const Graph& g, const Matrix& x,
                     const LabelVector& labels, const NodeMaskSet& masks,
                     const TrainConfig& tc, const TrainOptions& options = {}) {
  const NodeFeatures features(x);
  GnnParams p0 = InitParams(x.cols(), tc.hidden_dim, tc.num_layers,
                            labels.num_classes, tc.seed, tc.activation);
  TrainResult r = Train(g, features, labels, masks, std::move(p0), tc, options);
  return Forward(g, features, r.params).logits;
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

std::string_view MethodName(Method m) { return NameOf(kMethods, m); }
std::string_view TransferName(Transfer t) { return NameOf(kTransfers, t); }
std::string_view WeightModeName(WeightMode m) {
  return NameOf(kWeightModes, m);
}

ExperimentConfig ConfigFromJson(const Json& j) {
  ExperimentConfig cfg;
  ObjectReader root(j, "config");
  root.Get("name", cfg.name);
  if (auto ds = root.Child("dataset")) {
    ds->Get("path", cfg.dataset_path);
    if (auto syn = ds->Child("synthetic")) {
      syn->Get("class_sizes", cfg.synthetic.class_sizes);
      syn->Get("p_in", cfg.synthetic.p_in);
      syn->Get("p_out", cfg.synthetic.p_out);
      syn->Get("dim", cfg.synthetic.dim);
      syn->Get("words_per_node", cfg.synthetic.words_per_node);
      syn->Get("topic_strength", cfg.synthetic.topic_strength);
      syn->Get("seed", cfg.synthetic.seed);
      syn->Finish();
    }
    ds->Finish();
  }
  if (auto im = root.Child("imbalance")) {
    im->Get("num_minority_classes", cfg.imbalance.num_minority_classes);
    im->Get("majority_train_per_class",
            cfg.imbalance.majority_train_per_class);
    im->Get("minority_train_per_class",
            cfg.imbalance.minority_train_per_class);
    im->Get("val_count", cfg.imbalance.val_count);
    im->Get("test_count", cfg.imbalance.test_count);
    im->Get("minority_classes", cfg.imbalance.minority_classes);
    im->Finish();
  }
  if (auto cl = root.Child("clustering")) {
    cl->GetEnum("backend", kBackends, cfg.backend);
    cl->Get("k", cfg.partition.k);
    cl->Get("balance_eps", cfg.partition.balance_eps);
    cl->Get("coarsen_stop", cfg.partition.coarsen_stop);
    cl->Get("refine_passes", cfg.partition.refine_passes);
    cl->Get("assignment_file", cfg.assignment_file);
    if (auto lsh = cl->Child("lsh")) {
      lsh->Get("num_tables", cfg.lsh.num_tables);
      lsh->Get("num_projections", cfg.lsh.num_projections);
      lsh->Get("similarity_threshold", cfg.lsh.similarity_threshold);
      lsh->Get("min_cluster_size", cfg.lsh.min_cluster_size);
      lsh->Finish();
    }
    cl->Finish();
  }
  if (auto tr = root.Child("train")) {
    tr->Get("learning_rate", cfg.train.learning_rate);
    tr->Get("max_epochs", cfg.train.max_epochs);
    tr->Get("patience", cfg.train.patience);
    tr->Get("hidden_dim", cfg.train.hidden_dim);
    tr->Get("num_layers", cfg.train.num_layers);
    tr->GetEnum("weight_mode", kWeightModes, cfg.train.weight_mode);
    tr->Get("en_beta", cfg.train.en_beta);
    tr->Get("weight_decay", cfg.train.weight_decay);
    tr->GetEnum("activation", kActivations, cfg.train.activation);
    // Accepted for compatibility with mini-batch setups; training here is
    // always full batch.
    int batch_size = 0;
    tr->Get("batch_size", batch_size);
    tr->Finish();
  }
  root.GetEnum("pretrain_weight_mode", kWeightModes, cfg.pretrain_weight_mode);
  if (auto sm = root.Child("smote")) {
    sm->Get("alpha", cfg.smote.alpha);
    std::map<std::string, std::int64_t> targets;
    sm->Get("target_counts", targets);
    for (const auto& [cls, count] : targets) {
      try {
        cfg.smote.target_counts[std::stoi(cls)] = count;
      } catch (const std::exception&) {
        throw Error(ErrorCode::kConfigError,
                    "smote.target_counts keys must be class ids, got '" + cls +
                        "'");
      }
    }
    sm->Get("seed_count_k", cfg.smote.seed_count_k);
    sm->GetEnum("connectivity_mode", kConnectivity,
                cfg.smote.connectivity_mode);
    sm->Finish();
  }
  root.GetEnum("method", kMethods, cfg.method);
  root.GetEnum("transfer", kTransfers, cfg.transfer);
  root.Get("seeds", cfg.seeds);
  root.Get("num_workers", cfg.num_workers);
  root.Finish();

  if (cfg.seeds.empty()) {
    throw Error(ErrorCode::kConfigError, "seeds must not be empty");
  }
  if (cfg.backend == ClusterBackend::kFile && cfg.assignment_file.empty() &&
      NeedsClusters(cfg)) {
    throw Error(ErrorCode::kConfigError,
                "clustering.backend=file needs clustering.assignment_file");
  }
  if (!(cfg.smote.alpha > 0.0)) {
    throw Error(ErrorCode::kConfigError, "smote.alpha must be positive");
  }
  ValidateTrainConfig(cfg.train);
  return cfg;
}

Json ToJson(const ExperimentConfig& cfg) {
  Json j;
  j["name"] = cfg.name;
  j["dataset"] = {{"path", cfg.dataset_path},
                  {"synthetic",
                   {{"class_sizes", cfg.synthetic.class_sizes},
                    {"p_in", cfg.synthetic.p_in},
                    {"p_out", cfg.synthetic.p_out},
                    {"dim", cfg.synthetic.dim},
                    {"words_per_node", cfg.synthetic.words_per_node},
                    {"topic_strength", cfg.synthetic.topic_strength},
                    {"seed", cfg.synthetic.seed}}}};
  j["imbalance"] = {
      {"num_minority_classes", cfg.imbalance.num_minority_classes},
      {"majority_train_per_class", cfg.imbalance.majority_train_per_class},
      {"minority_train_per_class", cfg.imbalance.minority_train_per_class},
      {"val_count", cfg.imbalance.val_count},
      {"test_count", cfg.imbalance.test_count},
      {"minority_classes", cfg.imbalance.minority_classes}};
  j["clustering"] = {
      {"backend", NameOf(kBackends, cfg.backend)},
      {"k", cfg.partition.k},
      {"balance_eps", cfg.partition.balance_eps},
      {"coarsen_stop", cfg.partition.coarsen_stop},
      {"refine_passes", cfg.partition.refine_passes},
      {"assignment_file", cfg.assignment_file},
      {"lsh",
       {{"num_tables", cfg.lsh.num_tables},
        {"num_projections", cfg.lsh.num_projections},
        {"similarity_threshold", cfg.lsh.similarity_threshold},
        {"min_cluster_size", cfg.lsh.min_cluster_size}}}};
  j["train"] = {{"learning_rate", cfg.train.learning_rate},
                {"max_epochs", cfg.train.max_epochs},
                {"patience", cfg.train.patience},
                {"hidden_dim", cfg.train.hidden_dim},
                {"num_layers", cfg.train.num_layers},
                {"weight_mode", WeightModeName(cfg.train.weight_mode)},
                {"en_beta", cfg.train.en_beta},
                {"weight_decay", cfg.train.weight_decay},
                {"activation", NameOf(kActivations, cfg.train.activation)}};
  j["pretrain_weight_mode"] = WeightModeName(cfg.pretrain_weight_mode);
  Json targets = Json::object();
  for (const auto& [cls, count] : cfg.smote.target_counts) {
    targets[std::to_string(cls)] = count;
  }
  j["smote"] = {
      {"alpha", cfg.smote.alpha},
      {"target_counts", std::move(targets)},
      {"seed_count_k", cfg.smote.seed_count_k},
      {"connectivity_mode",
       NameOf(kConnectivity, cfg.smote.connectivity_mode)}};
  j["method"] = MethodName(cfg.method);
  j["transfer"] = TransferName(cfg.transfer);
  j["seeds"] = cfg.seeds;
  j["num_workers"] = cfg.num_workers;
  return j;
}

void ApplyOverride(Json& j, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorCode::kConfigError,
                "override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  Json value = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;

  Json* node = &j;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) {
      throw Error(ErrorCode::kConfigError, "empty path segment in " + key);
    }
    if (!node->is_object()) {
      if (!node->is_null()) {
        throw Error(ErrorCode::kConfigError, key + " crosses a non-object");
      }
      *node = Json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

ExperimentConfig LoadConfig(const fs::path& path,
                            std::span<const std::string> overrides) {
  Json j;
  try {
    j = LoadJson(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.detail());
  }
  // Relative paths written in the file are taken from the file's directory;
  // paths given as overrides stay relative to the working directory.
  const fs::path base = path.parent_path();
  const auto resolve = [&base](Json& node, const char* section,
                               const char* key) {
    if (!node.is_object() || !node.contains(section)) return;
    Json& s = node[section];
    if (!s.is_object() || !s.contains(key) || !s[key].is_string()) return;
    const fs::path value = s[key].get<std::string>();
    if (!value.empty() && value.is_relative()) {
      s[key] = (base / value).lexically_normal().string();
    }
  };
  resolve(j, "dataset", "path");
  resolve(j, "clustering", "assignment_file");
  for (const auto& o : overrides) ApplyOverride(j, o);
  ExperimentConfig cfg = ConfigFromJson(j);
  return cfg;
}

void Summarize(MetricsReport& r) {
  std::vector<double> f1;
  std::vector<double> micro;
  std::vector<double> acc;
  for (const SeedRun& run : r.runs) {
    f1.push_back(run.test.macro_f1);
    micro.push_back(run.test.micro_f1);
    acc.push_back(run.test.accuracy);
  }
  r.mean_macro_f1 = Mean(f1);
  double var = 0.0;
  for (double x : f1) var += (x - r.mean_macro_f1) * (x - r.mean_macro_f1);
  r.std_macro_f1 = f1.empty() ? 0.0 : std::sqrt(var / f1.size());
  r.min_macro_f1 = f1.empty() ? 0.0 : *std::min_element(f1.begin(), f1.end());
  r.max_macro_f1 = f1.empty() ? 0.0 : *std::max_element(f1.begin(), f1.end());
  r.mean_micro_f1 = Mean(micro);
  r.mean_accuracy = Mean(acc);

  r.mean_per_class_f1.clear();
  r.confusion.clear();
  for (const SeedRun& run : r.runs) {
    const auto& pc = run.test.per_class_f1;
    if (r.mean_per_class_f1.size() < pc.size()) {
      r.mean_per_class_f1.resize(pc.size(), 0.0);
    }
    for (std::size_t c = 0; c < pc.size(); ++c) {
      r.mean_per_class_f1[c] += pc[c] / static_cast<double>(r.runs.size());
    }
    const auto& cm = run.test.confusion;
    if (r.confusion.size() < cm.size()) {
      r.confusion.resize(cm.size());
      for (auto& row : r.confusion) row.resize(cm.size(), 0);
    }
    for (std::size_t a = 0; a < cm.size(); ++a) {
      for (std::size_t b = 0; b < cm[a].size(); ++b) {
        r.confusion[a][b] += cm[a][b];
      }
    }
  }
}

Json ToJson(const MetricsReport& r) {
  Json j = Json::object();
  if (r.runs.empty() && r.name.empty() && r.method.empty()) return j;
  j["name"] = r.name;
  j["dataset"] = r.dataset;
  j["method"] = r.method;
  j["class_names"] = r.class_names;
  Json runs = Json::array();
  for (const SeedRun& run : r.runs) {
    runs.push_back({{"seed", run.seed},
                    {"macro_f1", run.test.macro_f1},
                    {"micro_f1", run.test.micro_f1},
                    {"accuracy", run.test.accuracy},
                    {"per_class_f1", run.test.per_class_f1},
                    {"confusion", run.test.confusion},
                    {"val_macro_f1", run.val_macro_f1},
                    {"seconds", run.seconds},
                    {"synthetic_nodes", run.synthetic_nodes},
                    {"num_clusters", run.num_clusters},
                    {"edge_cut", run.edge_cut}});
  }
  j["runs"] = std::move(runs);
  j["mean_macro_f1"] = r.mean_macro_f1;
  j["std_macro_f1"] = r.std_macro_f1;
  j["min_macro_f1"] = r.min_macro_f1;
  j["max_macro_f1"] = r.max_macro_f1;
  j["mean_micro_f1"] = r.mean_micro_f1;
  j["mean_accuracy"] = r.mean_accuracy;
  j["mean_per_class_f1"] = r.mean_per_class_f1;
  j["confusion"] = r.confusion;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

MetricsReport MetricsReportFromJson(const Json& j) {
  MetricsReport r;
  if (j.is_object() && j.empty()) return r;
  try {
    r.name = j.at("name").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.method = j.at("method").get<std::string>();
    r.class_names = j.at("class_names").get<std::vector<std::string>>();
    for (const auto& run : j.at("runs")) {
      SeedRun s;
      s.seed = run.at("seed").get<std::uint64_t>();
      s.test.macro_f1 = run.at("macro_f1").get<double>();
      s.test.micro_f1 = run.at("micro_f1").get<double>();
      s.test.accuracy = run.at("accuracy").get<double>();
      s.test.per_class_f1 = run.at("per_class_f1").get<std::vector<double>>();
      s.test.confusion =
          run.at("confusion").get<std::vector<std::vector<std::int64_t>>>();
      s.val_macro_f1 = run.at("val_macro_f1").get<double>();
      s.seconds = run.at("seconds").get<double>();
      s.synthetic_nodes = run.at("synthetic_nodes").get<std::int64_t>();
      s.num_clusters = run.at("num_clusters").get<std::int64_t>();
      s.edge_cut = run.at("edge_cut").get<std::int64_t>();
      r.runs.push_back(std::move(s));
    }
    r.mean_macro_f1 = j.at("mean_macro_f1").get<double>();
    r.std_macro_f1 = j.at("std_macro_f1").get<double>();
    r.min_macro_f1 = j.at("min_macro_f1").get<double>();
    r.max_macro_f1 = j.at("max_macro_f1").get<double>();
    r.mean_micro_f1 = j.at("mean_micro_f1").get<double>();
    r.mean_accuracy = j.at("mean_accuracy").get<double>();
    r.mean_per_class_f1 = j.at("mean_per_class_f1").get<std::vector<double>>();
    r.confusion =
        j.at("confusion").get<std::vector<std::vector<std::int64_t>>>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError,
                std::string("metrics report: ") + e.what());
  }
  return r;
}

std::string ToMarkdown(const MetricsReport& r) {
  std::string md = fmt::format("## {} on {}\n\n", r.method, r.dataset);
  md += "| seed | macro-F1 | micro-F1 | accuracy | seconds |\n";
  md += "|---:|---:|---:|---:|---:|\n";
  for (const SeedRun& run : r.runs) {
    md += fmt::format("| {} | {:.4f} | {:.4f} | {:.4f} | {:.1f} |\n", run.seed,
                      run.test.macro_f1, run.test.micro_f1, run.test.accuracy,
                      run.seconds);
  }
  md += fmt::format(
      "\nmacro-F1 {:.4f} +/- {:.4f} (min {:.4f}, max {:.4f}), "
      "micro-F1 {:.4f}, accuracy {:.4f}\n",
      r.mean_macro_f1, r.std_macro_f1, r.min_macro_f1, r.max_macro_f1,
      r.mean_micro_f1, r.mean_accuracy);
  if (!r.mean_per_class_f1.empty()) {
    md += "\n| class | mean F1 |\n|---|---:|\n";
    for (std::size_t c = 0; c < r.mean_per_class_f1.size(); ++c) {
      const std::string name =
          c < r.class_names.size() ? r.class_names[c] : std::to_string(c);
      md += fmt::format("| {} | {:.4f} |\n", name, r.mean_per_class_f1[c]);
    }
  }
  return md;
}

DatasetBundle LoadExperimentData(const ExperimentConfig& cfg) {
  return Stage("load", [&] {
    return cfg.dataset_path.empty() ? MakeSyntheticDataset(cfg.synthetic)
                                    : LoadDataset(cfg.dataset_path);
  });
}

SeedRun RunSeed(const DatasetBundle& data, const ExperimentConfig& cfg,
                std::uint64_t seed) {
  const auto start = Clock::now();
  const Graph& g = data.graph;
  const LabelVector& labels = data.labels;
  const Eigen::Index n = g.num_nodes();

  ImbalanceSpec imb = cfg.imbalance;
  imb.seed = seed;
  const NodeMaskSet masks =
      Stage("split", [&] { return SimulateImbalance(labels, imb); });
  const std::vector<ClassId> minority =
      MinorityClasses(imb, labels.num_classes);

  TrainConfig tc = cfg.train;
  tc.seed = seed;
  tc.minority_classes = minority;
  SmoteConfig sc = cfg.smote;
  sc.seed = seed;
  sc.minority_classes = minority;

  SeedRun run;
  run.seed = seed;
  ClusterAssignment clusters;
  if (NeedsClusters(cfg)) {
    clusters = Stage("cluster", [&] { return ClusterNodes(data, cfg, seed); });
    run.num_clusters = clusters.num_clusters;
    run.edge_cut = EdgeCut(g, clusters);
  }

  Matrix logits;
  switch (cfg.method) {
    case Method::kGraphSage:
    case Method::kReweight:
    case Method::kEnWeight:
    case Method::kOversample:
    case Method::kCbSample:
    case Method::kGraphSageClusterFeat: {
      TrainOptions options;
      if (cfg.method == Method::kReweight) {
        tc.weight_mode = WeightMode::kInverseFreq;
      } else if (cfg.method == Method::kEnWeight) {
        tc.weight_mode = WeightMode::kEffectiveNumber;
      } else if (cfg.method == Method::kOversample) {
        const LossWeighting uniform;
        options.sampler = [fixed = BuildTargets(
                               labels, masks.train, uniform,
                               OversampleMultiplicity(labels, masks.train))](
                              int, Rng&) { return fixed; };
      } else if (cfg.method == Method::kCbSample) {
        options.sampler = ClassBalancedSampler(labels, masks.train);
      }
      const Matrix x = cfg.method == Method::kGraphSageClusterFeat
                           ? AppendClusterOneHot(data.features, clusters)
                           : data.features;
      logits = Stage("train", [&] {
        return TrainAndScore(g, x, labels, masks, tc, options);
      });
      break;
    }
    case Method::kSmoteFeatures:
    case Method::kClusterSmoteOnly: {
      sc.seed_selection = cfg.method == Method::kSmoteFeatures
                              ? SeedSelection::kRandom
                              : SeedSelection::kBoundary;
      const ClusterAssignment* a =
          clusters.num_clusters > 0 ? &clusters : nullptr;
      const AugmentationResult aug = Stage("smote", [&] {
        return Augment(g, data.features, labels, masks, a, sc);
      });
      run.synthetic_nodes = static_cast<std::int64_t>(aug.synth_origin.size());
      logits = Stage("train", [&] {
        return TrainAndScore(aug.graph, aug.embeddings, aug.labels, aug.masks,
                             tc);
      }).topRows(n);
      break;
    }
    case Method::kEcgn:
    case Method::kEcgnNoSmote:
    case Method::kEcgnNoGlobal: {
      TrainConfig pre_cfg = tc;
      pre_cfg.weight_mode = cfg.pretrain_weight_mode;
      const PretrainResult pre = Stage("pretrain", [&] {
        return PretrainClusters(g, data.features, labels, masks, clusters,
                                pre_cfg, cfg.num_workers);
      });
      if (cfg.method == Method::kEcgnNoGlobal) {
        logits = pre.cluster_logits;
        break;
      }
      AugmentationResult aug;
      if (cfg.method == Method::kEcgn) {
        aug = Stage("smote", [&] {
          return Augment(g, pre.embeddings, labels, masks, &clusters, sc);
        });
      } else {
        aug.graph = g;
        aug.embeddings = pre.embeddings;
        aug.labels = labels;
        aug.masks = masks;
      }
      run.synthetic_nodes = static_cast<std::int64_t>(aug.synth_origin.size());
      const GlobalResult global = Stage("integrate", [&] {
        return GlobalIntegrate(aug.graph, aug.embeddings, aug.labels,
                               aug.masks, tc, cfg.transfer, pre.clusters);
      });
      logits = global.logits.topRows(n);
      break;
    }
  }

  const std::vector<ClassId> pred = Predict(logits);
  run.test = Stage("evaluate", [&] { return Evaluate(pred, labels, masks.test); });
  if (MaskCount(masks.val) > 0) {
    run.val_macro_f1 = MacroF1(pred, labels, masks.val);
  }
  run.seconds = SecondsSince(start);
  return run;
}

MetricsReport RunPipeline(const DatasetBundle& data,
                          const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) {
    throw Error(ErrorCode::kConfigError, "seeds must not be empty");
  }
  const auto start = Clock::now();
  MetricsReport r;
  r.name = cfg.name;
  r.dataset = data.name;
  r.method = std::string(MethodName(cfg.method));
  r.class_names = data.class_names;
  for (std::uint64_t seed : cfg.seeds) {
    r.runs.push_back(RunSeed(data, cfg, seed));
    spdlog::info("{} seed {}: macro-F1 {:.4f} ({:.1f}s)", r.method, seed,
                 r.runs.back().test.macro_f1, r.runs.back().seconds);
  }
  Summarize(r);
  r.wall_seconds = SecondsSince(start);
  return r;
}

MetricsReport RunPipeline(const ExperimentConfig& cfg) {
  return RunPipeline(LoadExperimentData(cfg), cfg);
}

std::vector<SweepRow> SweepClusters(const DatasetBundle& data,
                                    const ExperimentConfig& cfg,
                                    std::span<const ClusterId> k_list) {
  std::vector<SweepRow> rows;
  for (ClusterId k : k_list) {
    SweepRow row;
    row.k = k;
    try {
      if (k < 2) {
        throw Error(ErrorCode::kConfigError, "sweep needs k >= 2");
      }
      ExperimentConfig c = cfg;
      c.partition.k = k;
      row.report = RunPipeline(data, c);
    } catch (const std::exception& e) {
      row.error = e.what();
      spdlog::error("sweep k={}: {}", k, row.error);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string SweepCsv(std::span<const SweepRow> rows) {
  std::string csv = "k,mean_macro_f1,std_macro_f1,min_macro_f1,max_macro_f1,error\n";
  for (const SweepRow& row : rows) {
    if (row.report) {
      csv += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},\n", row.k,
                         row.report->mean_macro_f1, row.report->std_macro_f1,
                         row.report->min_macro_f1, row.report->max_macro_f1);
    } else {
      std::string err = row.error;
      std::replace(err.begin(), err.end(), '"', '\'');
      csv += fmt::format("{},,,,,\"{}\"\n", row.k, err);
    }
  }
  return csv;
}

std::string SweepMarkdown(std::span<const SweepRow> rows) {
  std::string md = "| k | mean macro-F1 | std |\n|---:|---:|---:|\n";
  for (const SweepRow& row : rows) {
    if (row.report) {
      md += fmt::format("| {} | {:.4f} | {:.4f} |\n", row.k,
                        row.report->mean_macro_f1, row.report->std_macro_f1);
    } else {
      md += fmt::format("| {} | failed | {} |\n", row.k, row.error);
    }
  }
  return md;
}

}  // namespace ecgn
