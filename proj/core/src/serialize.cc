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

#include "ecgn/serialize.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "ecgn/error.h"

namespace ecgn {
namespace {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little,
              "parameter files are written in native little-endian order");

fs::path WithSuffix(const fs::path& prefix, const char* suffix) {
  return fs::path(prefix.string() + suffix);
}

std::string_view ActivationName(Activation a) {
  return a == Activation::kRelu ? "relu" : "identity";
}

}  // namespace

void WriteText(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void SaveJson(const fs::path& path, const Json& j) {
  WriteText(path, j.dump(2) + "\n");
}

Json LoadJson(const fs::path& path) {
  const std::string text = ReadText(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

Json ToJson(const TrainReport& r) {
  Json j;
  Json epochs = Json::array();
  for (std::size_t e = 0; e < r.train_loss.size(); ++e) {
    epochs.push_back(static_cast<std::int64_t>(e));
  }
  j["epoch"] = std::move(epochs);
  j["loss"] = r.train_loss;
  j["val_f1"] = r.val_f1;
  j["best_epoch"] = r.best_epoch;
  j["best_val_f1"] = r.best_val_f1;
  j["stop_reason"] = r.stop_reason;
  j["selected_on_train"] = r.selected_on_train;
  return j;
}

TrainReport TrainReportFromJson(const Json& j) {
  TrainReport r;
  try {
    r.train_loss = j.at("loss").get<std::vector<double>>();
    r.val_f1 = j.at("val_f1").get<std::vector<double>>();
    r.best_epoch = j.at("best_epoch").get<int>();
    r.best_val_f1 = j.at("best_val_f1").get<double>();
    r.stop_reason = j.at("stop_reason").get<std::string>();
    r.selected_on_train = j.value("selected_on_train", false);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError,
                std::string("train report: ") + e.what());
  }
  return r;
}

void SaveAssignment(const fs::path& path, const ClusterAssignment& a) {
  std::string text;
  for (std::size_t v = 0; v < a.size(); ++v) {
    text += fmt::format("{}\t{}\n", v, a[v]);
  }
  WriteText(path, text);
}

ClusterAssignment LoadAssignment(const fs::path& path) {
  std::istringstream in(ReadText(path));
  std::string line;
  std::size_t line_no = 0;
  ClusterAssignment a;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream fields(line);
    long long node = -1;
    long long cluster = -1;
    std::string extra;
    if (!(fields >> node >> cluster) || (fields >> extra) ||
        node != static_cast<long long>(a.size()) || cluster < 0) {
      throw Error(ErrorCode::kParseError,
                  fmt::format("{}:{}: expected `{}<TAB>cluster_id`",
                              path.string(), line_no, a.size()));
    }
    a.cluster_of.push_back(static_cast<ClusterId>(cluster));
    a.num_clusters = std::max<ClusterId>(a.num_clusters,
                                         static_cast<ClusterId>(cluster + 1));
  }
  ValidateAssignment(a, static_cast<NodeId>(a.size()));
  return a;
}

void SaveParams(const fs::path& prefix, const GnnParams& p) {
  ValidateParams(p);
  Json manifest;
  manifest["dtype"] = "float64";
  manifest["byte_order"] = "little";
  manifest["activation"] = ActivationName(p.activation);
  manifest["aggregator"] = "mean";
  Json tensors = Json::array();
  std::string blob;
  std::int64_t offset = 0;
  for (const Matrix* t : p.Tensors()) {
    const auto bytes = static_cast<std::size_t>(t->size()) * sizeof(double);
    tensors.push_back({{"rows", t->rows()},
                       {"cols", t->cols()},
                       {"offset", offset}});
    blob.append(reinterpret_cast<const char*>(t->data()), bytes);
    offset += static_cast<std::int64_t>(bytes);
  }
  manifest["num_layers"] = p.num_layers();
  manifest["tensors"] = std::move(tensors);
  WriteText(WithSuffix(prefix, ".bin"), blob);
  SaveJson(WithSuffix(prefix, ".json"), manifest);
}

GnnParams LoadParams(const fs::path& prefix) {
  const Json manifest = LoadJson(WithSuffix(prefix, ".json"));
  const std::string blob = ReadText(WithSuffix(prefix, ".bin"));
  GnnParams p;
  try {
    const auto activation = manifest.at("activation").get<std::string>();
    if (activation != "relu" && activation != "identity") {
      throw Error(ErrorCode::kParseError, "unknown activation " + activation);
    }
    p.activation =
        activation == "relu" ? Activation::kRelu : Activation::kIdentity;
    const int layers = manifest.at("num_layers").get<int>();
    const auto& tensors = manifest.at("tensors");
    if (layers < 0 || tensors.size() != static_cast<std::size_t>(layers) + 2) {
      throw Error(ErrorCode::kParseError, "tensor count does not match layers");
    }
    p.layer_weights.resize(static_cast<std::size_t>(layers));
    auto targets = p.Tensors();
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const auto rows = tensors[i].at("rows").get<Eigen::Index>();
      const auto cols = tensors[i].at("cols").get<Eigen::Index>();
      const auto offset = tensors[i].at("offset").get<std::size_t>();
      const std::size_t bytes =
          static_cast<std::size_t>(rows * cols) * sizeof(double);
      if (rows < 0 || cols < 0 || offset + bytes > blob.size()) {
        throw Error(ErrorCode::kParseError, "tensor exceeds the data file");
      }
      targets[i]->resize(rows, cols);
      std::memcpy(targets[i]->data(), blob.data() + offset, bytes);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError,
                prefix.string() + ".json: " + e.what());
  }
  ValidateParams(p);
  return p;
}

void SaveSynthOrigin(const fs::path& path,
                     std::span<const SynthOrigin> origin) {
  std::string text = "synth_id\tseed_id\tnn_id\tdelta\tclass\n";
  for (const SynthOrigin& o : origin) {
    text += fmt::format("{}\t{}\t{}\t{:.17g}\t{}\n", o.synth_id, o.seed,
                        o.neighbor, o.delta, o.label);
  }
  WriteText(path, text);
}

}  // namespace ecgn
