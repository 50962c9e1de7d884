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

#ifndef ECGN_SERIALIZE_H_
#define ECGN_SERIALIZE_H_

#include <filesystem>
#include <span>

#include <nlohmann/json.hpp>

#include "ecgn/gnn.h"
#include "ecgn/partition.h"
#include "ecgn/smote.h"
#include "ecgn/train.h"

namespace ecgn {

using Json = nlohmann::ordered_json;

// File helpers; failures raise kIoError (or kParseError for bad JSON) with
// the path in the message.
void WriteText(const std::filesystem::path& path, std::string_view text);
std::string ReadText(const std::filesystem::path& path);
void SaveJson(const std::filesystem::path& path, const Json& j);
Json LoadJson(const std::filesystem::path& path);

Json ToJson(const TrainReport& r);
TrainReport TrainReportFromJson(const Json& j);

// Two-column `node_id<TAB>cluster_id` lines, one per node in id order.
void SaveAssignment(const std::filesystem::path& path,
                    const ClusterAssignment& a);
ClusterAssignment LoadAssignment(const std::filesystem::path& path);

// Tensors go to `<prefix>.bin` as raw little-endian float64 in row-major
// order, in GnnParams::Tensors() order; `<prefix>.json` lists their shapes.
void SaveParams(const std::filesystem::path& prefix, const GnnParams& p);
GnnParams LoadParams(const std::filesystem::path& prefix);

// `synth_id seed_id nn_id delta class` lines with a header row.
void SaveSynthOrigin(const std::filesystem::path& path,
                     std::span<const SynthOrigin> origin);

}  // namespace ecgn

#endif  // ECGN_SERIALIZE_H_
