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

#ifndef ECGN_ERROR_H_
#define ECGN_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecgn {

enum class ErrorCode {
  kInvalidEdge,
  kEmptyCluster,
  kTooFewNodes,
  kInvalidArgument,
  kShapeError,
  kEmptyMask,
  kMissingClusterParams,
  kClassEmpty,
  kSingletonClass,
  kCapExceeded,
  kNothingToAugment,
  kParseError,
  kInfeasibleSplit,
  kIoError,
  kConfigError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and tests) can branch on the kind rather than the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

  // Same code, message prefixed with `context` (a stage or file name).
  Error WithContext(std::string_view context) const {
    return Error(code_, std::string(context) + ": " + detail_);
  }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace ecgn

#endif  // ECGN_ERROR_H_
