// Copyright 2026 The BDCI Authors
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

#include "bdci/error.h"

#include <string>

namespace bdci {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kPairing:
      return "pairing error";
    case ErrorCode::kValue:
      return "value error";
    case ErrorCode::kLabelMismatch:
      return "label mismatch";
    case ErrorCode::kInput:
      return "input error";
    case ErrorCode::kType:
      return "type error";
    case ErrorCode::kBudget:
      return "budget error";
    case ErrorCode::kIo:
      return "I/O error";
    case ErrorCode::kResolution:
      return "resolution error";
    case ErrorCode::kNoAncestor:
      return "no common ancestor";
    case ErrorCode::kWorkdir:
      return "workdir error";
    case ErrorCode::kTool:
      return "tool error";
    case ErrorCode::kPlan:
      return "plan error";
    case ErrorCode::kInapplicable:
      return "inapplicable mutation";
    case ErrorCode::kConfig:
      return "config error";
    case ErrorCode::kStage:
      return "stage error";
  }
  return "error";
}

std::string ParseError::Format(const std::string& message, std::size_t line,
                               std::size_t column) {
  std::string out = "line " + std::to_string(line);
  if (column > 0) {
    out += ", column " + std::to_string(column);
  }
  return out + ": " + message;
}

}  // namespace bdci
