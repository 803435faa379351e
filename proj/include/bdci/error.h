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

#ifndef BDCI_ERROR_H_
#define BDCI_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bdci {

enum class ErrorCode {
  kParse,
  kPairing,
  kValue,
  kLabelMismatch,
  kInput,
  kType,
  kBudget,
  kIo,
  kResolution,
  kNoAncestor,
  kWorkdir,
  kTool,
  kPlan,
  kInapplicable,
  kConfig,
  kStage,
};

const char* ErrorCodeName(ErrorCode code);

// All failures raised by the library carry a code so callers (and tests) can
// distinguish, say, a malformed trace line from a pairing violation.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures remember where they happened. `line` is 1-based; `column`
// is a 1-based byte position within the line, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line,
             std::size_t column = 0)
      : Error(ErrorCode::kParse, Format(message, line, column)),
        detail_(message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  // The message without the position prefix.
  const std::string& detail() const { return detail_; }

 private:
  static std::string Format(const std::string& message, std::size_t line,
                            std::size_t column);

  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace bdci

#endif  // BDCI_ERROR_H_
