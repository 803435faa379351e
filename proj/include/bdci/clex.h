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

// A tokenizer for C-like sources, good enough for brace matching, call
// detection and single-token rewrites. Comments and preprocessor lines are
// dropped; string and character literals come through as single tokens.

#ifndef BDCI_CLEX_H_
#define BDCI_CLEX_H_

#include <cstddef>
#include <string_view>
#include <vector>

namespace bdci {

struct CToken {
  enum class Kind { kIdentifier, kNumber, kString, kChar, kPunct };

  Kind kind;
  std::string_view text;  // view into the lexed source
  std::size_t offset;     // byte offset of the first character
  int line;               // 1-based

  bool Is(std::string_view punct) const {
    return kind == Kind::kPunct && text == punct;
  }
};

std::vector<CToken> LexC(std::string_view source);

bool IsCKeyword(std::string_view word);

// Keywords that can start or form a type (int, unsigned, struct, const, ...).
bool IsCTypeWord(std::string_view word);

// Index of the token closing the bracket opened at `open`, or tokens.size()
// when it is never closed.
std::size_t MatchingClose(const std::vector<CToken>& tokens, std::size_t open);

}  // namespace bdci

#endif  // BDCI_CLEX_H_
