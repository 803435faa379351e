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

#include "bdci/clex.h"

#include <algorithm>
#include <array>
#include <cctype>

namespace bdci {

namespace {

bool IdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool IdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

constexpr std::array<std::string_view, 3> kThreeCharOps = {"<<=", ">>=",
                                                           "..."};
constexpr std::array<std::string_view, 19> kTwoCharOps = {
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&",
    "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^="};

}  // namespace

std::vector<CToken> LexC(std::string_view src) {
  std::vector<CToken> out;
  std::size_t i = 0;
  int line = 1;
  bool line_start = true;  // only whitespace seen since the last newline
  const std::size_t n = src.size();

  auto skip_to_eol = [&](bool honour_continuations) {
    while (i < n && src[i] != '\n') {
      if (honour_continuations && src[i] == '\\' && i + 1 < n &&
          src[i + 1] == '\n') {
        i += 2;
        ++line;
        continue;
      }
      if (src[i] == '/' && i + 1 < n && src[i + 1] == '*') {
        // A block comment may start on a directive line and run past it.
        i += 2;
        while (i < n && !(src[i] == '*' && i + 1 < n && src[i + 1] == '/')) {
          if (src[i] == '\n') ++line;
          ++i;
        }
        i = std::min(n, i + 2);
        continue;
      }
      ++i;
    }
  };

  while (i < n) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      line_start = true;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }
    if (c == '\\' && i + 1 < n && src[i + 1] == '\n') {
      i += 2;
      ++line;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      skip_to_eol(false);
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      i += 2;
      while (i < n && !(src[i] == '*' && i + 1 < n && src[i + 1] == '/')) {
        if (src[i] == '\n') ++line;
        ++i;
      }
      i = std::min(n, i + 2);
      continue;
    }
    if (c == '#' && line_start) {
      skip_to_eol(true);
      continue;
    }
    line_start = false;
    const std::size_t start = i;
    const int start_line = line;
    CToken::Kind kind = CToken::Kind::kPunct;
    if (c == '"' || c == '\'') {
      kind = c == '"' ? CToken::Kind::kString : CToken::Kind::kChar;
      ++i;
      while (i < n && src[i] != c && src[i] != '\n') {
        if (src[i] == '\\' && i + 1 < n) {
          if (src[i + 1] == '\n') ++line;
          ++i;
        }
        ++i;
      }
      if (i < n && src[i] == c) ++i;
    } else if (IdentStart(c)) {
      kind = CToken::Kind::kIdentifier;
      while (i < n && IdentChar(src[i])) ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < n &&
                std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      kind = CToken::Kind::kNumber;
      while (i < n) {
        char d = src[i];
        if ((d == '+' || d == '-') && i > start &&
            (src[i - 1] == 'e' || src[i - 1] == 'E' || src[i - 1] == 'p' ||
             src[i - 1] == 'P')) {
          ++i;
        } else if (IdentChar(d) || d == '.') {
          ++i;
        } else {
          break;
        }
      }
    } else {
      std::string_view rest = src.substr(i);
      std::size_t len = 1;
      for (std::string_view op : kThreeCharOps) {
        if (rest.starts_with(op)) len = 3;
      }
      if (len == 1) {
        for (std::string_view op : kTwoCharOps) {
          if (rest.starts_with(op)) len = 2;
        }
      }
      i += len;
    }
    out.push_back({kind, src.substr(start, i - start), start, start_line});
  }
  return out;
}

bool IsCTypeWord(std::string_view word) {
  static constexpr std::string_view kWords[] = {
      "void",     "char",   "short",    "int",      "long",   "float",
      "double",   "signed", "unsigned", "_Bool",    "struct", "union",
      "enum",     "const",  "volatile", "restrict", "static", "extern",
      "register", "inline", "auto",     "typedef",  "_Complex"};
  return std::find(std::begin(kWords), std::end(kWords), word) !=
         std::end(kWords);
}

bool IsCKeyword(std::string_view word) {
  static constexpr std::string_view kWords[] = {
      "if",     "else",    "while",   "for",      "do",     "switch",
      "case",   "default", "break",   "continue", "return", "goto",
      "sizeof", "_Alignof", "_Static_assert", "_Generic"};
  return IsCTypeWord(word) ||
         std::find(std::begin(kWords), std::end(kWords), word) !=
             std::end(kWords);
}

std::size_t MatchingClose(const std::vector<CToken>& tokens,
                          std::size_t open) {
  std::string_view o = tokens[open].text;
  std::string_view c = o == "(" ? ")" : o == "[" ? "]" : "}";
  int depth = 0;
  for (std::size_t i = open; i < tokens.size(); ++i) {
    if (tokens[i].Is(o)) {
      ++depth;
    } else if (tokens[i].Is(c)) {
      if (--depth == 0) return i;
    }
  }
  return tokens.size();
}

}  // namespace bdci
