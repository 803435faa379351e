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

#ifndef BDCI_TEXT_H_
#define BDCI_TEXT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bdci {

std::string_view Trim(std::string_view text);

// Splits on every single space; consecutive spaces yield empty tokens so
// strict grammars can reject them.
std::vector<std::string_view> SplitSpaces(std::string_view line);

// Splits on runs of whitespace, dropping empty tokens.
std::vector<std::string_view> SplitWhitespace(std::string_view text);

// Splits on `sep`, trimming each piece and dropping empty ones.
std::vector<std::string> SplitList(std::string_view text, char sep);

// Lines without their terminating '\n'. A trailing newline does not produce
// an extra empty line.
std::vector<std::string> SplitLines(std::string_view text);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// Shortest decimal that round-trips to the same double.
std::string FormatShortest(double value);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);

// FNV-1a, rendered as 16 hex digits. Used for cache keys only.
std::string HashHex(std::string_view data);

}  // namespace bdci

#endif  // BDCI_TEXT_H_
