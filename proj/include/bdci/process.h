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

// Running external commands with captured output.

#ifndef BDCI_PROCESS_H_
#define BDCI_PROCESS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bdci {

struct ProcessResult {
  // The exit status, or 128 + signal number when the child was killed.
  int exit_code = 0;
  std::string out;
  std::string err;

  bool ok() const { return exit_code == 0; }
};

struct ProcessOptions {
  std::filesystem::path cwd;  // empty: inherit
  std::vector<std::pair<std::string, std::string>> env;  // added/overridden
};

// Runs argv[0] (looked up on PATH) and waits for it. Standard input is
// /dev/null. Throws Error{kTool} when the process cannot be started; a
// program that is missing yields exit code 127 like a shell would.
ProcessResult RunProcess(const std::vector<std::string>& argv,
                         const ProcessOptions& options = {});

// `/bin/sh -c command`.
ProcessResult RunShell(const std::string& command,
                       const ProcessOptions& options = {});

// Single-quotes `text` for /bin/sh.
std::string ShellQuote(std::string_view text);

}  // namespace bdci

#endif  // BDCI_PROCESS_H_
