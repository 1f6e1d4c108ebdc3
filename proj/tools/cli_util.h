// Copyright 2026 The seqlab Authors.
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

// Plumbing shared by the seqlab subcommands.

#ifndef SEQLAB_TOOLS_CLI_UTIL_H_
#define SEQLAB_TOOLS_CLI_UTIL_H_

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "seqlab/errors.h"

namespace seqlab::cli {

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInternal = 3,
};

// Data goes to the file at `path`, or to stdout when the path is empty.
class Output {
 public:
  explicit Output(const std::string &path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw IoError("cannot write " + path);
  }

  std::ostream &stream() { return file_ ? *file_ : std::cout; }

  void Close() {
    stream().flush();
    if (!stream()) throw IoError("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// Fails with IoError unless every path names a readable regular file.
inline void CheckInputs(const std::vector<std::string> &paths) {
  for (const std::string &path : paths) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
      throw IoError("no such input file: " + path);
    }
    std::ifstream probe(path);
    if (!probe) throw IoError("cannot read " + path);
  }
}

// Re-raises library errors with the offending file named in the message.
template <typename Fn>
auto InFile(const std::string &path, Fn &&fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error &e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

// Accepts both repeated flags and comma-separated lists.
inline std::vector<std::string> SplitOptions(
    const std::vector<std::string> &raw) {
  std::vector<std::string> out;
  for (const std::string &item : raw) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const std::size_t comma = item.find(',', start);
      const std::size_t end = comma == std::string::npos ? item.size() : comma;
      std::string piece = item.substr(start, end - start);
      const auto first = piece.find_first_not_of(' ');
      const auto last = piece.find_last_not_of(' ');
      if (first != std::string::npos) {
        out.push_back(piece.substr(first, last - first + 1));
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

// Subcommand registration, one function per source file.
void AddEvalCommands(CLI::App &app, int *exit_code);
void AddTextCommands(CLI::App &app, int *exit_code);
void AddModelCommands(CLI::App &app, int *exit_code);

}  // namespace seqlab::cli

#endif  // SEQLAB_TOOLS_CLI_UTIL_H_
