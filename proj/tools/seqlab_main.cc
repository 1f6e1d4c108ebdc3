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

// seqlab: batch command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 bad input data, 3 internal
// failure. Diagnostics go to stderr; data goes to stdout unless -o is given.

#include <exception>
#include <iostream>

#include "cli_util.h"

int main(int argc, char **argv) {
  CLI::App app{"seqlab: span tagging, evaluation and prompt tooling"};
  app.set_version_flag("--version", "seqlab 0.1.0");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  int exit_code = seqlab::cli::kExitOk;
  seqlab::cli::AddEvalCommands(app, &exit_code);
  seqlab::cli::AddTextCommands(app, &exit_code);
  seqlab::cli::AddModelCommands(app, &exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? seqlab::cli::kExitOk : seqlab::cli::kExitUsage;
  } catch (const seqlab::Error &e) {
    std::cerr << "seqlab: " << seqlab::ErrorCodeName(e.code()) << ": "
              << e.what() << "\n";
    return seqlab::cli::kExitData;
  } catch (const std::exception &e) {
    std::cerr << "seqlab: internal error: " << e.what() << "\n";
    return seqlab::cli::kExitInternal;
  }
  return exit_code;
}
