// Copyright 2026 The anonkey Authors.
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

#ifndef ANONKEY_TOOLS_CLI_H_
#define ANONKEY_TOOLS_CLI_H_

#include <functional>
#include <string>

#include "CLI11.hpp"

namespace anonkey::cli {

// Each Add* registers a subcommand tree; the callback stored in `run` is
// invoked after parsing and returns the process exit code.
using Runner = std::function<int()>;

void AddCaCommands(CLI::App& app, Runner& run);
void AddServerCommands(CLI::App& app, Runner& run);
void AddClientCommands(CLI::App& app, Runner& run);
void AddBenchCommands(CLI::App& app, Runner& run);

// Blocks until SIGINT or SIGTERM. Call BlockTerminationSignals() before
// starting any thread.
void BlockTerminationSignals();
void WaitForTermination();

}  // namespace anonkey::cli

#endif  // ANONKEY_TOOLS_CLI_H_
