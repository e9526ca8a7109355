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

#include <cstdlib>
#include <iostream>

#include "anonkey/client/client.h"
#include "anonkey/core/errors.h"
#include "cli.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

int main(int argc, char** argv) {
  using anonkey::client::ExitCode;
  spdlog::set_default_logger(spdlog::stderr_color_mt("anonkey"));

  CLI::App app{"Anonymous key distribution: servers, client and benches"};
  app.require_subcommand(1);
  std::string level = "info";
  app.add_option("--log-level", level, "trace|debug|info|warn|error|off")
      ->capture_default_str();

  anonkey::cli::Runner run;
  anonkey::cli::AddCaCommands(app, run);
  anonkey::cli::AddServerCommands(app, run);
  anonkey::cli::AddClientCommands(app, run);
  anonkey::cli::AddBenchCommands(app, run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }
  spdlog::set_level(spdlog::level::from_str(level));

  try {
    return run ? run() : static_cast<int>(ExitCode::kUsage);
  } catch (const anonkey::client::ClientError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const anonkey::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kUsage);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kLocal);
  }
}
