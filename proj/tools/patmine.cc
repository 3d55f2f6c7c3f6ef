// Copyright 2026 The patmine Authors.
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

// patmine <stage> [--config FILE] [--set key=value]... [--seed N]
//
// Exit status: 0 ok, 1 internal error, 2 usage, 3 configuration, 4 data.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "patmine/error.h"
#include "patmine/pipeline.h"

namespace {

int ExitCode(const patmine::Error &e) {
  const std::string &code = e.code();
  if (code == "usage_error") return 2;
  if (code == "config_error") return 3;
  return 4;
}

std::string StageList() {
  std::string out;
  for (const std::string &s : patmine::StageNames()) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Dependency-path simplification mining pipeline"};
  std::string stage;
  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string run_dir;
  bool print_config = false;

  app.add_option("stage", stage, "Stage to run: " + StageList())->required();
  app.add_option("-c,--config", config_file, "JSON run configuration");
  app.add_option("-s,--set", overrides,
                 "Override a config value, e.g. thresholds.precision=0.6");
  app.add_option("--seed", seed, "RNG seed (required for seeded stages)");
  app.add_option("--run-dir", run_dir, "Run directory");
  app.add_flag("--print-config", print_config,
               "Print the effective configuration to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  if (!run_dir.empty()) overrides.push_back("run_dir=" + run_dir);
  if (seed) overrides.push_back("seed=" + std::to_string(*seed));

  try {
    std::optional<std::filesystem::path> file;
    if (!config_file.empty()) file = config_file;
    patmine::RunConfig config = patmine::LoadRunConfig(file, overrides);
    if (print_config) std::cerr << patmine::DumpRunConfig(config) << "\n";
    std::cout << patmine::RunStage(stage, config) << std::endl;
    return 0;
  } catch (const patmine::Error &e) {
    std::cerr << "patmine: " << e.code() << ": " << e.what() << "\n";
    return ExitCode(e);
  } catch (const std::exception &e) {
    std::cerr << "patmine: internal: " << e.what() << "\n";
    return 1;
  }
}
