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

// Scratch run directories driven through the staged pipeline.

#ifndef PATMINE_TESTS_RUN_FIXTURE_H_
#define PATMINE_TESTS_RUN_FIXTURE_H_

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "oracles.h"
#include "patmine/pipeline.h"

namespace patmine_test {

class ScratchDir {
 public:
  explicit ScratchDir(const std::string &name)
      : path_(std::filesystem::temp_directory_path() /
              ("patmine_" + name + "_" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir &) = delete;
  ScratchDir &operator=(const ScratchDir &) = delete;

  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// A config over `run_dir` with the default filter file and a smaller corpus.
inline patmine::RunConfig SmallRunConfig(const std::filesystem::path &run_dir,
                                         std::uint64_t seed,
                                         std::size_t sentences = 3000) {
  patmine::RunConfig c;
  c.run_dir = run_dir;
  c.filters = oracle::DataDir() / "filters" / "default.json";
  c.synthetic.n_sentences = sentences;
  c.synthetic.n_gold = 300;
  c.synthetic.n_negative_pool = 900;
  c.seed = seed;
  c.split.seed = seed;
  c.kbc.seed = seed;
  c.kbc.epochs = 40;
  c.kbc.embedding_dim = 16;
  return c;
}

inline void RunStages(const patmine::RunConfig &config,
                      const std::vector<std::string> &stages) {
  for (const std::string &s : stages) patmine::RunStage(s, config);
}

inline const std::vector<std::string> &PrepStages() {
  static const std::vector<std::string> stages = {"synth", "ingest", "extract",
                                                  "rank"};
  return stages;
}

}  // namespace patmine_test

#endif  // PATMINE_TESTS_RUN_FIXTURE_H_
