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

// Staged pipeline driven by one run configuration. Every stage reads the
// artifacts of earlier stages from the run directory and writes its own.
//
//   synth           corpus.ndjson, gold_positives.tsv, templates.json
//   convert-conllu  corpus file at `corpus`
//   ingest          eligible.ndjson, ingest_report.json
//   extract         index/, extract_report.json
//   rank            split/, ranked.tsv, selected.tsv, threshold_tuning.json
//   cluster         clusters.tsv
//   queue           queue.json
//   generate        generated_pairs.ndjson, generate_summary.json
//   eval-intrinsic  metrics_intrinsic.json
//   eval-extrinsic  metrics_extrinsic.json
//   serve           annotation service over the run directory

#ifndef PATMINE_PIPELINE_H_
#define PATMINE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "patmine/corpus.h"
#include "patmine/eval_intrinsic.h"
#include "patmine/kbc.h"
#include "patmine/pattern.h"
#include "patmine/ranking.h"
#include "patmine/synthetic.h"

namespace patmine {

enum class Workflow {
  kBaseline,          // pair count >= min_pair_count
  kNoExpertLabels,    // precision/recall thresholds on seed labels
  kExpertNoLabels,    // expert verdicts on a count-ranked queue
  kExpertWithLabels,  // expert verdicts on a threshold-filtered queue
};

std::string_view WorkflowName(Workflow workflow);
// Throws ConfigError for unknown names.
Workflow ParseWorkflow(std::string_view name);

struct RunConfig {
  std::filesystem::path run_dir = "run";
  // Empty paths default to run_dir/corpus.ndjson and
  // run_dir/gold_positives.tsv.
  std::filesystem::path corpus;
  std::filesystem::path gold_positives;
  // Empty means no filtering.
  std::filesystem::path filters;
  // Verdict file exported by the annotation service, for expert workflows.
  std::filesystem::path verdicts;
  std::filesystem::path conllu;
  std::filesystem::path mentions;

  TypeRoles roles{"GENE", "DISEASE"};
  Workflow workflow = Workflow::kNoExpertLabels;
  SelectionThresholds thresholds;
  std::size_t min_pair_count = 5;
  // Replace thresholds.precision by the value tuned on the validation split.
  bool tune_threshold = false;
  LexiconOptions lexicon;
  SplitSpec split;
  std::size_t cluster_radius = 2;
  bool expand_clusters = true;
  std::size_t session_size = 200;
  std::size_t examples_per_item = 20;

  KbcConfig kbc;
  std::string relation = "associated_with";
  std::vector<std::size_t> k_values{100, 1000};
  bool kbc_filtered = true;

  SyntheticSpec synthetic;

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string token;

  std::optional<std::uint64_t> seed;

  std::filesystem::path corpus_path() const;
  std::filesystem::path gold_path() const;
};

// Builds a config from an optional JSON file plus "dotted.key=value"
// overrides, applied in order. Values are parsed as JSON when possible and
// taken as strings otherwise. Throws ConfigError for unknown keys, bad
// values or violated invariants.
RunConfig LoadRunConfig(const std::optional<std::filesystem::path> &file,
                        const std::vector<std::string> &overrides = {});
RunConfig ParseRunConfig(std::string_view json_text,
                         const std::vector<std::string> &overrides = {});

// The effective configuration as JSON, for logging and reproducibility.
std::string DumpRunConfig(const RunConfig &config);

const std::vector<std::string> &StageNames();
bool StageNeedsSeed(std::string_view stage);

// Runs one stage and returns its one-line JSON summary. Paths in the summary
// are relative to the run directory. Throws UsageError for an unknown stage
// or a missing seed, and ConfigError for missing inputs. "serve" blocks
// until the server stops.
std::string RunStage(std::string_view stage, const RunConfig &config);

struct KeyedVerdict {
  std::string key;
  Verdict verdict;

  bool operator==(const KeyedVerdict &) const = default;
};

// {"session": ..., "workflow": ..., "verdicts": [{key, value, annotator,
// timestamp}, ...]}
std::string SerializeVerdictFile(const std::string &session,
                                 std::string_view workflow,
                                 const std::vector<KeyedVerdict> &verdicts);
std::vector<KeyedVerdict> ParseVerdictFile(std::string_view text);

// Later submissions for a key replace earlier ones.
std::map<std::string, Verdict> LatestVerdicts(
    const std::vector<KeyedVerdict> &log);
std::set<std::string> AcceptedKeys(const std::vector<KeyedVerdict> &log);

// Tab-separated artifacts with a header row.
std::string SerializeRankedList(const std::vector<SimplificationMetrics> &rows,
                                const Clustering &clustering);
std::string SerializeClusters(const Clustering &clustering);

}  // namespace patmine

#endif  // PATMINE_PIPELINE_H_
