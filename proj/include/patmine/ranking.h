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

// Simplification ranking and selection: frequency baseline, label-driven
// automatic selection, and annotation queues for a domain expert.

#ifndef PATMINE_RANKING_H_
#define PATMINE_RANKING_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "patmine/clustering.h"
#include "patmine/corpus.h"
#include "patmine/pair_index.h"

namespace patmine {

struct LabelledPairs {
  PairSet positives;
  PairSet negatives;
};

// Every key treated as a binary classifier over pairs. precision_s divides the
// true/false positive counts by the positive/negative pool sizes before
// taking the usual ratio, so it does not depend on class imbalance. It is 0
// when the key matches no labelled pair.
struct SimplificationMetrics {
  std::string key;
  std::size_t pair_count = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  double precision_s = 0.0;
  double recall_s = 0.0;

  bool operator==(const SimplificationMetrics &) const = default;
};

enum class VerdictValue { kYes, kNo, kMaybe };

std::string_view VerdictName(VerdictValue value);
// Accepts "Yes"/"No"/"Maybe" in any case. Throws UsageError otherwise.
VerdictValue ParseVerdict(std::string_view text);

struct Verdict {
  VerdictValue value = VerdictValue::kNo;
  std::string annotator;
  std::string timestamp;

  bool operator==(const Verdict &) const = default;
};

// corpus_pairs minus gold_positives.
PairSet ClosedWorldNegatives(const PairSet &corpus_pairs,
                             const PairSet &gold_positives);

// Normalized precision from raw counts. 0 when tp + fp == 0.
double NormalizedPrecision(std::size_t tp, std::size_t fp, std::size_t n_pos,
                           std::size_t n_neg);

// Throws UsageError when either label set is empty.
SimplificationMetrics ComputeSimplificationMetrics(const PairIndex &index,
                                                   const std::string &key,
                                                   const LabelledPairs &labels);

// Metrics for every key in the index, in key order.
std::vector<SimplificationMetrics> ComputeAllMetrics(
    const PairIndex &index, const LabelledPairs &labels);

// Keys with pair_count >= min_pair_count, lexicographic.
std::vector<std::string> SelectBaseline(const PairIndex &index,
                                        std::size_t min_pair_count);

struct SelectionThresholds {
  double precision = 0.6;
  double recall = 0.0;
  std::size_t min_words = 0;
};

// Keys meeting every threshold (inclusive), by pair_count descending then
// key.
std::vector<SimplificationMetrics> SelectAutomatic(
    const PairIndex &index, const LabelledPairs &labels,
    const SelectionThresholds &thresholds);

enum class QueueOrdering { kByCount, kByMetrics };

struct QueueOptions {
  QueueOrdering ordering = QueueOrdering::kByCount;
  const LabelledPairs *labels = nullptr;  // required for kByMetrics
  SelectionThresholds thresholds;
  std::size_t session_size = 200;
  std::size_t examples_per_item = 20;
  std::uint64_t seed = 0;
  std::size_t cluster_radius = 2;
  std::set<std::string> already_annotated;
};

struct QueueItem {
  std::string key;
  std::string display;
  std::size_t pair_count = 0;
  std::optional<SimplificationMetrics> metrics;
  std::vector<SampledSentence> examples;
  std::size_t cluster_id = 0;
};

// Candidates ranked by pair count (after threshold filtering for
// kByMetrics), keeping only the highest ranked key of each edit-distance
// cluster. Throws UsageError for kByMetrics without labels or for
// session_size < 1.
std::vector<QueueItem> BuildAnnotationQueue(const PairIndex &index,
                                            const QueueOptions &options);

}  // namespace patmine

#endif  // PATMINE_RANKING_H_
