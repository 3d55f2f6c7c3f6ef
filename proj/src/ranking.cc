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

#include "patmine/ranking.h"

#include <algorithm>

#include "patmine/error.h"
#include "patmine/util.h"

namespace patmine {

std::string_view VerdictName(VerdictValue value) {
  switch (value) {
    case VerdictValue::kYes: return "Yes";
    case VerdictValue::kNo: return "No";
    case VerdictValue::kMaybe: return "Maybe";
  }
  return "No";
}

VerdictValue ParseVerdict(std::string_view text) {
  std::string v = ToLower(text);
  if (v == "yes") return VerdictValue::kYes;
  if (v == "no") return VerdictValue::kNo;
  if (v == "maybe") return VerdictValue::kMaybe;
  throw UsageError("invalid verdict '" + std::string(text) +
                   "', expected Yes, No or Maybe");
}

PairSet ClosedWorldNegatives(const PairSet &corpus_pairs,
                             const PairSet &gold_positives) {
  PairSet out;
  std::set_difference(corpus_pairs.begin(), corpus_pairs.end(),
                      gold_positives.begin(), gold_positives.end(),
                      std::inserter(out, out.end()));
  return out;
}

double NormalizedPrecision(std::size_t tp, std::size_t fp, std::size_t n_pos,
                           std::size_t n_neg) {
  if (tp == 0 && fp == 0) return 0.0;
  const double pos_rate = static_cast<double>(tp) / static_cast<double>(n_pos);
  const double neg_rate = static_cast<double>(fp) / static_cast<double>(n_neg);
  return pos_rate / (pos_rate + neg_rate);
}

SimplificationMetrics ComputeSimplificationMetrics(const PairIndex &index,
                                                   const std::string &key,
                                                   const LabelledPairs &labels) {
  if (labels.positives.empty() || labels.negatives.empty()) {
    throw UsageError("metrics need non-empty positive and negative sets");
  }
  SimplificationMetrics m;
  m.key = key;
  for (const EntityPair &p : index.PairsForSimplification(key)) {
    ++m.pair_count;
    if (labels.positives.count(p)) ++m.tp;
    if (labels.negatives.count(p)) ++m.fp;
  }
  m.precision_s = NormalizedPrecision(m.tp, m.fp, labels.positives.size(),
                                      labels.negatives.size());
  m.recall_s = static_cast<double>(m.tp) /
               static_cast<double>(labels.positives.size());
  return m;
}

std::vector<SimplificationMetrics> ComputeAllMetrics(
    const PairIndex &index, const LabelledPairs &labels) {
  std::vector<SimplificationMetrics> out;
  for (const std::string &key : index.Keys()) {
    out.push_back(ComputeSimplificationMetrics(index, key, labels));
  }
  return out;
}

std::vector<std::string> SelectBaseline(const PairIndex &index,
                                        std::size_t min_pair_count) {
  if (min_pair_count < 1) throw UsageError("min_pair_count must be >= 1");
  std::vector<std::string> out;
  for (const auto &[key, count] : index.PairCounts()) {
    if (count >= min_pair_count) out.push_back(key);
  }
  return out;
}

namespace {

bool ByCountThenKey(const std::string &ka, std::size_t ca,
                    const std::string &kb, std::size_t cb) {
  if (ca != cb) return ca > cb;
  return ka < kb;
}

}  // namespace

std::vector<SimplificationMetrics> SelectAutomatic(
    const PairIndex &index, const LabelledPairs &labels,
    const SelectionThresholds &thresholds) {
  std::vector<SimplificationMetrics> out;
  for (SimplificationMetrics &m : ComputeAllMetrics(index, labels)) {
    if (m.precision_s >= thresholds.precision &&
        m.recall_s >= thresholds.recall &&
        CountWords(m.key) >= thresholds.min_words) {
      out.push_back(std::move(m));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SimplificationMetrics &a, const SimplificationMetrics &b) {
              return ByCountThenKey(a.key, a.pair_count, b.key, b.pair_count);
            });
  return out;
}

std::vector<QueueItem> BuildAnnotationQueue(const PairIndex &index,
                                            const QueueOptions &options) {
  if (options.session_size < 1) throw UsageError("session_size must be >= 1");
  if (options.examples_per_item < 1) {
    throw UsageError("examples_per_item must be >= 1");
  }

  struct Candidate {
    std::string key;
    std::size_t pair_count;
    std::optional<SimplificationMetrics> metrics;
  };
  std::vector<Candidate> candidates;
  if (options.ordering == QueueOrdering::kByMetrics) {
    if (options.labels == nullptr) {
      throw UsageError("metric ordering needs labelled pairs");
    }
    for (SimplificationMetrics &m :
         SelectAutomatic(index, *options.labels, options.thresholds)) {
      if (options.already_annotated.count(m.key)) continue;
      std::size_t count = m.pair_count;
      std::string key = m.key;
      candidates.push_back({std::move(key), count, std::move(m)});
    }
  } else {
    for (const auto &[key, count] : index.PairCounts()) {
      if (options.already_annotated.count(key)) continue;
      candidates.push_back({key, count, std::nullopt});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate &a, const Candidate &b) {
                return ByCountThenKey(a.key, a.pair_count, b.key, b.pair_count);
              });
  }

  std::vector<std::string> keys;
  std::map<std::string, std::size_t> counts;
  for (const Candidate &c : candidates) {
    keys.push_back(c.key);
    counts[c.key] = c.pair_count;
  }
  Clustering clustering =
      ClusterSimplifications(keys, options.cluster_radius, counts);

  // Candidates are in rank order, so the first member seen of each cluster
  // is its representative.
  std::set<std::size_t> used_clusters;
  std::vector<QueueItem> queue;
  for (Candidate &c : candidates) {
    if (queue.size() >= options.session_size) break;
    const Cluster &cluster = clustering.ClusterOf(c.key);
    if (!used_clusters.insert(cluster.id).second) continue;
    QueueItem item;
    item.key = c.key;
    item.pair_count = c.pair_count;
    item.metrics = std::move(c.metrics);
    item.cluster_id = cluster.id;
    item.examples = index.SampleSentences(c.key, options.examples_per_item,
                                          options.seed);
    std::vector<std::size_t> records = index.RecordsForSimplification(c.key);
    if (!records.empty()) item.display = index.records()[records.front()].display;
    queue.push_back(std::move(item));
  }
  return queue;
}

}  // namespace patmine
