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

// Pair-level evaluation against held-out gold pairs, and the manual
// simplification precision of expert verdicts.

#ifndef PATMINE_EVAL_INTRINSIC_H_
#define PATMINE_EVAL_INTRINSIC_H_

#include <cstdint>
#include <vector>

#include "patmine/corpus.h"
#include "patmine/pair_index.h"
#include "patmine/ranking.h"

namespace patmine {

struct SplitSpec {
  double train = 0.4;
  double valid = 0.1;
  double test = 0.5;
  std::uint64_t seed = 0;
};

// Throws UsageError unless every fraction is >= 0 and they sum to 1 within
// 1e-9.
void ValidateSplitSpec(const SplitSpec &spec);

struct GoldSplit {
  PairSet train_pos, valid_pos, test_pos;
  PairSet train_neg, valid_neg, test_neg;

  LabelledPairs train() const { return {train_pos, train_neg}; }
};

// Seeded shuffle of each set, then cut at the rounded fraction boundaries.
// Throws UsageError for empty positives or an invalid spec.
GoldSplit SplitGold(const PairSet &positives, const PairSet &negatives,
                    const SplitSpec &spec);

// Metrics whose denominator is zero are reported as 0 with the matching
// flag set.
struct PairMetrics {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double recall = 0, specificity = 0, precision = 0, f_score = 0;
  bool recall_undefined = false;
  bool specificity_undefined = false;
  bool precision_undefined = false;
  bool f_score_undefined = false;
};

// Predicted pairs outside test_pos and test_neg are ignored. Throws
// UsageError when either test set is empty or they overlap.
PairMetrics ComputePairMetrics(const PairSet &predicted,
                               const PairSet &test_pos,
                               const PairSet &test_neg);

// Fraction of Yes among all verdicts. Throws UsageError for an empty list.
double ManualSimplificationPrecision(const std::vector<Verdict> &verdicts);

struct ThresholdChoice {
  double precision_threshold = 0;
  PairMetrics valid_metrics;
};

// Picks the precision threshold from `grid` whose selection (computed on the
// training labels) scores the highest F on the validation split. Ties go to
// the higher threshold.
ThresholdChoice TunePrecisionThreshold(const PairIndex &index,
                                       const GoldSplit &split,
                                       const std::vector<double> &grid,
                                       SelectionThresholds base);

}  // namespace patmine

#endif  // PATMINE_EVAL_INTRINSIC_H_
