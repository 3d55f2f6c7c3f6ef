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

#include "patmine/eval_intrinsic.h"

#include <cmath>

#include "patmine/error.h"
#include "patmine/pairgen.h"
#include "patmine/util.h"

namespace patmine {

void ValidateSplitSpec(const SplitSpec &spec) {
  if (spec.train < 0 || spec.valid < 0 || spec.test < 0) {
    throw UsageError("split fractions must be non-negative");
  }
  if (std::abs(spec.train + spec.valid + spec.test - 1.0) > 1e-9) {
    throw UsageError("split fractions must sum to 1");
  }
}

namespace {

void Cut(const PairSet &items, const SplitSpec &spec, Rng &rng, PairSet &train,
         PairSet &valid, PairSet &test) {
  std::vector<EntityPair> order(items.begin(), items.end());
  rng.Shuffle(order);
  const double n = static_cast<double>(order.size());
  const auto n_train = static_cast<std::size_t>(std::llround(spec.train * n));
  const auto n_train_valid = std::min(
      order.size(),
      static_cast<std::size_t>(std::llround((spec.train + spec.valid) * n)));
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i < n_train) {
      train.insert(order[i]);
    } else if (i < n_train_valid) {
      valid.insert(order[i]);
    } else {
      test.insert(order[i]);
    }
  }
}

}  // namespace

GoldSplit SplitGold(const PairSet &positives, const PairSet &negatives,
                    const SplitSpec &spec) {
  ValidateSplitSpec(spec);
  if (positives.empty()) throw UsageError("no gold positives to split");
  GoldSplit split;
  Rng rng(spec.seed);
  Cut(positives, spec, rng, split.train_pos, split.valid_pos, split.test_pos);
  Cut(negatives, spec, rng, split.train_neg, split.valid_neg, split.test_neg);
  return split;
}

PairMetrics ComputePairMetrics(const PairSet &predicted,
                               const PairSet &test_pos,
                               const PairSet &test_neg) {
  if (test_pos.empty() || test_neg.empty()) {
    throw UsageError("pair metrics need non-empty positive and negative tests");
  }
  PairMetrics m;
  for (const EntityPair &p : test_pos) {
    if (test_neg.count(p)) throw UsageError("test sets overlap at " + p.id());
    if (predicted.count(p)) {
      ++m.tp;
    } else {
      ++m.fn;
    }
  }
  for (const EntityPair &p : test_neg) {
    if (predicted.count(p)) {
      ++m.fp;
    } else {
      ++m.tn;
    }
  }
  m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  m.specificity = static_cast<double>(m.tn) / static_cast<double>(m.tn + m.fp);
  m.precision_undefined = m.tp + m.fp == 0;
  m.precision = NormalizedPrecision(m.tp, m.fp, test_pos.size(), test_neg.size());
  m.f_score_undefined = m.precision + m.recall == 0;
  if (!m.f_score_undefined) {
    m.f_score = 2 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

double ManualSimplificationPrecision(const std::vector<Verdict> &verdicts) {
  if (verdicts.empty()) throw UsageError("no verdicts");
  std::size_t yes = 0;
  for (const Verdict &v : verdicts) yes += v.value == VerdictValue::kYes;
  return static_cast<double>(yes) / static_cast<double>(verdicts.size());
}

ThresholdChoice TunePrecisionThreshold(const PairIndex &index,
                                       const GoldSplit &split,
                                       const std::vector<double> &grid,
                                       SelectionThresholds base) {
  if (grid.empty()) throw UsageError("empty threshold grid");
  if (split.valid_pos.empty() || split.valid_neg.empty()) {
    throw UsageError("threshold tuning needs a non-empty validation split");
  }
  LabelledPairs train = split.train();
  // Metrics do not depend on the threshold; compute them once.
  std::vector<SimplificationMetrics> all = ComputeAllMetrics(index, train);
  ThresholdChoice best;
  bool have_best = false;
  for (double thr : grid) {
    PairSet predicted;
    for (const SimplificationMetrics &m : all) {
      if (m.precision_s >= thr && m.recall_s >= base.recall &&
          CountWords(m.key) >= base.min_words) {
        PairSet pairs = index.PairsForSimplification(m.key);
        predicted.insert(pairs.begin(), pairs.end());
      }
    }
    PairMetrics valid =
        ComputePairMetrics(predicted, split.valid_pos, split.valid_neg);
    if (!have_best || valid.f_score > best.valid_metrics.f_score ||
        (valid.f_score == best.valid_metrics.f_score &&
         thr > best.precision_threshold)) {
      best = {thr, valid};
      have_best = true;
    }
  }
  return best;
}

}  // namespace patmine
