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

#include <random>

#include "doctest.h"
#include "oracles.h"
#include "patmine/error.h"
#include "patmine/eval_intrinsic.h"
#include "patmine/pairgen.h"

using namespace patmine;

namespace {

EntityPair Pair(const std::string &a, const std::string &b = "x") {
  return {a, b, "GENE", "DISEASE"};
}

PairSet Range(const std::string &prefix, int n) {
  PairSet out;
  for (int i = 0; i < n; ++i) out.insert(Pair(prefix + std::to_string(i)));
  return out;
}

void Add(PairIndex &index, const std::string &key, const EntityPair &pair,
         const std::string &sent) {
  index.Insert({"doc", sent, pair, key, key, key});
}

std::vector<Verdict> Verdicts(int yes, int no, int maybe) {
  std::vector<Verdict> out;
  for (int i = 0; i < yes; ++i) out.push_back({VerdictValue::kYes, "e", ""});
  for (int i = 0; i < no; ++i) out.push_back({VerdictValue::kNo, "e", ""});
  for (int i = 0; i < maybe; ++i) out.push_back({VerdictValue::kMaybe, "e", ""});
  return out;
}

}  // namespace

TEST_CASE("generated pairs carry provenance and novelty") {
  PairIndex index;
  Add(index, "k", Pair("p1"), "1");
  Add(index, "k", Pair("p2"), "2");
  Add(index, "k", Pair("p2"), "3");
  auto out = GeneratePairs(index, {"k"}, {Pair("p1")});
  REQUIRE(out.size() == 2);
  CHECK(out[0].pair == Pair("p1"));
  CHECK_FALSE(out[0].novel);
  CHECK(out[1].novel);
  CHECK(out[1].supporting_sentences.size() == 2);
  CHECK(out[1].supporting_keys == std::set<std::string>{"k"});
  CHECK(CountNovel(out) == 1);

  CHECK(GeneratePairs(index, {}, {}).empty());
  CHECK_THROWS_AS(GeneratePairs(index, {"nope"}, {}), UsageError);

  CHECK(ParseGeneratedPairs(SerializeGeneratedPairs(out)) == out);
}

TEST_CASE("generated pairs equal the union over the record log") {
  std::mt19937 gen(8);
  PairIndex index;
  for (int i = 0; i < 400; ++i) {
    Add(index, "k" + std::to_string(gen() % 9),
        Pair("g" + std::to_string(gen() % 40)), std::to_string(i));
  }
  std::set<std::string> accepted = {"k1", "k4", "k7"};
  PairSet expected;
  for (const auto &r : index.records()) {
    if (accepted.count(r.simplification_key)) expected.insert(r.pair);
  }
  auto out = GeneratePairs(index, accepted, {});
  CHECK(PairsOf(out) == expected);
  for (const auto &g : out) {
    CHECK_FALSE(g.supporting_keys.empty());
    for (const auto &k : g.supporting_keys) {
      CHECK(index.PairsForSimplification(k).count(g.pair));
    }
  }
  CHECK(SerializeGeneratedPairs(GeneratePairs(index, accepted, {})) ==
        SerializeGeneratedPairs(out));
}

TEST_CASE("cluster expansion yields a superset") {
  PairIndex index;
  Add(index, "GENE effects on DISEASE", Pair("a"), "1");
  Add(index, "GENE effect on DISEASE", Pair("b"), "2");
  Add(index, "GENE binds DISEASE", Pair("c"), "3");
  Clustering clusters = ClusterSimplifications(index.Keys(), 2);
  auto plain = PairsOf(GeneratePairs(index, {"GENE effect on DISEASE"}, {}));
  auto expanded = PairsOf(
      GeneratePairs(index, {"GENE effect on DISEASE"}, {}, &clusters));
  CHECK(plain.size() == 1);
  CHECK(expanded == PairSet{Pair("a"), Pair("b")});
}

TEST_CASE("gold split fractions") {
  GoldSplit split = SplitGold(Range("p", 100), Range("n", 200), {0.4, 0.1, 0.5, 3});
  CHECK(split.train_pos.size() == 40);
  CHECK(split.valid_pos.size() == 10);
  CHECK(split.test_pos.size() == 50);
  CHECK(split.train_neg.size() == 80);
  CHECK(split.test_neg.size() == 100);

  PairSet all = split.train_pos;
  all.insert(split.valid_pos.begin(), split.valid_pos.end());
  all.insert(split.test_pos.begin(), split.test_pos.end());
  CHECK(all == Range("p", 100));

  GoldSplit again = SplitGold(Range("p", 100), Range("n", 200), {0.4, 0.1, 0.5, 3});
  CHECK(again.test_pos == split.test_pos);
  CHECK(again.valid_neg == split.valid_neg);

  GoldSplit train_only = SplitGold(Range("p", 9), {}, {1, 0, 0, 1});
  CHECK(train_only.train_pos.size() == 9);
  CHECK_THROWS_AS(SplitGold({}, Range("n", 3), {}), UsageError);
  CHECK_THROWS_AS(ValidateSplitSpec({0.5, 0.5, 0.5, 0}), UsageError);
  CHECK_THROWS_AS(ValidateSplitSpec({1.2, -0.2, 0, 0}), UsageError);
}

TEST_CASE("pair-level metrics worked example") {
  PairMetrics m = ComputePairMetrics({Pair("p1"), Pair("p2"), Pair("p3")},
                                     {Pair("p1"), Pair("p4")}, {Pair("p2")});
  CHECK(m.tp == 1);
  CHECK(m.fp == 1);
  CHECK(m.fn == 1);
  CHECK(m.tn == 0);
  CHECK(m.recall == 0.5);
  CHECK(m.specificity == 0.0);
  CHECK(m.precision == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(m.f_score == doctest::Approx(0.4).epsilon(1e-15));

  PairSet pos = {Pair("a"), Pair("b")};
  PairSet neg = {Pair("c")};
  PairMetrics perfect = ComputePairMetrics(pos, pos, neg);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.specificity == 1.0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.f_score == 1.0);

  PairMetrics none = ComputePairMetrics({}, pos, neg);
  CHECK(none.recall == 0.0);
  CHECK(none.specificity == 1.0);
  CHECK(none.precision == 0.0);
  CHECK(none.precision_undefined);
  CHECK(none.f_score == 0.0);

  CHECK_THROWS_AS(ComputePairMetrics({}, {}, neg), UsageError);
  CHECK_THROWS_AS(ComputePairMetrics({}, pos, pos), UsageError);
}

TEST_CASE("pair-level metrics agree with counting and keep invariants") {
  std::mt19937 gen(12);
  for (int trial = 0; trial < 200; ++trial) {
    PairSet pos = Range("p", 1 + static_cast<int>(gen() % 30));
    PairSet neg = Range("n", 1 + static_cast<int>(gen() % 60));
    PairSet predicted;
    for (int i = 0; i < 40; ++i) {
      std::string prefix = gen() % 3 == 0 ? "p" : (gen() % 2 ? "n" : "z");
      predicted.insert(Pair(prefix + std::to_string(gen() % 40)));
    }
    PairMetrics m = ComputePairMetrics(predicted, pos, neg);
    oracle::CountMetrics o = oracle::PairMetrics(predicted, pos, neg);
    CHECK(std::abs(m.recall - o.recall) <= 1e-12);
    CHECK(std::abs(m.specificity - o.specificity) <= 1e-12);
    CHECK(std::abs(m.precision - o.precision) <= 1e-12);
    CHECK(std::abs(m.f_score - o.f_score) <= 1e-12);
    CHECK(m.tp + m.fn == pos.size());
    CHECK(m.tn + m.fp == neg.size());
    CHECK((m.f_score == 0) == (m.recall == 0 || m.precision == 0));
  }
}

TEST_CASE("normalized precision survives duplicated negatives") {
  PairSet pos = Range("p", 10);
  PairSet neg = Range("n", 20);
  PairSet predicted = {Pair("p0"), Pair("p1"), Pair("p2"), Pair("n0")};
  double base = ComputePairMetrics(predicted, pos, neg).precision;
  for (int k = 2; k <= 5; ++k) {
    PairSet neg_k = Range("n", 20 * k);
    PairSet pred_k = {Pair("p0"), Pair("p1"), Pair("p2")};
    for (int i = 0; i < k; ++i) pred_k.insert(Pair("n" + std::to_string(i)));
    CHECK(ComputePairMetrics(pred_k, pos, neg_k).precision ==
          doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("manual simplification precision") {
  CHECK(ManualSimplificationPrecision(Verdicts(63, 100, 37)) == 0.315);
  CHECK(ManualSimplificationPrecision(Verdicts(4, 0, 0)) == 1.0);
  CHECK(ManualSimplificationPrecision(Verdicts(2, 1, 1)) == 0.5);
  CHECK_THROWS_AS(ManualSimplificationPrecision({}), UsageError);
}

TEST_CASE("threshold tuning prefers the best validation F") {
  PairIndex index;
  PairSet pos = Range("p", 20);
  PairSet neg = Range("n", 20);
  // "good" covers only positives, "mixed" covers both.
  int s = 0;
  for (const auto &p : pos) Add(index, "GENE good DISEASE", p, std::to_string(s++));
  int i = 0;
  for (const auto &p : neg) {
    if (i++ < 10) Add(index, "GENE mixed DISEASE", p, std::to_string(s++));
  }
  int j = 0;
  for (const auto &p : pos) {
    if (j++ < 10) Add(index, "GENE mixed DISEASE", p, std::to_string(s++));
  }
  GoldSplit split = SplitGold(pos, neg, {0.4, 0.3, 0.3, 1});
  ThresholdChoice choice =
      TunePrecisionThreshold(index, split, {0.2, 0.4, 0.6, 0.8}, {});
  CHECK(choice.precision_threshold == 0.8);
  CHECK(choice.valid_metrics.precision == 1.0);
}
