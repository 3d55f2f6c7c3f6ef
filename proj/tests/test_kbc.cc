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

#include <algorithm>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "patmine/error.h"
#include "patmine/kbc.h"

using namespace patmine;

namespace {

ComplexVector RandomVector(std::mt19937 &gen, std::size_t dim) {
  std::normal_distribution<double> normal(0, 1);
  ComplexVector v(dim);
  for (auto &c : v) c = {normal(gen), normal(gen)};
  return v;
}

EntityPair Pair(const std::string &a, const std::string &b) {
  return {a, b, "GENE", "DISEASE"};
}

double RelativeError(double analytic, double numeric) {
  double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

}  // namespace

TEST_CASE("score examples") {
  CHECK(ComplexScore(ComplexVector(4), ComplexVector(4), ComplexVector(4)) ==
        0.0);
  CHECK(ComplexScore({{1, 0}}, {{1, 0}}, {{1, 0}}) == 1.0);
  // Asymmetry: swapping subject and object flips the imaginary relation part.
  CHECK(ComplexScore({{1, 0}}, {{0, 1}}, {{0, 1}}) == 1.0);
  CHECK(ComplexScore({{0, 1}}, {{0, 1}}, {{1, 0}}) == -1.0);

  std::mt19937 gen(1);
  for (int i = 0; i < 100; ++i) {
    auto s = RandomVector(gen, 2), w = RandomVector(gen, 2),
         o = RandomVector(gen, 2);
    CHECK(std::abs(ComplexScore(s, w, o) - oracle::ComplexScore(s, w, o)) <=
          1e-12);
  }
}

TEST_CASE("score is linear in the relation embedding") {
  std::mt19937 gen(2);
  for (int i = 0; i < 50; ++i) {
    auto s = RandomVector(gen, 6), o = RandomVector(gen, 6);
    auto w1 = RandomVector(gen, 6), w2 = RandomVector(gen, 6);
    double a = 0.7, b = -1.3;
    ComplexVector mix(6);
    for (std::size_t d = 0; d < 6; ++d) mix[d] = a * w1[d] + b * w2[d];
    CHECK(ComplexScore(s, mix, o) ==
          doctest::Approx(a * ComplexScore(s, w1, o) + b * ComplexScore(s, w2, o))
              .epsilon(1e-12));
  }
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937 gen(3);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t dim = 1 + gen() % 8;
    auto s = RandomVector(gen, dim), w = RandomVector(gen, dim),
         o = RandomVector(gen, dim);
    int label = trial % 2 ? 1 : -1;
    double l2 = 0.01;
    TripleGradient g = TripleLossGradient(s, w, o, label, l2);
    for (int which = 0; which < 3; ++which) {
      ComplexVector *v = which == 0 ? &s : which == 1 ? &w : &o;
      const ComplexVector &grad =
          which == 0 ? g.subject : which == 1 ? g.relation : g.object;
      for (std::size_t d = 0; d < dim; ++d) {
        for (int part = 0; part < 2; ++part) {
          std::complex<double> orig = (*v)[d];
          std::complex<double> step = part == 0 ? std::complex<double>(h, 0)
                                                : std::complex<double>(0, h);
          (*v)[d] = orig + step;
          double plus = TripleLoss(s, w, o, label, l2);
          (*v)[d] = orig - step;
          double minus = TripleLoss(s, w, o, label, l2);
          (*v)[d] = orig;
          double numeric = (plus - minus) / (2 * h);
          double analytic = part == 0 ? grad[d].real() : grad[d].imag();
          CHECK(RelativeError(analytic, numeric) <= 1e-4);
        }
      }
    }
  }
}

TEST_CASE("training is seeded and zero epochs keep the initialization") {
  PairSet pairs = {Pair("g1", "d1"), Pair("g2", "d1"), Pair("g2", "d2")};
  KbcVocabulary vocab = VocabularyFromPairs(pairs, "assoc");
  auto triples = TriplesFromPairs(pairs, "assoc");
  KbcConfig config;
  config.embedding_dim = 4;
  config.epochs = 0;
  config.seed = 9;
  CHECK(TrainKbc(triples, vocab, config) == KbcModel(vocab, config));

  config.epochs = 20;
  KbcModel a = TrainKbc(triples, vocab, config);
  KbcModel b = TrainKbc(triples, vocab, config);
  CHECK(a == b);
  CHECK(a.loss_trace().size() == 20);
  CHECK_FALSE(a == KbcModel(vocab, config));

  CHECK_THROWS_AS(a.Score("g1", "assoc", "nope"), VocabularyError);
  CHECK_THROWS_AS(TrainKbc({}, vocab, config), UsageError);
  KbcConfig bad = config;
  bad.embedding_dim = 0;
  CHECK_THROWS_AS(ValidateKbcConfig(bad), UsageError);
}

TEST_CASE("divergent training is reported") {
  PairSet pairs = {Pair("g1", "d1"), Pair("g2", "d2")};
  KbcConfig config;
  config.embedding_dim = 4;
  config.epochs = 200;
  config.learning_rate = 1e6;
  config.init_scale = 10;
  CHECK_THROWS_AS(TrainKbc(TriplesFromPairs(pairs, "r"),
                           VocabularyFromPairs(pairs, "r"), config),
                  NumericError);
}

TEST_CASE("block structure is learned") {
  // Two gene blocks and two disease blocks, links only within a block.
  PairSet train, held_out, cross;
  for (int g = 0; g < 16; ++g) {
    for (int d = 0; d < 8; ++d) {
      EntityPair p = Pair("g" + std::to_string(g), "d" + std::to_string(d));
      if (g % 2 != d % 2) {
        cross.insert(p);
      } else if ((g + d) % 5 == 0) {
        held_out.insert(p);
      } else {
        train.insert(p);
      }
    }
  }
  PairSet all = train;
  all.insert(held_out.begin(), held_out.end());
  all.insert(cross.begin(), cross.end());
  KbcConfig config;
  config.embedding_dim = 8;
  config.epochs = 100;
  config.seed = 4;
  KbcModel model = TrainKbc(TriplesFromPairs(train, "r"),
                            VocabularyFromPairs(all, "r"), config);
  auto mean = [&](const PairSet &set) {
    double total = 0;
    for (const auto &p : set) total += model.Score(p.a_id, "r", p.b_id);
    return total / static_cast<double>(set.size());
  };
  CHECK(mean(held_out) > mean(cross));
}

TEST_CASE("average precision examples") {
  CHECK(AveragePrecision({true, false}, 1) == 1.0);
  CHECK(AveragePrecision({false, true}, 1) == 0.5);
  CHECK(AveragePrecision({false, false}, 1) == 0.0);

  std::mt19937 gen(5);
  for (int i = 0; i < 200; ++i) {
    std::vector<bool> flags(1 + gen() % 40);
    std::size_t n = 0;
    for (std::size_t k = 0; k < flags.size(); ++k) {
      flags[k] = gen() % 3 == 0;
      n += flags[k];
    }
    if (n == 0) continue;
    CHECK(std::abs(AveragePrecision(flags, n) -
                   oracle::AveragePrecision(flags, n)) <= 1e-10);
  }
}

TEST_CASE("evaluation ranks and filters") {
  KbcVocabulary vocab{{"g1", "g2"}, {"d1"}, {"r"}};
  KbcConfig config;
  config.embedding_dim = 1;
  KbcModel model(vocab, config);
  model.relation("r") = {{1, 0}};
  model.entity("d1") = {{1, 0}};
  model.entity("g1") = {{2, 0}};
  model.entity("g2") = {{1, 0}};
  RankingMetrics top = EvaluateKbc(model, "r", {}, {Pair("g1", "d1")}, {1, 2});
  CHECK(top.average_precision.at("d1") == 1.0);
  CHECK(top.map == 1.0);
  CHECK(top.p_at_k.at(1) == 1.0);
  RankingMetrics second =
      EvaluateKbc(model, "r", {}, {Pair("g2", "d1")}, {1, 2});
  CHECK(second.map == 0.5);
  CHECK(second.r_at_k.at(1) == 0.0);
  CHECK(second.r_at_k.at(2) == 1.0);
  // Filtering the training pair moves g2 to the top.
  RankingMetrics filtered =
      EvaluateKbc(model, "r", {Pair("g1", "d1")}, {Pair("g2", "d1")}, {1});
  CHECK(filtered.map == 1.0);
  RankingMetrics raw = EvaluateKbc(model, "r", {Pair("g1", "d1")},
                                   {Pair("g2", "d1")}, {1}, false);
  CHECK(raw.map == 0.5);
  CHECK_THROWS_AS(EvaluateKbc(model, "r", {}, {}, {1}), UsageError);
}

TEST_CASE("mean average precision matches a brute-force ranking") {
  std::mt19937 gen(6);
  PairSet all, train, test;
  for (int g = 0; g < 25; ++g) {
    for (int d = 0; d < 6; ++d) {
      EntityPair p = Pair("g" + std::to_string(g), "d" + std::to_string(d));
      all.insert(p);
      int roll = static_cast<int>(gen() % 10);
      if (roll < 2) train.insert(p);
      else if (roll < 4) test.insert(p);
    }
  }
  KbcConfig config;
  config.embedding_dim = 4;
  config.seed = 11;
  KbcModel model(VocabularyFromPairs(all, "r"), config);
  RankingMetrics m = EvaluateKbc(model, "r", train, test, {10, 50});

  std::set<std::string> genes, diseases;
  for (const auto &p : all) {
    genes.insert(p.a_id);
    diseases.insert(p.b_id);
  }
  double total = 0;
  std::size_t n_diseases = 0;
  for (const auto &d : diseases) {
    std::vector<std::pair<double, std::string>> ranked;
    std::size_t n_rel = 0;
    for (const auto &g : genes) {
      if (train.count(Pair(g, d))) continue;
      const auto &s = model.entity(g);
      const auto &o = model.entity(d);
      ranked.push_back({-oracle::ComplexScore(s, model.relation("r"), o), g});
      n_rel += test.count(Pair(g, d));
    }
    if (n_rel == 0) continue;
    std::sort(ranked.begin(), ranked.end());
    std::vector<bool> flags;
    for (const auto &[neg_score, g] : ranked) flags.push_back(test.count(Pair(g, d)));
    double ap = oracle::AveragePrecision(flags, n_rel);
    CHECK(std::abs(m.average_precision.at(d) - ap) <= 1e-10);
    total += ap;
    ++n_diseases;
  }
  CHECK(std::abs(m.map - total / static_cast<double>(n_diseases)) <= 1e-10);
  CHECK(m.r_at_k.at(10) <= m.r_at_k.at(50));
  for (const auto &[k, v] : m.p_at_k) {
    CHECK(v >= 0);
    CHECK(v <= 1);
  }
}

TEST_CASE("checkpoint round-trip") {
  PairSet pairs = {Pair("g1", "d1"), Pair("g2", "d2")};
  KbcConfig config;
  config.embedding_dim = 3;
  config.epochs = 5;
  KbcModel model = TrainKbc(TriplesFromPairs(pairs, "r"),
                            VocabularyFromPairs(pairs, "r"), config);
  auto path = std::filesystem::temp_directory_path() / "patmine_kbc.json";
  model.Save(path);
  CHECK(KbcModel::Load(path) == model);
  std::filesystem::remove(path);
}
