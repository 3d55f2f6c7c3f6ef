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

// Seeded generator of parsed GENE/DISEASE corpora with planted structure.
//
// "Good" templates only ever express gold-positive pairs, except that with
// probability `noise` a good-template sentence carries a random negative
// pair instead. "Bad" templates express pairs drawn uniformly from gold and
// negative pools alike. Some sentences are wrapped in a hedge ("We
// speculate that ...") and a few carry two GENE mentions; both kinds must be
// dropped by the pipeline. Gold pairs are drawn inside gene/disease blocks
// so a link predictor has structure to learn.

#ifndef PATMINE_SYNTHETIC_H_
#define PATMINE_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "patmine/corpus.h"

namespace patmine {

struct SyntheticSpec {
  std::size_t n_sentences = 10000;
  std::size_t n_genes = 200;
  std::size_t n_diseases = 40;
  std::size_t n_blocks = 4;
  std::size_t n_gold = 500;
  std::size_t n_negative_pool = 1500;
  std::size_t n_good_templates = 8;
  std::size_t n_bad_templates = 10;
  double good_fraction = 0.4;
  double noise = 0.03;
  double hedge_rate = 0.05;
  double multi_mention_rate = 0.02;
  std::uint64_t seed = 1;
};

struct SyntheticTemplate {
  std::string key;  // the PATH simplification every instance lexicalizes to
  bool good = false;
  // Every instance is removed by the default filter configuration.
  bool filtered = false;
};

struct SyntheticSentenceInfo {
  // -1 for the two-GENE sentences, which are never eligible.
  int template_id = -1;
  bool hedged = false;
  EntityPair pair;
};

struct SyntheticCorpus {
  std::vector<Sentence> sentences;
  std::vector<SyntheticSentenceInfo> info;  // parallel to sentences
  std::vector<SyntheticTemplate> templates;
  PairSet gold_positives;
  PairSet negative_pool;
  std::vector<std::string> genes;
  std::vector<std::string> diseases;
};

// All built-in clause templates, good ones first. Throws UsageError when the
// spec asks for more templates than exist.
std::vector<SyntheticTemplate> SyntheticTemplates(std::size_t n_good,
                                                  std::size_t n_bad);

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticSpec &spec);

}  // namespace patmine

#endif  // PATMINE_SYNTHETIC_H_
