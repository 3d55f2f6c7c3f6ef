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

// ComplEx link prediction for the extrinsic evaluation.
//
// score(s, r, o) = Re(sum_d w_r[d] * e_s[d] * conj(e_o[d]))
//
// Training minimizes the logistic loss softplus(-y * score) plus an L2
// penalty on the three embeddings of each example, by plain SGD over every
// positive triple and `negatives_per_positive` corruptions of it (subject or
// object replaced by an entity drawn uniformly from the same role).

#ifndef PATMINE_KBC_H_
#define PATMINE_KBC_H_

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "patmine/corpus.h"

namespace patmine {

using ComplexVector = std::vector<std::complex<double>>;

struct Triple {
  std::string subject;
  std::string relation;
  std::string object;
};

struct KbcConfig {
  std::size_t embedding_dim = 32;
  std::size_t epochs = 200;
  double learning_rate = 0.05;
  std::size_t negatives_per_positive = 5;
  double l2_weight = 1e-4;
  double init_scale = 0.1;
  std::uint64_t seed = 0;
};

// Throws UsageError when a positivity constraint is violated.
void ValidateKbcConfig(const KbcConfig &config);

// Subjects and objects are separate roles (genes and diseases); an entity may
// appear in both.
struct KbcVocabulary {
  std::vector<std::string> subjects;
  std::vector<std::string> objects;
  std::vector<std::string> relations;

  bool operator==(const KbcVocabulary &) const = default;
};

class KbcModel {
 public:
  KbcModel() = default;
  // Seeded N(0, init_scale) initialization of every embedding component.
  KbcModel(const KbcVocabulary &vocabulary, const KbcConfig &config);

  std::size_t dim() const { return dim_; }
  const KbcVocabulary &vocabulary() const { return vocabulary_; }

  // Throws VocabularyError for unknown ids.
  double Score(const std::string &subject, const std::string &relation,
               const std::string &object) const;

  ComplexVector &entity(const std::string &id);
  const ComplexVector &entity(const std::string &id) const;
  ComplexVector &relation(const std::string &id);
  const ComplexVector &relation(const std::string &id) const;

  const std::map<std::string, ComplexVector> &entities() const {
    return entities_;
  }
  const std::map<std::string, ComplexVector> &relations() const {
    return relations_;
  }

  // Mean loss per example for every completed epoch.
  std::vector<double> &loss_trace() { return loss_trace_; }
  const std::vector<double> &loss_trace() const { return loss_trace_; }

  bool operator==(const KbcModel &) const = default;

  void Save(const std::filesystem::path &path) const;
  static KbcModel Load(const std::filesystem::path &path);

 private:
  std::size_t dim_ = 0;
  KbcVocabulary vocabulary_;
  std::map<std::string, ComplexVector> entities_;
  std::map<std::string, ComplexVector> relations_;
  std::vector<double> loss_trace_;
};

double ComplexScore(const ComplexVector &subject, const ComplexVector &relation,
                    const ComplexVector &object);

// Gradients with respect to each embedding, packed as d/dRe + i * d/dIm.
struct TripleGradient {
  ComplexVector subject;
  ComplexVector relation;
  ComplexVector object;
};

// label is +1 for a true triple and -1 for a corrupted one.
double TripleLoss(const ComplexVector &subject, const ComplexVector &relation,
                  const ComplexVector &object, int label, double l2_weight);
TripleGradient TripleLossGradient(const ComplexVector &subject,
                                  const ComplexVector &relation,
                                  const ComplexVector &object, int label,
                                  double l2_weight);

// Throws UsageError for an empty triple set and NumericError when the loss
// stops being finite.
KbcModel TrainKbc(const std::vector<Triple> &triples,
                  const KbcVocabulary &vocabulary, const KbcConfig &config);

// Vocabulary over every pair in `pairs` plus any extra entities.
KbcVocabulary VocabularyFromPairs(const PairSet &pairs,
                                  const std::string &relation);
std::vector<Triple> TriplesFromPairs(const PairSet &pairs,
                                     const std::string &relation);

struct RankingMetrics {
  std::map<std::size_t, double> p_at_k;
  std::map<std::size_t, double> r_at_k;
  double map = 0;
  // object (disease) -> average precision of its gene ranking
  std::map<std::string, double> average_precision;
};

// sum_k P(k) * (R(k) - R(k - 1)) for a ranked relevance list.
double AveragePrecision(const std::vector<bool> &relevant_at_rank,
                        std::size_t n_relevant);

// For every object with at least one test pair, ranks the candidate subjects
// by score (ties by id), skipping subjects paired with it in train_pos when
// `filtered` is set. mAP averages AveP over those objects; P(k) and R(k) are
// computed over the pooled ranking of all scored (subject, object) pairs.
// Pair a is the subject, b the object. Throws UsageError for an empty test
// set.
RankingMetrics EvaluateKbc(const KbcModel &model, const std::string &relation,
                           const PairSet &train_pos, const PairSet &test_pos,
                           const std::vector<std::size_t> &k_values,
                           bool filtered = true);

}  // namespace patmine

#endif  // PATMINE_KBC_H_
