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

#include "patmine/kbc.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "json.hpp"
#include "patmine/error.h"
#include "patmine/util.h"

namespace patmine {

using json = nlohmann::json;

void ValidateKbcConfig(const KbcConfig &config) {
  if (config.embedding_dim == 0) throw UsageError("embedding_dim must be > 0");
  if (!(config.learning_rate > 0)) throw UsageError("learning_rate must be > 0");
  if (config.negatives_per_positive == 0) {
    throw UsageError("negatives_per_positive must be > 0");
  }
  if (!(config.l2_weight >= 0)) throw UsageError("l2_weight must be >= 0");
  if (!(config.init_scale > 0)) throw UsageError("init_scale must be > 0");
}

KbcModel::KbcModel(const KbcVocabulary &vocabulary, const KbcConfig &config)
    : dim_(config.embedding_dim), vocabulary_(vocabulary) {
  ValidateKbcConfig(config);
  std::set<std::string> ids(vocabulary.subjects.begin(),
                            vocabulary.subjects.end());
  ids.insert(vocabulary.objects.begin(), vocabulary.objects.end());
  Rng rng(config.seed);
  auto draw = [&]() {
    ComplexVector v(dim_);
    for (auto &c : v) {
      double re = rng.Normal() * config.init_scale;
      double im = rng.Normal() * config.init_scale;
      c = {re, im};
    }
    return v;
  };
  // Ordered iteration keeps initialization independent of input order.
  for (const std::string &id : ids) entities_[id] = draw();
  std::set<std::string> rels(vocabulary.relations.begin(),
                             vocabulary.relations.end());
  for (const std::string &id : rels) relations_[id] = draw();
}

ComplexVector &KbcModel::entity(const std::string &id) {
  auto it = entities_.find(id);
  if (it == entities_.end()) throw VocabularyError("unknown entity " + id);
  return it->second;
}

const ComplexVector &KbcModel::entity(const std::string &id) const {
  auto it = entities_.find(id);
  if (it == entities_.end()) throw VocabularyError("unknown entity " + id);
  return it->second;
}

ComplexVector &KbcModel::relation(const std::string &id) {
  auto it = relations_.find(id);
  if (it == relations_.end()) throw VocabularyError("unknown relation " + id);
  return it->second;
}

const ComplexVector &KbcModel::relation(const std::string &id) const {
  auto it = relations_.find(id);
  if (it == relations_.end()) throw VocabularyError("unknown relation " + id);
  return it->second;
}

double ComplexScore(const ComplexVector &subject, const ComplexVector &relation,
                    const ComplexVector &object) {
  double total = 0;
  for (std::size_t d = 0; d < subject.size(); ++d) {
    total += (relation[d] * subject[d] * std::conj(object[d])).real();
  }
  return total;
}

double KbcModel::Score(const std::string &subject, const std::string &rel,
                       const std::string &object) const {
  return ComplexScore(entity(subject), relation(rel), entity(object));
}

namespace {

double Softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

double Sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

double SquaredNorm(const ComplexVector &v) {
  double total = 0;
  for (const auto &c : v) total += std::norm(c);
  return total;
}

}  // namespace

double TripleLoss(const ComplexVector &subject, const ComplexVector &relation,
                  const ComplexVector &object, int label, double l2_weight) {
  double score = ComplexScore(subject, relation, object);
  return Softplus(-label * score) +
         l2_weight * (SquaredNorm(subject) + SquaredNorm(relation) +
                      SquaredNorm(object));
}

TripleGradient TripleLossGradient(const ComplexVector &subject,
                                  const ComplexVector &relation,
                                  const ComplexVector &object, int label,
                                  double l2_weight) {
  const double score = ComplexScore(subject, relation, object);
  const double dscore = -label * Sigmoid(-label * score);
  const std::size_t dim = subject.size();
  TripleGradient g{ComplexVector(dim), ComplexVector(dim), ComplexVector(dim)};
  for (std::size_t d = 0; d < dim; ++d) {
    const auto &s = subject[d];
    const auto &w = relation[d];
    const auto &o = object[d];
    g.subject[d] = dscore * std::conj(w) * o + 2.0 * l2_weight * s;
    g.relation[d] = dscore * std::conj(s) * o + 2.0 * l2_weight * w;
    g.object[d] = dscore * w * s + 2.0 * l2_weight * o;
  }
  return g;
}

KbcVocabulary VocabularyFromPairs(const PairSet &pairs,
                                  const std::string &relation) {
  std::set<std::string> subjects;
  std::set<std::string> objects;
  for (const EntityPair &p : pairs) {
    subjects.insert(p.a_id);
    objects.insert(p.b_id);
  }
  return {{subjects.begin(), subjects.end()},
          {objects.begin(), objects.end()},
          {relation}};
}

std::vector<Triple> TriplesFromPairs(const PairSet &pairs,
                                     const std::string &relation) {
  std::vector<Triple> out;
  out.reserve(pairs.size());
  for (const EntityPair &p : pairs) out.push_back({p.a_id, relation, p.b_id});
  return out;
}

KbcModel TrainKbc(const std::vector<Triple> &triples,
                  const KbcVocabulary &vocabulary, const KbcConfig &config) {
  if (triples.empty()) throw UsageError("no training triples");
  if (vocabulary.subjects.empty() || vocabulary.objects.empty()) {
    throw UsageError("empty vocabulary");
  }
  KbcModel model(vocabulary, config);
  for (const Triple &t : triples) {
    model.entity(t.subject);
    model.relation(t.relation);
    model.entity(t.object);
  }
  // The init generator is separate from the sampling one so epochs=0 matches
  // a freshly initialized model exactly.
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  const double lr = config.learning_rate;
  std::vector<std::size_t> order(triples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  auto step = [&](const std::string &s_id, const std::string &r_id,
                  const std::string &o_id, int label, std::size_t epoch) {
    ComplexVector &s = model.entity(s_id);
    ComplexVector &w = model.relation(r_id);
    ComplexVector &o = model.entity(o_id);
    double loss = TripleLoss(s, w, o, label, config.l2_weight);
    if (!std::isfinite(loss)) {
      throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                         " on (" + s_id + ", " + r_id + ", " + o_id +
                         "); lower learning_rate");
    }
    TripleGradient g = TripleLossGradient(s, w, o, label, config.l2_weight);
    for (std::size_t d = 0; d < s.size(); ++d) {
      s[d] -= lr * g.subject[d];
      w[d] -= lr * g.relation[d];
      o[d] -= lr * g.object[d];
    }
    return loss;
  };

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(order);
    double total = 0;
    std::size_t examples = 0;
    for (std::size_t i : order) {
      const Triple &t = triples[i];
      total += step(t.subject, t.relation, t.object, +1, epoch);
      ++examples;
      for (std::size_t k = 0; k < config.negatives_per_positive; ++k) {
        if (rng.Bernoulli(0.5)) {
          const auto &pool = vocabulary.subjects;
          const std::string &s = pool[rng.Below(pool.size())];
          total += step(s, t.relation, t.object, -1, epoch);
        } else {
          const auto &pool = vocabulary.objects;
          const std::string &o = pool[rng.Below(pool.size())];
          total += step(t.subject, t.relation, o, -1, epoch);
        }
        ++examples;
      }
    }
    model.loss_trace().push_back(total / static_cast<double>(examples));
  }
  return model;
}

double AveragePrecision(const std::vector<bool> &relevant_at_rank,
                        std::size_t n_relevant) {
  if (n_relevant == 0) return 0;
  double total = 0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < relevant_at_rank.size(); ++k) {
    if (!relevant_at_rank[k]) continue;
    ++hits;
    // R(k) - R(k-1) is 1 / n_relevant exactly at relevant ranks.
    total += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return total / static_cast<double>(n_relevant);
}

RankingMetrics EvaluateKbc(const KbcModel &model, const std::string &relation,
                           const PairSet &train_pos, const PairSet &test_pos,
                           const std::vector<std::size_t> &k_values,
                           bool filtered) {
  if (test_pos.empty()) throw UsageError("no test pairs");
  std::map<std::string, std::set<std::string>> test_by_object;
  std::map<std::string, std::set<std::string>> train_by_object;
  for (const EntityPair &p : test_pos) test_by_object[p.b_id].insert(p.a_id);
  for (const EntityPair &p : train_pos) train_by_object[p.b_id].insert(p.a_id);

  struct Scored {
    double score;
    const std::string *object;
    const std::string *subject;
    bool relevant;
  };
  std::vector<Scored> pooled;
  RankingMetrics out;
  const auto &subjects = model.vocabulary().subjects;
  const ComplexVector &w = model.relation(relation);

  for (const auto &[object, relevant] : test_by_object) {
    const ComplexVector &o = model.entity(object);
    const auto &train = train_by_object[object];
    std::vector<Scored> ranked;
    for (const std::string &s : subjects) {
      if (filtered && train.count(s)) continue;
      ranked.push_back({ComplexScore(model.entity(s), w, o), &object, &s,
                        relevant.count(s) > 0});
    }
    auto order = [](const Scored &a, const Scored &b) {
      if (a.score != b.score) return a.score > b.score;
      return std::tie(*a.object, *a.subject) < std::tie(*b.object, *b.subject);
    };
    std::sort(ranked.begin(), ranked.end(), order);
    std::vector<bool> flags;
    flags.reserve(ranked.size());
    for (const Scored &r : ranked) flags.push_back(r.relevant);
    out.average_precision[object] = AveragePrecision(flags, relevant.size());
    pooled.insert(pooled.end(), ranked.begin(), ranked.end());
  }

  double total = 0;
  for (const auto &[object, ap] : out.average_precision) total += ap;
  out.map = total / static_cast<double>(out.average_precision.size());

  std::sort(pooled.begin(), pooled.end(), [](const Scored &a, const Scored &b) {
    if (a.score != b.score) return a.score > b.score;
    return std::tie(*a.object, *a.subject) < std::tie(*b.object, *b.subject);
  });
  for (std::size_t k : k_values) {
    if (k == 0) throw UsageError("k must be positive");
    std::size_t limit = std::min(k, pooled.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < limit; ++i) hits += pooled[i].relevant ? 1 : 0;
    out.p_at_k[k] = limit == 0 ? 0.0
                               : static_cast<double>(hits) /
                                     static_cast<double>(limit);
    out.r_at_k[k] =
        static_cast<double>(hits) / static_cast<double>(test_pos.size());
  }
  return out;
}

namespace {

json EncodeVector(const ComplexVector &v) {
  json arr = json::array();
  for (const auto &c : v) arr.push_back({c.real(), c.imag()});
  return arr;
}

ComplexVector DecodeVector(const json &arr, std::size_t dim) {
  if (!arr.is_array() || arr.size() != dim) {
    throw ConfigError("embedding has wrong dimension");
  }
  ComplexVector v;
  for (const json &c : arr) {
    v.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
  }
  return v;
}

}  // namespace

void KbcModel::Save(const std::filesystem::path &path) const {
  json ents = json::object();
  for (const auto &[id, v] : entities_) ents[id] = EncodeVector(v);
  json rels = json::object();
  for (const auto &[id, v] : relations_) rels[id] = EncodeVector(v);
  json obj = {{"format", "patmine-complex"},
              {"version", 1},
              {"dim", dim_},
              {"subjects", vocabulary_.subjects},
              {"objects", vocabulary_.objects},
              {"relations", vocabulary_.relations},
              {"entity_embeddings", std::move(ents)},
              {"relation_embeddings", std::move(rels)},
              {"loss_trace", loss_trace_}};
  WriteFile(path, obj.dump() + "\n");
}

KbcModel KbcModel::Load(const std::filesystem::path &path) {
  try {
    json obj = json::parse(ReadFile(path));
    if (obj.at("format") != "patmine-complex" || obj.at("version") != 1) {
      throw ConfigError("unsupported checkpoint format");
    }
    KbcModel m;
    m.dim_ = obj.at("dim").get<std::size_t>();
    m.vocabulary_.subjects = obj.at("subjects").get<std::vector<std::string>>();
    m.vocabulary_.objects = obj.at("objects").get<std::vector<std::string>>();
    m.vocabulary_.relations =
        obj.at("relations").get<std::vector<std::string>>();
    for (const auto &[id, v] : obj.at("entity_embeddings").items()) {
      m.entities_[id] = DecodeVector(v, m.dim_);
    }
    for (const auto &[id, v] : obj.at("relation_embeddings").items()) {
      m.relations_[id] = DecodeVector(v, m.dim_);
    }
    m.loss_trace_ = obj.at("loss_trace").get<std::vector<double>>();
    return m;
  } catch (const json::exception &e) {
    throw ConfigError(std::string("bad checkpoint: ") + e.what());
  }
}

}  // namespace patmine
