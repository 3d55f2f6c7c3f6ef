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

#include "patmine/synthetic.h"

#include <cstdio>

#include "patmine/error.h"
#include "patmine/util.h"

namespace patmine {

namespace {

// Clause tokens as "form:lemma:head:dep" where head is a clause-local index
// or -1 for the clause root. @A is the GENE mention, @B the DISEASE one and
// @C a second GENE.
struct ClauseSpec {
  const char *key;
  const char *tokens;
  bool filtered;
};

const ClauseSpec kGoodClauses[] = {
    {"GENE promotes DISEASE",
     "@A:@A:1:nsubj promotes:promote:-1:ROOT @B:@B:1:dobj", false},
    {"role of GENE in DISEASE",
     "role:role:-1:ROOT of:of:0:prep @A:@A:1:pobj in:in:0:prep @B:@B:3:pobj",
     false},
    {"GENE target for DISEASE",
     "@A:@A:1:compound target:target:-1:ROOT for:for:1:prep @B:@B:2:pobj",
     false},
    {"GENE involved in DISEASE",
     "@A:@A:2:nsubjpass is:be:2:auxpass involved:involve:-1:ROOT in:in:2:prep "
     "@B:@B:3:pobj",
     false},
    {"DISEASE caused by mutations in GENE",
     "@B:@B:-1:ROOT caused:cause:0:acl by:by:1:agent "
     "mutations:mutation:2:pobj in:in:3:prep @A:@A:4:pobj",
     false},
    {"inhibition of GENE treats DISEASE",
     "inhibition:inhibition:3:nsubj of:of:0:prep @A:@A:1:pobj "
     "treats:treat:-1:ROOT @B:@B:3:dobj",
     false},
    {"GENE drives DISEASE progression",
     "@A:@A:1:nsubj drives:drive:-1:ROOT @B:@B:3:compound "
     "progression:progression:1:dobj",
     false},
    {"GENE mice develop DISEASE",
     "@A:@A:1:compound mice:mouse:2:nsubj develop:develop:-1:ROOT "
     "@B:@B:2:dobj",
     false},
    {"blocking GENE reverses DISEASE",
     "blocking:block:2:csubj @A:@A:0:dobj reverses:reverse:-1:ROOT "
     "@B:@B:2:dobj",
     false},
    {"GENE antagonists ameliorate DISEASE",
     "@A:@A:1:compound antagonists:antagonist:2:nsubj "
     "ameliorate:ameliorate:-1:ROOT @B:@B:2:dobj",
     false},
};

const ClauseSpec kBadClauses[] = {
    {"GENE and DISEASE", "@A:@A:-1:ROOT and:and:0:cc @B:@B:0:conj", false},
    {"GENE in DISEASE patients",
     "@A:@A:-1:ROOT in:in:0:prep @B:@B:3:compound patients:patient:1:pobj",
     false},
    {"DISEASE of GENE", "@B:@B:-1:ROOT of:of:0:prep @A:@A:1:pobj", false},
    {"GENE DISEASE cells",
     "@A:@A:2:compound @B:@B:2:compound cells:cell:-1:ROOT", false},
    {"expression of GENE in DISEASE samples",
     "expression:expression:-1:ROOT of:of:0:prep @A:@A:1:pobj in:in:0:prep "
     "@B:@B:5:compound samples:sample:3:pobj",
     false},
    {"GENE levels in DISEASE",
     "@A:@A:1:compound levels:level:-1:ROOT in:in:1:prep @B:@B:2:pobj", false},
    {"DISEASE in GENE mice",
     "@B:@B:-1:ROOT in:in:0:prep @A:@A:3:compound mice:mouse:1:pobj", false},
    {"GENE DISEASE", "@A:@A:1:compound @B:@B:-1:ROOT", false},
    {"GENE genotyped in DISEASE cohort",
     "@A:@A:-1:ROOT genotyped:genotype:0:acl in:in:1:prep "
     "@B:@B:4:compound cohort:cohort:2:pobj",
     false},
    {"GENE used in DISEASE models",
     "@A:@A:2:nsubjpass was:be:2:auxpass used:use:-1:ROOT in:in:2:prep "
     "@B:@B:5:compound models:model:3:pobj",
     true},
    {"DISEASE and GENE", "@B:@B:-1:ROOT and:and:0:cc @A:@A:0:conj", false},
    {"GENE measured in DISEASE tissue",
     "@A:@A:2:nsubjpass was:be:2:auxpass measured:measure:-1:ROOT "
     "in:in:2:prep @B:@B:5:compound tissue:tissue:3:pobj",
     true},
};

const char kMultiClause[] =
    "@A:@A:-1:ROOT and:and:0:cc @C:@C:0:conj in:in:0:prep @B:@B:3:pobj";

struct ClauseToken {
  std::string form;
  std::string lemma;
  int head;
  std::string deprel;
};

std::vector<ClauseToken> ParseClause(const char *spec) {
  std::vector<ClauseToken> out;
  for (const std::string &item : SplitWords(spec)) {
    auto parts = SplitString(item, ':');
    out.push_back({parts[0], parts[1], std::stoi(parts[2]), parts[3]});
  }
  return out;
}

struct Prefix {
  // Tokens before the clause; the clause root attaches to `attach` with
  // `clause_dep`. attach < 0 means the clause is the whole sentence.
  std::vector<ClauseToken> tokens;
  int attach;
  std::string clause_dep;
};

const Prefix &PlainPrefix() {
  static const Prefix p{{}, -1, ""};
  return p;
}

const Prefix &ReportPrefix() {
  // "Results show that ..."
  static const Prefix p{{{"Results", "result", 1, "nsubj"},
                         {"show", "show", -1, "ROOT"},
                         {"that", "that", -2, "mark"}},
                        1,
                        "ccomp"};
  return p;
}

const Prefix &HedgePrefix() {
  // "We speculate that ..."
  static const Prefix p{{{"We", "we", 1, "nsubj"},
                         {"speculate", "speculate", -1, "ROOT"},
                         {"that", "that", -2, "mark"}},
                        1,
                        "ccomp"};
  return p;
}

struct Entity {
  std::string form;
  std::string id;
};

Sentence Assemble(const std::vector<ClauseToken> &clause, const Prefix &prefix,
                  const Entity &gene, const Entity &disease,
                  const Entity *second_gene) {
  Sentence s;
  const int offset = static_cast<int>(prefix.tokens.size());
  int clause_root = -1;
  for (std::size_t i = 0; i < clause.size(); ++i) {
    if (clause[i].head < 0) clause_root = offset + static_cast<int>(i);
  }
  for (std::size_t i = 0; i < prefix.tokens.size(); ++i) {
    const ClauseToken &t = prefix.tokens[i];
    Token tok{static_cast<int>(i), t.form, t.lemma, t.head, t.deprel};
    if (t.head == -1) tok.head = kRoot;
    if (t.head == -2) tok.head = clause_root;  // complementizer
    s.tokens.push_back(tok);
  }
  for (std::size_t i = 0; i < clause.size(); ++i) {
    const ClauseToken &t = clause[i];
    Token tok{offset + static_cast<int>(i), t.form, t.lemma, t.head + offset,
              t.deprel};
    if (t.head < 0) {
      tok.head = prefix.attach < 0 ? kRoot : prefix.attach;
      tok.deprel = prefix.attach < 0 ? "ROOT" : prefix.clause_dep;
    }
    const Entity *e = nullptr;
    const char *type = nullptr;
    if (t.form == "@A") e = &gene, type = "GENE";
    if (t.form == "@B") e = &disease, type = "DISEASE";
    if (t.form == "@C") e = second_gene, type = "GENE";
    if (e != nullptr) {
      tok.form = e->form;
      tok.lemma = e->form;
      s.mentions.push_back({tok.idx, tok.idx + 1, type, e->id});
    }
    s.tokens.push_back(tok);
  }
  const int root = prefix.attach < 0 ? clause_root : prefix.attach;
  s.tokens.push_back({static_cast<int>(s.tokens.size()), ".", ".", root,
                      "punct"});
  for (const Token &t : s.tokens) {
    if (!s.text.empty() && t.form != ".") s.text += ' ';
    s.text += t.form;
  }
  return s;
}

std::string Padded(std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*zu", width, value);
  return buf;
}

}  // namespace

std::vector<SyntheticTemplate> SyntheticTemplates(std::size_t n_good,
                                                  std::size_t n_bad) {
  if (n_good > std::size(kGoodClauses) || n_bad > std::size(kBadClauses)) {
    throw UsageError("not enough built-in synthetic templates");
  }
  std::vector<SyntheticTemplate> out;
  for (std::size_t i = 0; i < n_good; ++i) {
    out.push_back({kGoodClauses[i].key, true, kGoodClauses[i].filtered});
  }
  for (std::size_t i = 0; i < n_bad; ++i) {
    out.push_back({kBadClauses[i].key, false, kBadClauses[i].filtered});
  }
  return out;
}

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticSpec &spec) {
  if (spec.n_blocks == 0 || spec.n_genes < spec.n_blocks ||
      spec.n_diseases < spec.n_blocks) {
    throw UsageError("synthetic corpus needs at least one entity per block");
  }
  if (spec.n_good_templates == 0 || spec.n_bad_templates == 0) {
    throw UsageError("synthetic corpus needs good and bad templates");
  }
  SyntheticCorpus corpus;
  corpus.templates =
      SyntheticTemplates(spec.n_good_templates, spec.n_bad_templates);
  std::vector<std::vector<ClauseToken>> clauses;
  for (std::size_t i = 0; i < spec.n_good_templates; ++i) {
    clauses.push_back(ParseClause(kGoodClauses[i].tokens));
  }
  for (std::size_t i = 0; i < spec.n_bad_templates; ++i) {
    clauses.push_back(ParseClause(kBadClauses[i].tokens));
  }
  const auto multi = ParseClause(kMultiClause);

  std::vector<Entity> genes;
  std::vector<Entity> diseases;
  for (std::size_t g = 0; g < spec.n_genes; ++g) {
    genes.push_back({"g" + std::to_string(g), "GeneID:" + Padded(g, 5)});
    corpus.genes.push_back(genes.back().id);
  }
  for (std::size_t d = 0; d < spec.n_diseases; ++d) {
    diseases.push_back({"d" + std::to_string(d), "MESH:D" + Padded(d, 5)});
    corpus.diseases.push_back(diseases.back().id);
  }

  Rng rng(spec.seed);
  auto make_pair = [&](std::size_t g, std::size_t d) {
    return EntityPair{genes[g].id, diseases[d].id, "GENE", "DISEASE"};
  };
  const std::size_t within_block_capacity =
      (spec.n_genes / spec.n_blocks) * (spec.n_diseases / spec.n_blocks) *
      spec.n_blocks;
  const std::size_t n_gold = std::min(spec.n_gold, within_block_capacity);
  while (corpus.gold_positives.size() < n_gold) {
    std::size_t g = rng.Below(spec.n_genes);
    std::size_t d = rng.Below(spec.n_diseases);
    if (g % spec.n_blocks != d % spec.n_blocks) continue;
    corpus.gold_positives.insert(make_pair(g, d));
  }
  const std::size_t n_neg =
      std::min(spec.n_negative_pool,
               spec.n_genes * spec.n_diseases - corpus.gold_positives.size());
  while (corpus.negative_pool.size() < n_neg) {
    EntityPair p = make_pair(rng.Below(spec.n_genes), rng.Below(spec.n_diseases));
    if (!corpus.gold_positives.count(p)) corpus.negative_pool.insert(p);
  }

  std::map<std::string, std::size_t> gene_of;
  std::map<std::string, std::size_t> disease_of;
  for (std::size_t g = 0; g < genes.size(); ++g) gene_of[genes[g].id] = g;
  for (std::size_t d = 0; d < diseases.size(); ++d) {
    disease_of[diseases[d].id] = d;
  }
  const std::vector<EntityPair> gold(corpus.gold_positives.begin(),
                                     corpus.gold_positives.end());
  const std::vector<EntityPair> negatives(corpus.negative_pool.begin(),
                                          corpus.negative_pool.end());
  std::vector<EntityPair> everything = gold;
  everything.insert(everything.end(), negatives.begin(), negatives.end());

  for (std::size_t i = 0; i < spec.n_sentences; ++i) {
    SyntheticSentenceInfo info;
    const bool is_multi = rng.Bernoulli(spec.multi_mention_rate);
    const std::vector<ClauseToken> *clause = &multi;
    if (is_multi) {
      info.pair = everything[rng.Below(everything.size())];
    } else if (rng.Bernoulli(spec.good_fraction)) {
      info.template_id = static_cast<int>(rng.Below(spec.n_good_templates));
      const bool noisy = !negatives.empty() && rng.Bernoulli(spec.noise);
      info.pair = noisy ? negatives[rng.Below(negatives.size())]
                        : gold[rng.Below(gold.size())];
    } else {
      info.template_id = static_cast<int>(spec.n_good_templates +
                                          rng.Below(spec.n_bad_templates));
      info.pair = everything[rng.Below(everything.size())];
    }
    if (info.template_id >= 0) clause = &clauses[info.template_id];
    info.hedged = rng.Bernoulli(spec.hedge_rate);
    const Prefix &prefix = info.hedged              ? HedgePrefix()
                           : rng.Bernoulli(0.5) ? ReportPrefix()
                                                : PlainPrefix();
    const Entity &gene = genes[gene_of[info.pair.a_id]];
    const Entity &disease = diseases[disease_of[info.pair.b_id]];
    const Entity &other = genes[(gene_of[info.pair.a_id] + 1) % genes.size()];
    Sentence s = Assemble(*clause, prefix, gene, disease,
                          is_multi ? &other : nullptr);
    s.doc_id = "doc" + Padded(i / 10, 6);
    s.sent_id = "s" + Padded(i % 10, 2);
    corpus.sentences.push_back(std::move(s));
    corpus.info.push_back(std::move(info));
  }
  return corpus;
}

}  // namespace patmine
