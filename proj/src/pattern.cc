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

#include "patmine/pattern.h"

#include <algorithm>
#include <map>

#include "patmine/error.h"
#include "patmine/util.h"

namespace patmine {

namespace {

// Tokens from idx up to the root, idx first.
std::vector<TokenIndex> Ancestry(const Sentence &s, TokenIndex idx) {
  std::vector<TokenIndex> chain;
  for (TokenIndex cur = idx; cur != kRoot; cur = s.tokens[cur].head) {
    chain.push_back(cur);
  }
  return chain;
}

const std::string &Word(const Sentence &s, TokenIndex idx,
                        const LexiconOptions &options) {
  return options.use_lemma ? s.tokens[idx].lemma : s.tokens[idx].form;
}

// Words of `nodes` in sentence order with endpoint placeholders.
std::string JoinNodes(const Sentence &s, std::vector<TokenIndex> nodes,
                      const PairContext &ctx, const LexiconOptions &options) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::string out;
  for (TokenIndex idx : nodes) {
    if (!out.empty()) out += ' ';
    if (idx == ctx.head_a) {
      out += ctx.placeholder_a;
    } else if (idx == ctx.head_b) {
      out += ctx.placeholder_b;
    } else {
      out += Word(s, idx, options);
    }
  }
  return out;
}

bool IsNegation(const Token &t) {
  if (t.deprel == "neg") return true;
  if (t.deprel != "advmod") return false;
  std::string lemma = ToLower(t.lemma);
  return lemma == "not" || lemma == "n't" || lemma == "never";
}

}  // namespace

DepPath ShortestDepPath(const Sentence &sentence, TokenIndex head_a,
                        TokenIndex head_b) {
  if (head_a == head_b) {
    throw DegeneratePathError("both endpoints are token " +
                              std::to_string(head_a));
  }
  std::vector<TokenIndex> up_a = Ancestry(sentence, head_a);
  std::vector<TokenIndex> up_b = Ancestry(sentence, head_b);
  // Strip the shared suffix down to the lowest common ancestor.
  while (up_a.size() > 1 && up_b.size() > 1 &&
         up_a[up_a.size() - 2] == up_b[up_b.size() - 2]) {
    up_a.pop_back();
    up_b.pop_back();
  }
  DepPath path;
  path.nodes = up_a;
  for (std::size_t i = 0; i + 1 < up_a.size(); ++i) {
    path.edges.push_back({up_a[i + 1], up_a[i],
                          sentence.tokens[up_a[i]].deprel, EdgeDirection::kUp});
  }
  // up_b ends with the common ancestor, already in place.
  for (std::size_t i = up_b.size() - 1; i-- > 0;) {
    path.edges.push_back({up_b[i + 1], up_b[i],
                          sentence.tokens[up_b[i]].deprel,
                          EdgeDirection::kDown});
    path.nodes.push_back(up_b[i]);
  }
  return path;
}

std::string RenderPath(const Sentence &sentence, const DepPath &path,
                       PathNotation notation) {
  const bool ascii = notation == PathNotation::kAscii;
  const char *up_open = ascii ? " <-" : " \u2190";
  const char *down_close = ascii ? "-> " : "\u2192 ";
  const char *dash = ascii ? "-" : "\u2013";
  std::string out;
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    if (i > 0) {
      const PathEdge &e = path.edges[i - 1];
      if (e.direction == EdgeDirection::kUp) {
        out += up_open + e.deprel + dash + " ";
      } else {
        out += " " + std::string(dash) + e.deprel + down_close;
      }
    }
    out += sentence.tokens[path.nodes[i]].form;
  }
  return out;
}

PairContext MakePairContext(const EligibleSentence &eligible) {
  const Sentence &s = eligible.sentence;
  const Mention &a = s.mentions[eligible.mention_a];
  const Mention &b = s.mentions[eligible.mention_b];
  return {MentionHead(s, a), MentionHead(s, b), ToUpper(a.entity_type),
          ToUpper(b.entity_type)};
}

PatternSet ExtractPatternSet(const Sentence &sentence, const PairContext &ctx) {
  PatternSet ps;
  ps.head_a = ctx.head_a;
  ps.head_b = ctx.head_b;
  ps.path = ShortestDepPath(sentence, ctx.head_a, ctx.head_b);

  std::set<TokenIndex> children;
  for (const PathEdge &e : ps.path.edges) children.insert(e.child);
  for (TokenIndex n : ps.path.nodes) {
    if (!children.count(n)) {
      ps.path_root = n;
      break;
    }
  }
  ps.sentence_root = sentence.root();
  if (ps.sentence_root != ps.path_root) {
    ps.path_between_roots =
        ShortestDepPath(sentence, ps.sentence_root, ps.path_root);
  }
  ps.sentence_root_descendants = sentence.children(ps.sentence_root);
  ps.path_root_descendants = sentence.children(ps.path_root);

  TokenIndex lo = std::min(ctx.head_a, ctx.head_b);
  TokenIndex hi = std::max(ctx.head_a, ctx.head_b);
  // Between the mention spans, not just the heads.
  for (const Mention &m : sentence.mentions) {
    if (m.start_tok <= lo && lo < m.end_tok) lo = m.end_tok - 1;
    if (m.start_tok <= hi && hi < m.end_tok) hi = m.start_tok;
  }
  for (const Token &t : sentence.tokens) {
    std::string lemma = ToLower(t.lemma);
    ps.keywords.insert(lemma);
    if (t.idx > lo && t.idx < hi) ps.keywords_between.insert(lemma);
  }
  return ps;
}

Simplification LexicalizePath(const Sentence &sentence, const DepPath &path,
                              const PairContext &ctx,
                              const LexiconOptions &options) {
  Simplification out;
  out.key = JoinNodes(sentence, path.nodes, ctx, options);
  out.n_words = CountWords(out.key);
  return out;
}

Simplification SimplificationKey(const Sentence &sentence,
                                 const PatternSet &patterns,
                                 const PairContext &ctx,
                                 const LexiconOptions &options) {
  std::vector<TokenIndex> nodes = patterns.path.nodes;
  if (options.include_sentence_root) nodes.push_back(patterns.sentence_root);
  Simplification out;
  out.key = JoinNodes(sentence, std::move(nodes), ctx, options);
  out.n_words = CountWords(out.key);
  return out;
}

std::string LexicalizeDisplay(const Sentence &sentence,
                              const PatternSet &patterns,
                              const PairContext &ctx, const DisplayParts &parts,
                              const LexiconOptions &options) {
  // token -> true when contributed by PATH.
  std::map<TokenIndex, bool> words;
  if (parts.path) {
    for (TokenIndex n : patterns.path.nodes) words[n] = true;
  }
  auto add_other = [&](TokenIndex n) { words.emplace(n, false); };
  if (parts.path_between_roots) {
    for (TokenIndex n : patterns.path_between_roots.nodes) add_other(n);
  }
  if (parts.sentence_root) add_other(patterns.sentence_root);

  std::string out;
  for (const auto &[idx, from_path] : words) {
    if (!out.empty()) out += ' ';
    if (idx == ctx.head_a) {
      out += ctx.placeholder_a;
    } else if (idx == ctx.head_b) {
      out += ctx.placeholder_b;
    } else if (from_path) {
      out += Word(sentence, idx, options);
    } else {
      out += options.marker_prefix + Word(sentence, idx, options) +
             options.marker_suffix;
    }
  }

  if (parts.annotations) {
    std::set<TokenIndex> hedges;
    std::set<TokenIndex> negations;
    for (const auto *list : {&patterns.sentence_root_descendants,
                             &patterns.path_root_descendants}) {
      for (TokenIndex d : *list) {
        const Token &t = sentence.tokens[d];
        if (t.deprel == "aux") hedges.insert(d);
        if (IsNegation(t)) negations.insert(d);
      }
    }
    auto annotate = [&](const char *label, const std::set<TokenIndex> &idxs) {
      if (idxs.empty()) return;
      out += std::string(" + ") + label + ":[";
      bool first = true;
      for (TokenIndex d : idxs) {
        if (!first) out += ", ";
        out += sentence.tokens[d].form;
        first = false;
      }
      out += "]";
    };
    annotate("hedging", hedges);
    annotate("negation", negations);
  }
  return out;
}

}  // namespace patmine
