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

// Dependency-path patterns between the two mentions of an entity pair, and
// their lexicalisation into "simplifications": short text-like keys such as
// "knockdown of GENE affect DISEASE progression".

#ifndef PATMINE_PATTERN_H_
#define PATMINE_PATTERN_H_

#include <set>
#include <string>
#include <vector>

#include "patmine/corpus.h"

namespace patmine {

enum class EdgeDirection {
  kUp,    // walking from child to parent, rendered "<-dep-"
  kDown,  // walking from parent to child, rendered "-dep->"
};

struct PathEdge {
  TokenIndex parent = 0;
  TokenIndex child = 0;
  std::string deprel;
  EdgeDirection direction = EdgeDirection::kUp;

  bool operator==(const PathEdge &) const = default;
};

// Tree path from one endpoint to the other. edges[i] joins nodes[i] and
// nodes[i + 1].
struct DepPath {
  std::vector<TokenIndex> nodes;
  std::vector<PathEdge> edges;

  bool empty() const { return nodes.empty(); }
  bool operator==(const DepPath &) const = default;
};

struct PatternSet {
  TokenIndex head_a = 0;
  TokenIndex head_b = 0;
  DepPath path;
  TokenIndex path_root = 0;
  TokenIndex sentence_root = 0;
  // sentence_root -> path_root; empty when the two roots coincide.
  DepPath path_between_roots;
  std::vector<TokenIndex> sentence_root_descendants;
  std::vector<TokenIndex> path_root_descendants;
  // Lowercased lemmas of the whole sentence, and of the tokens strictly
  // between the two mentions.
  std::set<std::string> keywords;
  std::set<std::string> keywords_between;
};

struct Simplification {
  std::string key;
  std::size_t n_words = 0;
};

// Which endpoint tokens get which placeholder.
struct PairContext {
  TokenIndex head_a = 0;
  TokenIndex head_b = 0;
  std::string placeholder_a;
  std::string placeholder_b;
};

struct LexiconOptions {
  bool use_lemma = false;
  // Adds the sentence root word to the key (a more specific simplification).
  bool include_sentence_root = false;
  std::string marker_prefix = "~";
  std::string marker_suffix = "~";
};

struct DisplayParts {
  bool path = true;
  bool path_between_roots = true;
  bool sentence_root = false;
  bool annotations = true;  // "+ hedging:[...]" and "+ negation:[...]"
};

// Throws DegeneratePathError when head_a == head_b.
DepPath ShortestDepPath(const Sentence &sentence, TokenIndex head_a,
                        TokenIndex head_b);

enum class PathNotation {
  kAscii,    // BRAF <-pobj- of <-prep- knockdown -dobj-> ...
  kUnicode,  // BRAF ←pobj– of ←prep– knockdown –dobj→ ...
};

// Path over surface forms.
std::string RenderPath(const Sentence &sentence, const DepPath &path,
                       PathNotation notation = PathNotation::kAscii);

PairContext MakePairContext(const EligibleSentence &eligible);

PatternSet ExtractPatternSet(const Sentence &sentence, const PairContext &ctx);
inline PatternSet ExtractPatternSet(const EligibleSentence &eligible) {
  return ExtractPatternSet(eligible.sentence, MakePairContext(eligible));
}

Simplification LexicalizePath(const Sentence &sentence, const DepPath &path,
                              const PairContext &ctx,
                              const LexiconOptions &options = {});

// The index key for a (sentence, pair): the PATH lexicalisation, plus the
// sentence root when options.include_sentence_root is set.
Simplification SimplificationKey(const Sentence &sentence,
                                 const PatternSet &patterns,
                                 const PairContext &ctx,
                                 const LexiconOptions &options = {});

std::string LexicalizeDisplay(const Sentence &sentence,
                              const PatternSet &patterns,
                              const PairContext &ctx, const DisplayParts &parts,
                              const LexiconOptions &options = {});

}  // namespace patmine

#endif  // PATMINE_PATTERN_H_
