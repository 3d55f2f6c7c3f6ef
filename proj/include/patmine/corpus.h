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

// Corpus data model: dependency-parsed sentences with typed entity mentions,
// read from newline-delimited JSON records.

#ifndef PATMINE_CORPUS_H_
#define PATMINE_CORPUS_H_

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace patmine {

using TokenIndex = int;
inline constexpr TokenIndex kRoot = -1;

struct Token {
  TokenIndex idx = 0;
  std::string form;
  std::string lemma;
  TokenIndex head = kRoot;
  std::string deprel;

  bool operator==(const Token &) const = default;
};

// Token span [start_tok, end_tok).
struct Mention {
  TokenIndex start_tok = 0;
  TokenIndex end_tok = 0;
  std::string entity_type;
  std::string entity_id;

  bool operator==(const Mention &) const = default;
};

struct Sentence {
  std::string doc_id;
  std::string sent_id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<Mention> mentions;

  int size() const { return static_cast<int>(tokens.size()); }
  TokenIndex root() const;
  // Direct dependents of `idx`, in increasing token order.
  std::vector<TokenIndex> children(TokenIndex idx) const;

  bool operator==(const Sentence &) const = default;
};

// A direction-normalized entity pair: `a` always plays the first configured
// type role. Identity and ordering use the ids only.
struct EntityPair {
  std::string a_id;
  std::string b_id;
  std::string a_type;
  std::string b_type;

  bool operator==(const EntityPair &other) const {
    return a_id == other.a_id && b_id == other.b_id;
  }
  std::strong_ordering operator<=>(const EntityPair &other) const {
    if (auto c = a_id <=> other.a_id; c != 0) return c;
    return b_id <=> other.b_id;
  }

  // "a_id|b_id", used as a map key in serialized artifacts.
  std::string id() const { return a_id + "|" + b_id; }
};

using PairSet = std::set<EntityPair>;

// Checks every Token/Mention/Sentence invariant. Throws ValidationError
// naming the first violated invariant.
void ValidateSentence(const Sentence &sentence);

// Parses and validates one corpus record. `line_number` is only used in
// error messages.
Sentence ParseCorpusRecord(std::string_view line, std::size_t line_number = 0);
std::string SerializeCorpusRecord(const Sentence &sentence);

// Reads a whole corpus file. Blank lines are skipped.
std::vector<Sentence> ReadCorpus(std::istream &in);
std::vector<Sentence> ReadCorpusFile(const std::filesystem::path &path);
void WriteCorpusFile(const std::filesystem::path &path,
                     const std::vector<Sentence> &sentences);

struct TypeRoles {
  std::string type_a;
  std::string type_b;
};

struct EligibleSentence {
  Sentence sentence;
  EntityPair pair;
  std::size_t mention_a = 0;  // index into sentence.mentions
  std::size_t mention_b = 0;
};

struct SkipReport {
  std::size_t total = 0;
  std::size_t kept = 0;
  // reason -> count; reasons are missing_type_a, missing_type_b,
  // multiple_type_a, multiple_type_b. Only the first reason is counted.
  std::map<std::string, std::size_t> skipped;
};

// Why `sentence` is not eligible, or an empty string if it is.
std::string EligibilitySkipReason(const Sentence &sentence,
                                  const TypeRoles &roles);

// Keeps sentences holding exactly one mention of each role type, ordered by
// (doc_id, sent_id). Throws UsageError when the two types are equal.
std::vector<EligibleSentence> EligibleSentences(
    const std::vector<Sentence> &corpus, const TypeRoles &roles,
    SkipReport *report = nullptr);

// Pair lists are "a_id<TAB>b_id" lines; '#' starts a comment line.
std::string SerializePairList(const PairSet &pairs);
PairSet ParsePairList(std::string_view text, const TypeRoles &roles);

// Syntactic head of a mention: the leftmost token in the span whose head
// lies outside the span.
TokenIndex MentionHead(const Sentence &sentence, const Mention &mention);

// Converts CoNLL-U plus a mention side-file into corpus sentences.
// Side-file lines: doc_id<TAB>sent_id<TAB>start<TAB>end<TAB>type<TAB>id with
// 0-based token offsets, end exclusive. CoNLL-U sentences take their ids from
// "# newdoc id", "# doc_id" and "# sent_id" comments.
std::vector<Sentence> ConvertConllu(std::istream &conllu,
                                    std::istream &mentions);

}  // namespace patmine

#endif  // PATMINE_CORPUS_H_
