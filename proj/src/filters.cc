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

#include "patmine/filters.h"

#include <algorithm>

#include "json.hpp"
#include "patmine/error.h"
#include "patmine/util.h"

namespace patmine {

using json = nlohmann::json;

std::string_view FilterReasonName(FilterReason reason) {
  switch (reason) {
    case FilterReason::kNone: return "none";
    case FilterReason::kKeyword: return "keyword";
    case FilterReason::kSentenceRootCombo: return "sentence_root_combo";
    case FilterReason::kPathRootCombo: return "path_root_combo";
    case FilterReason::kPathBetweenRoots: return "path_between_roots";
  }
  return "none";
}

namespace {

const json &Section(const json &obj, const char *name) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw ConfigError(std::string("filter config missing section '") + name +
                      "'");
  }
  if (!it->is_array()) {
    throw ConfigError(std::string("filter section '") + name +
                      "' must be an array");
  }
  return *it;
}

std::string Entry(const json &v, const char *section) {
  if (!v.is_string()) {
    throw ConfigError(std::string("non-string entry in '") + section + "'");
  }
  std::string s = ToLower(Trim(v.get<std::string>()));
  if (s.empty()) {
    throw ConfigError(std::string("empty entry in '") + section + "'");
  }
  return s;
}

std::set<LemmaPair> Pairs(const json &obj, const char *name) {
  std::set<LemmaPair> out;
  for (const json &p : Section(obj, name)) {
    if (!p.is_array() || p.size() != 2) {
      throw ConfigError(std::string("entries of '") + name +
                        "' must be [root, descendant] pairs");
    }
    out.emplace(Entry(p[0], name), Entry(p[1], name));
  }
  return out;
}

}  // namespace

FilterConfig ParseFilterConfig(std::string_view text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("filter config is not valid JSON: ") +
                      e.what());
  }
  if (!obj.is_object()) throw ConfigError("filter config must be an object");
  static const std::set<std::string> kSections = {
      "keywords", "sentence_root_pairs", "path_root_pairs",
      "path_between_roots", "comment"};
  for (const auto &[name, value] : obj.items()) {
    if (!kSections.count(name)) {
      throw ConfigError("unknown filter section '" + name + "'");
    }
  }
  FilterConfig config;
  for (const json &v : Section(obj, "keywords")) {
    config.keyword_lemmas.insert(Entry(v, "keywords"));
  }
  config.root_pair_blocklist = Pairs(obj, "sentence_root_pairs");
  config.path_root_pair_blocklist = Pairs(obj, "path_root_pairs");
  for (const json &v : Section(obj, "path_between_roots")) {
    // Normalize internal whitespace so keys compare word by word.
    std::string joined;
    for (const std::string &w : SplitWords(Entry(v, "path_between_roots"))) {
      if (!joined.empty()) joined += ' ';
      joined += w;
    }
    config.path_between_roots_blocklist.insert(joined);
  }
  return config;
}

FilterConfig LoadFilterConfig(const std::filesystem::path &path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("filter config not found: " + path.string());
  }
  return ParseFilterConfig(ReadFile(path));
}

namespace {

bool HasRootCombo(const Sentence &s, TokenIndex root,
                  const std::vector<TokenIndex> &descendants,
                  const std::set<LemmaPair> &blocklist) {
  if (blocklist.empty()) return false;
  std::string root_lemma = ToLower(s.tokens[root].lemma);
  for (TokenIndex d : descendants) {
    if (blocklist.count({root_lemma, ToLower(s.tokens[d].lemma)})) return true;
  }
  return false;
}

}  // namespace

FilterVerdict ApplyFilter(const Sentence &sentence, const PatternSet &patterns,
                          const FilterConfig &config) {
  // Forms are checked too, so contractions such as "didn't" can be listed
  // verbatim next to their lemmas.
  for (const Token &t : sentence.tokens) {
    if (config.keyword_lemmas.count(ToLower(t.lemma)) ||
        config.keyword_lemmas.count(ToLower(t.form))) {
      return {false, FilterReason::kKeyword};
    }
  }
  if (HasRootCombo(sentence, patterns.sentence_root,
                   patterns.sentence_root_descendants,
                   config.root_pair_blocklist)) {
    return {false, FilterReason::kSentenceRootCombo};
  }
  if (HasRootCombo(sentence, patterns.path_root,
                   patterns.path_root_descendants,
                   config.path_root_pair_blocklist)) {
    return {false, FilterReason::kPathRootCombo};
  }
  if (!patterns.path_between_roots.empty() &&
      !config.path_between_roots_blocklist.empty()) {
    std::vector<TokenIndex> nodes = patterns.path_between_roots.nodes;
    std::sort(nodes.begin(), nodes.end());
    std::string by_lemma;
    std::string by_form;
    for (TokenIndex n : nodes) {
      if (!by_lemma.empty()) {
        by_lemma += ' ';
        by_form += ' ';
      }
      by_lemma += ToLower(sentence.tokens[n].lemma);
      by_form += ToLower(sentence.tokens[n].form);
    }
    if (config.path_between_roots_blocklist.count(by_lemma) ||
        config.path_between_roots_blocklist.count(by_form)) {
      return {false, FilterReason::kPathBetweenRoots};
    }
  }
  return {true, FilterReason::kNone};
}

}  // namespace patmine
