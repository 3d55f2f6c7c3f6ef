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

// Sentence-level exclusion of negated, speculative and hedged statements.

#ifndef PATMINE_FILTERS_H_
#define PATMINE_FILTERS_H_

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "patmine/corpus.h"
#include "patmine/pattern.h"

namespace patmine {

using LemmaPair = std::pair<std::string, std::string>;

// All entries are lowercase. An empty config keeps every sentence.
struct FilterConfig {
  std::set<std::string> keyword_lemmas;
  std::set<LemmaPair> root_pair_blocklist;       // (sentence root, child)
  std::set<LemmaPair> path_root_pair_blocklist;  // (path root, child)
  std::set<std::string> path_between_roots_blocklist;
};

enum class FilterReason {
  kNone,
  kKeyword,
  kSentenceRootCombo,
  kPathRootCombo,
  kPathBetweenRoots,
};

std::string_view FilterReasonName(FilterReason reason);

struct FilterVerdict {
  bool keep = true;
  FilterReason reason = FilterReason::kNone;
};

// JSON object with exactly the four sections "keywords",
// "sentence_root_pairs", "path_root_pairs" and "path_between_roots".
// Pairs are two-element string arrays. Throws ConfigError.
FilterConfig ParseFilterConfig(std::string_view text);
FilterConfig LoadFilterConfig(const std::filesystem::path &path);

// First match wins: keyword, sentence root combo, path root combo,
// path between roots.
FilterVerdict ApplyFilter(const Sentence &sentence, const PatternSet &patterns,
                          const FilterConfig &config);

}  // namespace patmine

#endif  // PATMINE_FILTERS_H_
