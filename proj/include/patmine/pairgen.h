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

#ifndef PATMINE_PAIRGEN_H_
#define PATMINE_PAIRGEN_H_

#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "patmine/clustering.h"
#include "patmine/corpus.h"
#include "patmine/pair_index.h"

namespace patmine {

struct GeneratedPair {
  EntityPair pair;
  std::set<std::string> supporting_keys;
  std::vector<std::pair<std::string, std::string>> supporting_sentences;
  // Not among the seed positives given at generation time.
  bool novel = true;

  bool operator==(const GeneratedPair &) const = default;
};

// Every pair expressed by an accepted key, ordered by pair id. With
// `clustering` set, the accepted keys are first expanded to their whole
// clusters. Throws UsageError for keys missing from the index.
std::vector<GeneratedPair> GeneratePairs(const PairIndex &index,
                                         const std::set<std::string> &accepted,
                                         const PairSet &seed_positives,
                                         const Clustering *clustering = nullptr);

PairSet PairsOf(const std::vector<GeneratedPair> &generated);
std::size_t CountNovel(const std::vector<GeneratedPair> &generated);

std::string SerializeGeneratedPairs(const std::vector<GeneratedPair> &pairs);
std::vector<GeneratedPair> ParseGeneratedPairs(const std::string &text);

}  // namespace patmine

#endif  // PATMINE_PAIRGEN_H_
