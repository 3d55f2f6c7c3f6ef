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

// Bidirectional simplification <-> entity pair index over an append-only
// record log.
//
// On disk an index is a directory holding:
//   records.ndjson  one IndexRecord per line, in insertion order
//   meta            JSON: schema_version, type_a, type_b, corpus_hash
// The lookup maps are rebuilt from the log on load.

#ifndef PATMINE_PAIR_INDEX_H_
#define PATMINE_PAIR_INDEX_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "patmine/corpus.h"

namespace patmine {

struct IndexRecord {
  std::string doc_id;
  std::string sent_id;
  EntityPair pair;
  std::string simplification_key;
  std::string display;
  std::string sentence_text;

  bool operator==(const IndexRecord &) const = default;
};

struct IndexMeta {
  int schema_version = 1;
  std::string type_a;
  std::string type_b;
  std::string corpus_hash;

  bool operator==(const IndexMeta &) const = default;
};

struct SampledSentence {
  std::string sentence_text;
  std::string display;
};

class PairIndex {
 public:
  static constexpr int kSchemaVersion = 1;

  PairIndex() = default;

  // Appends the record unless an identical (doc_id, sent_id, key, pair)
  // entry already exists. Returns true when the record was added. Throws
  // ValidationError for an empty key.
  bool Insert(const IndexRecord &record);

  const std::vector<IndexRecord> &records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  // All keys, lexicographically ordered.
  std::vector<std::string> Keys() const;
  bool Contains(const std::string &key) const {
    return by_key_.count(key) > 0;
  }

  PairSet PairsForSimplification(const std::string &key) const;
  std::set<std::string> SimplificationsForPair(const EntityPair &pair) const;
  // Every distinct pair in the index.
  PairSet AllPairs() const;

  std::size_t PairCount(const std::string &key) const;
  std::size_t SentenceCount(const std::string &key) const;
  std::map<std::string, std::size_t> PairCounts() const;

  // Record positions stored under `key`, in insertion order.
  std::vector<std::size_t> RecordsForSimplification(
      const std::string &key) const;

  // Uniform sample of up to n records under `key`, without replacement.
  // Unknown keys give an empty list. Throws UsageError when n < 1.
  std::vector<SampledSentence> SampleSentences(const std::string &key,
                                               std::size_t n,
                                               std::uint64_t seed) const;

  // Maps rebuilt from scratch from the log; used to audit the incremental
  // maintenance.
  PairIndex Rebuilt() const;
  bool SameMaps(const PairIndex &other) const;

  IndexMeta &meta() { return meta_; }
  const IndexMeta &meta() const { return meta_; }

  void Save(const std::filesystem::path &dir) const;
  static PairIndex Load(const std::filesystem::path &dir);

 private:
  using RecordKey =
      std::tuple<std::string, std::string, std::string, std::string,
                 std::string>;

  std::vector<IndexRecord> records_;
  std::set<RecordKey> seen_;
  // key -> pair -> record positions
  std::map<std::string, std::map<EntityPair, std::vector<std::size_t>>>
      by_key_;
  // pair -> key -> record positions
  std::map<EntityPair, std::map<std::string, std::vector<std::size_t>>>
      by_pair_;
  IndexMeta meta_;
};

std::string SerializeIndexRecord(const IndexRecord &record);
IndexRecord ParseIndexRecord(const std::string &line, std::size_t line_number);

}  // namespace patmine

#endif  // PATMINE_PAIR_INDEX_H_
