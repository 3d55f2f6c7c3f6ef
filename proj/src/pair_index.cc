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

#include "patmine/pair_index.h"

#include <fstream>

#include "json.hpp"
#include "patmine/error.h"
#include "patmine/util.h"

namespace patmine {

using json = nlohmann::json;

bool PairIndex::Insert(const IndexRecord &record) {
  if (record.simplification_key.empty()) {
    throw ValidationError("empty simplification key");
  }
  RecordKey rk{record.doc_id, record.sent_id, record.simplification_key,
               record.pair.a_id, record.pair.b_id};
  if (!seen_.insert(rk).second) return false;
  std::size_t pos = records_.size();
  records_.push_back(record);
  by_key_[record.simplification_key][record.pair].push_back(pos);
  by_pair_[record.pair][record.simplification_key].push_back(pos);
  return true;
}

std::vector<std::string> PairIndex::Keys() const {
  std::vector<std::string> keys;
  keys.reserve(by_key_.size());
  for (const auto &[key, pairs] : by_key_) keys.push_back(key);
  return keys;
}

PairSet PairIndex::PairsForSimplification(const std::string &key) const {
  PairSet out;
  auto it = by_key_.find(key);
  if (it == by_key_.end()) return out;
  for (const auto &[pair, positions] : it->second) out.insert(pair);
  return out;
}

std::set<std::string> PairIndex::SimplificationsForPair(
    const EntityPair &pair) const {
  std::set<std::string> out;
  auto it = by_pair_.find(pair);
  if (it == by_pair_.end()) return out;
  for (const auto &[key, positions] : it->second) out.insert(key);
  return out;
}

PairSet PairIndex::AllPairs() const {
  PairSet out;
  for (const auto &[pair, keys] : by_pair_) out.insert(pair);
  return out;
}

std::size_t PairIndex::PairCount(const std::string &key) const {
  auto it = by_key_.find(key);
  return it == by_key_.end() ? 0 : it->second.size();
}

std::size_t PairIndex::SentenceCount(const std::string &key) const {
  return RecordsForSimplification(key).size();
}

std::map<std::string, std::size_t> PairIndex::PairCounts() const {
  std::map<std::string, std::size_t> out;
  for (const auto &[key, pairs] : by_key_) out[key] = pairs.size();
  return out;
}

std::vector<std::size_t> PairIndex::RecordsForSimplification(
    const std::string &key) const {
  std::vector<std::size_t> out;
  auto it = by_key_.find(key);
  if (it == by_key_.end()) return out;
  for (const auto &[pair, positions] : it->second) {
    out.insert(out.end(), positions.begin(), positions.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SampledSentence> PairIndex::SampleSentences(
    const std::string &key, std::size_t n, std::uint64_t seed) const {
  if (n < 1) throw UsageError("sample size must be at least 1");
  std::vector<std::size_t> positions = RecordsForSimplification(key);
  // Partial Fisher-Yates: the first n slots become a uniform sample.
  Rng rng(seed ^ Fnv1a64(key));
  std::size_t take = std::min(n, positions.size());
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.Below(positions.size() - i));
    std::swap(positions[i], positions[j]);
  }
  std::vector<SampledSentence> out;
  for (std::size_t i = 0; i < take; ++i) {
    const IndexRecord &r = records_[positions[i]];
    out.push_back({r.sentence_text, r.display});
  }
  return out;
}

PairIndex PairIndex::Rebuilt() const {
  PairIndex fresh;
  fresh.meta_ = meta_;
  for (const IndexRecord &r : records_) fresh.Insert(r);
  return fresh;
}

bool PairIndex::SameMaps(const PairIndex &other) const {
  return by_key_ == other.by_key_ && by_pair_ == other.by_pair_;
}

std::string SerializeIndexRecord(const IndexRecord &r) {
  json obj = {{"doc_id", r.doc_id},
              {"sent_id", r.sent_id},
              {"a_id", r.pair.a_id},
              {"b_id", r.pair.b_id},
              {"a_type", r.pair.a_type},
              {"b_type", r.pair.b_type},
              {"key", r.simplification_key},
              {"display", r.display},
              {"text", r.sentence_text}};
  return obj.dump();
}

IndexRecord ParseIndexRecord(const std::string &line, std::size_t line_number) {
  try {
    json obj = json::parse(line);
    IndexRecord r;
    r.doc_id = obj.at("doc_id").get<std::string>();
    r.sent_id = obj.at("sent_id").get<std::string>();
    r.pair.a_id = obj.at("a_id").get<std::string>();
    r.pair.b_id = obj.at("b_id").get<std::string>();
    r.pair.a_type = obj.at("a_type").get<std::string>();
    r.pair.b_type = obj.at("b_type").get<std::string>();
    r.simplification_key = obj.at("key").get<std::string>();
    r.display = obj.at("display").get<std::string>();
    r.sentence_text = obj.at("text").get<std::string>();
    return r;
  } catch (const json::exception &e) {
    throw ParseError(line_number, std::string("bad index record: ") + e.what());
  }
}

void PairIndex::Save(const std::filesystem::path &dir) const {
  std::filesystem::create_directories(dir);
  std::string log;
  for (const IndexRecord &r : records_) {
    log += SerializeIndexRecord(r);
    log += '\n';
  }
  WriteFile(dir / "records.ndjson", log);
  json meta = {{"schema_version", meta_.schema_version},
               {"type_a", meta_.type_a},
               {"type_b", meta_.type_b},
               {"corpus_hash", meta_.corpus_hash}};
  WriteFile(dir / "meta", meta.dump(2) + "\n");
}

PairIndex PairIndex::Load(const std::filesystem::path &dir) {
  if (!std::filesystem::exists(dir / "meta") ||
      !std::filesystem::exists(dir / "records.ndjson")) {
    throw ConfigError("not an index directory: " + dir.string());
  }
  PairIndex index;
  try {
    json meta = json::parse(ReadFile(dir / "meta"));
    index.meta_.schema_version = meta.at("schema_version").get<int>();
    index.meta_.type_a = meta.at("type_a").get<std::string>();
    index.meta_.type_b = meta.at("type_b").get<std::string>();
    index.meta_.corpus_hash = meta.at("corpus_hash").get<std::string>();
  } catch (const json::exception &e) {
    throw ConfigError(std::string("bad index meta: ") + e.what());
  }
  if (index.meta_.schema_version != kSchemaVersion) {
    throw ConfigError("unsupported index schema version " +
                      std::to_string(index.meta_.schema_version));
  }
  std::ifstream in(dir / "records.ndjson");
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    index.Insert(ParseIndexRecord(line, line_number));
  }
  return index;
}

}  // namespace patmine
