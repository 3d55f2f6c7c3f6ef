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

#include "patmine/pairgen.h"

#include <map>
#include <sstream>

#include "json.hpp"
#include "patmine/error.h"
#include "patmine/util.h"

namespace patmine {

using json = nlohmann::json;

std::vector<GeneratedPair> GeneratePairs(const PairIndex &index,
                                         const std::set<std::string> &accepted,
                                         const PairSet &seed_positives,
                                         const Clustering *clustering) {
  for (const std::string &key : accepted) {
    if (!index.Contains(key)) {
      throw UsageError("accepted key not in index: " + key);
    }
  }
  std::set<std::string> keys =
      clustering != nullptr ? ExpandSelection(accepted, *clustering) : accepted;

  std::map<EntityPair, GeneratedPair> by_pair;
  for (const std::string &key : keys) {
    for (std::size_t pos : index.RecordsForSimplification(key)) {
      const IndexRecord &r = index.records()[pos];
      GeneratedPair &g = by_pair[r.pair];
      g.pair = r.pair;
      g.supporting_keys.insert(key);
      g.supporting_sentences.emplace_back(r.doc_id, r.sent_id);
    }
  }
  std::vector<GeneratedPair> out;
  out.reserve(by_pair.size());
  for (auto &[pair, g] : by_pair) {
    std::sort(g.supporting_sentences.begin(), g.supporting_sentences.end());
    g.supporting_sentences.erase(std::unique(g.supporting_sentences.begin(),
                                             g.supporting_sentences.end()),
                                 g.supporting_sentences.end());
    g.novel = seed_positives.count(pair) == 0;
    out.push_back(std::move(g));
  }
  return out;
}

PairSet PairsOf(const std::vector<GeneratedPair> &generated) {
  PairSet out;
  for (const GeneratedPair &g : generated) out.insert(g.pair);
  return out;
}

std::size_t CountNovel(const std::vector<GeneratedPair> &generated) {
  std::size_t n = 0;
  for (const GeneratedPair &g : generated) n += g.novel ? 1 : 0;
  return n;
}

std::string SerializeGeneratedPairs(const std::vector<GeneratedPair> &pairs) {
  std::string out;
  for (const GeneratedPair &g : pairs) {
    json sentences = json::array();
    for (const auto &[doc, sent] : g.supporting_sentences) {
      sentences.push_back({doc, sent});
    }
    json obj = {{"a_id", g.pair.a_id},
                {"b_id", g.pair.b_id},
                {"a_type", g.pair.a_type},
                {"b_type", g.pair.b_type},
                {"novel", g.novel},
                {"supporting_keys", g.supporting_keys},
                {"supporting_sentences", std::move(sentences)}};
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<GeneratedPair> ParseGeneratedPairs(const std::string &text) {
  std::vector<GeneratedPair> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    try {
      json obj = json::parse(line);
      GeneratedPair g;
      g.pair = {obj.at("a_id").get<std::string>(),
                obj.at("b_id").get<std::string>(),
                obj.at("a_type").get<std::string>(),
                obj.at("b_type").get<std::string>()};
      g.novel = obj.at("novel").get<bool>();
      g.supporting_keys =
          obj.at("supporting_keys").get<std::set<std::string>>();
      for (const json &s : obj.at("supporting_sentences")) {
        g.supporting_sentences.emplace_back(s.at(0).get<std::string>(),
                                            s.at(1).get<std::string>());
      }
      out.push_back(std::move(g));
    } catch (const json::exception &e) {
      throw ParseError(line_number,
                       std::string("bad generated pair record: ") + e.what());
    }
  }
  return out;
}

}  // namespace patmine
