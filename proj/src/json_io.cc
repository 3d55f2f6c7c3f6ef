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

#include "json_io.h"

#include <string>

namespace patmine {

using json = nlohmann::json;

json MetricsToJson(const SimplificationMetrics &m) {
  return {{"key", m.key},
          {"pair_count", m.pair_count},
          {"tp", m.tp},
          {"fp", m.fp},
          {"precision_s", m.precision_s},
          {"recall_s", m.recall_s}};
}

SimplificationMetrics MetricsFromJson(const json &j) {
  SimplificationMetrics m;
  m.key = j.at("key").get<std::string>();
  m.pair_count = j.at("pair_count").get<std::size_t>();
  m.tp = j.at("tp").get<std::size_t>();
  m.fp = j.at("fp").get<std::size_t>();
  m.precision_s = j.at("precision_s").get<double>();
  m.recall_s = j.at("recall_s").get<double>();
  return m;
}

json QueueItemToJson(const QueueItem &item) {
  json examples = json::array();
  for (const SampledSentence &s : item.examples) {
    examples.push_back({{"text", s.sentence_text}, {"display", s.display}});
  }
  json out = {{"key", item.key},
              {"display", item.display},
              {"pair_count", item.pair_count},
              {"cluster_id", item.cluster_id},
              {"examples", examples}};
  out["metrics"] = item.metrics ? MetricsToJson(*item.metrics) : json(nullptr);
  return out;
}

QueueItem QueueItemFromJson(const json &j) {
  QueueItem item;
  item.key = j.at("key").get<std::string>();
  item.display = j.at("display").get<std::string>();
  item.pair_count = j.at("pair_count").get<std::size_t>();
  item.cluster_id = j.at("cluster_id").get<std::size_t>();
  for (const json &e : j.at("examples")) {
    item.examples.push_back(
        {e.at("text").get<std::string>(), e.at("display").get<std::string>()});
  }
  if (!j.at("metrics").is_null()) item.metrics = MetricsFromJson(j["metrics"]);
  return item;
}

json PairMetricsToJson(const PairMetrics &m) {
  return {{"tp", m.tp},
          {"fp", m.fp},
          {"fn", m.fn},
          {"tn", m.tn},
          {"recall", m.recall},
          {"specificity", m.specificity},
          {"precision", m.precision},
          {"f_score", m.f_score},
          {"recall_undefined", m.recall_undefined},
          {"specificity_undefined", m.specificity_undefined},
          {"precision_undefined", m.precision_undefined},
          {"f_score_undefined", m.f_score_undefined}};
}

json RankingMetricsToJson(const RankingMetrics &m) {
  json out;
  out["map"] = m.map;
  for (const auto &[k, v] : m.p_at_k) {
    out["precision_top_" + std::to_string(k)] = v;
  }
  for (const auto &[k, v] : m.r_at_k) {
    out["recall_top_" + std::to_string(k)] = v;
  }
  out["diseases_evaluated"] = m.average_precision.size();
  return out;
}

}  // namespace patmine
