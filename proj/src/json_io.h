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

// JSON shapes shared by the pipeline artifacts and the HTTP service.

#ifndef PATMINE_SRC_JSON_IO_H_
#define PATMINE_SRC_JSON_IO_H_

#include "json.hpp"
#include "patmine/eval_intrinsic.h"
#include "patmine/kbc.h"
#include "patmine/ranking.h"

namespace patmine {

nlohmann::json MetricsToJson(const SimplificationMetrics &m);
SimplificationMetrics MetricsFromJson(const nlohmann::json &j);

nlohmann::json QueueItemToJson(const QueueItem &item);
QueueItem QueueItemFromJson(const nlohmann::json &j);

nlohmann::json PairMetricsToJson(const PairMetrics &m);
nlohmann::json RankingMetricsToJson(const RankingMetrics &m);

}  // namespace patmine

#endif  // PATMINE_SRC_JSON_IO_H_
