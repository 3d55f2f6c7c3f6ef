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

// Annotation sessions over a pair index, persisted as append-only event logs
// (run_dir/sessions/<id>.events.ndjson), and the HTTP front end for them.
//
//   POST /sessions                 create a session
//   GET  /sessions                 list session ids
//   GET  /sessions/{id}            full state, items with current verdicts
//   GET  /sessions/{id}/items?n=   next n unannotated items
//   POST /sessions/{id}/verdicts   {key, value, annotator, timestamp?}
//   GET  /sessions/{id}/export     write verdict and generated-pair files
//   GET  /sessions/{id}/stats      counts and running MSP
//
// Errors are {"error": {"code": ..., "message": ...}} with status 400
// (invalid_request), 401 (unauthorized), 404 (not_found) or 409
// (usage_error).

#ifndef PATMINE_SERVICE_H_
#define PATMINE_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "patmine/clustering.h"
#include "patmine/pair_index.h"
#include "patmine/pipeline.h"
#include "patmine/ranking.h"

namespace patmine {

struct ServiceContext {
  std::filesystem::path run_dir;
  PairIndex index;
  // Seed training labels; needed by expert_with_labels sessions.
  std::optional<LabelledPairs> labels;
  // Pairs already known, used for the `novel` flag on export.
  PairSet seed_positives;
  // When set, accepted keys are cluster-expanded on export.
  std::optional<Clustering> clustering;
  std::size_t cluster_radius = 2;
  std::size_t default_session_size = 200;
  std::size_t default_examples_per_item = 20;
  SelectionThresholds default_thresholds;
};

// Reads run_dir/index, run_dir/split/train_{pos,neg}.tsv when present, and
// clusters the index keys when config.expand_clusters is set.
ServiceContext LoadServiceContext(const RunConfig &config);

struct SessionParams {
  Workflow workflow = Workflow::kExpertNoLabels;
  std::size_t session_size = 200;
  std::size_t examples_per_item = 20;
  SelectionThresholds thresholds;
  std::uint64_t seed = 0;
};

struct Session {
  std::string id;
  SessionParams params;
  std::vector<QueueItem> queue;
  std::vector<KeyedVerdict> log;            // every submission, in order
  std::map<std::string, Verdict> current;  // latest verdict per key

  // Length of the annotated prefix of the queue.
  std::size_t cursor() const;
  // MSP over the current verdicts; empty before the first verdict.
  std::optional<double> msp() const;
};

struct VerdictAck {
  std::string key;
  VerdictValue value = VerdictValue::kNo;
  bool overwritten = false;
  std::size_t annotated = 0;
  std::size_t cursor = 0;
  double msp = 0;
};

struct ExportResult {
  std::filesystem::path verdicts_file;  // relative to run_dir
  std::filesystem::path pairs_file;
  std::size_t verdicts = 0;
  std::size_t accepted_keys = 0;
  std::size_t pairs = 0;
  std::size_t novel_pairs = 0;
};

class SessionStore {
 public:
  // Replays every event log found under run_dir/sessions.
  explicit SessionStore(ServiceContext context);

  // Throws UsageError for expert_with_labels without labels, for
  // session_size < 1 or examples_per_item < 1.
  std::string Create(const SessionParams &params);
  std::vector<std::string> Ids() const;
  // Copies of the session state. Throws NotFoundError.
  Session Get(const std::string &id) const;
  std::vector<QueueItem> NextItems(const std::string &id, std::size_t n) const;
  // Throws NotFoundError for an unknown session and UsageError for a key
  // outside the queue. An empty timestamp is replaced by the current UTC
  // time.
  VerdictAck Submit(const std::string &id, const std::string &key,
                    VerdictValue value, const std::string &annotator,
                    const std::string &timestamp);
  ExportResult Export(const std::string &id);

  const ServiceContext &context() const { return context_; }

  // Rebuilds one session from its event log.
  static Session Replay(const std::filesystem::path &events_file);

 private:
  std::filesystem::path EventsPath(const std::string &id) const;
  Session &Find(const std::string &id);
  const Session &Find(const std::string &id) const;

  ServiceContext context_;
  mutable std::mutex mutex_;
  std::map<std::string, Session> sessions_;
  std::size_t next_id_ = 1;
};

// HTTP front end. Requests need "Authorization: Bearer <token>" when a
// token is set.
class AnnotationServer {
 public:
  AnnotationServer(SessionStore &store, std::string token = "");
  ~AnnotationServer();
  AnnotationServer(const AnnotationServer &) = delete;
  AnnotationServer &operator=(const AnnotationServer &) = delete;

  // Binds and starts serving on a background thread. Port 0 picks a free
  // port. Returns the bound port; throws ConfigError when binding fails.
  int Start(const std::string &host, int port);
  void Stop();
  // Blocks until the server stops.
  void Wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace patmine

#endif  // PATMINE_SERVICE_H_
