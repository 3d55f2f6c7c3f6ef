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

#include "patmine/service.h"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "json_io.h"
#include "patmine/error.h"
#include "patmine/eval_intrinsic.h"
#include "patmine/pairgen.h"
#include "patmine/util.h"

namespace patmine {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char *kSessionsDir = "sessions";
constexpr const char *kEventsSuffix = ".events.ndjson";

std::string UtcNow() {
  std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json ThresholdsToJson(const SelectionThresholds &t) {
  return {{"precision", t.precision},
          {"recall", t.recall},
          {"min_words", t.min_words}};
}

json ParamsToJson(const SessionParams &p) {
  return {{"workflow", WorkflowName(p.workflow)},
          {"session_size", p.session_size},
          {"examples_per_item", p.examples_per_item},
          {"thresholds", ThresholdsToJson(p.thresholds)},
          {"seed", p.seed}};
}

SessionParams ParamsFromJson(const json &j) {
  SessionParams p;
  p.workflow = ParseWorkflow(j.at("workflow").get<std::string>());
  p.session_size = j.at("session_size").get<std::size_t>();
  p.examples_per_item = j.at("examples_per_item").get<std::size_t>();
  const json &t = j.at("thresholds");
  p.thresholds = {t.at("precision").get<double>(), t.at("recall").get<double>(),
                  t.at("min_words").get<std::size_t>()};
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

json VerdictToJson(const Verdict &v) {
  return {{"value", VerdictName(v.value)},
          {"annotator", v.annotator},
          {"timestamp", v.timestamp}};
}

void AppendLine(const fs::path &path, const std::string &line) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw ConfigError("cannot append to " + path.string());
  out << line << '\n';
  out.flush();
  if (!out) throw ConfigError("write failed for " + path.string());
}

void ApplyVerdict(Session &s, KeyedVerdict kv) {
  s.current[kv.key] = kv.verdict;
  s.log.push_back(std::move(kv));
}

}  // namespace

std::size_t Session::cursor() const {
  std::size_t i = 0;
  while (i < queue.size() && current.count(queue[i].key)) ++i;
  return i;
}

std::optional<double> Session::msp() const {
  if (current.empty()) return std::nullopt;
  std::vector<Verdict> verdicts;
  for (const auto &[key, v] : current) verdicts.push_back(v);
  return ManualSimplificationPrecision(verdicts);
}

ServiceContext LoadServiceContext(const RunConfig &config) {
  ServiceContext ctx;
  ctx.run_dir = config.run_dir;
  fs::path index_dir = config.run_dir / "index";
  if (!fs::exists(index_dir)) {
    throw ConfigError("missing input " + index_dir.string() +
                      " (run the extract stage first)");
  }
  ctx.index = PairIndex::Load(index_dir);
  fs::path split = config.run_dir / "split";
  if (fs::exists(split / "train_pos.tsv") &&
      fs::exists(split / "train_neg.tsv")) {
    LabelledPairs labels{
        ParsePairList(ReadFile(split / "train_pos.tsv"), config.roles),
        ParsePairList(ReadFile(split / "train_neg.tsv"), config.roles)};
    ctx.seed_positives = labels.positives;
    ctx.labels = std::move(labels);
  } else if (fs::exists(config.gold_path())) {
    ctx.seed_positives = ParsePairList(ReadFile(config.gold_path()), config.roles);
  }
  ctx.cluster_radius = config.cluster_radius;
  if (config.expand_clusters) {
    ctx.clustering = ClusterSimplifications(
        ctx.index.Keys(), config.cluster_radius, ctx.index.PairCounts());
  }
  ctx.default_session_size = config.session_size;
  ctx.default_examples_per_item = config.examples_per_item;
  ctx.default_thresholds = config.thresholds;
  return ctx;
}

SessionStore::SessionStore(ServiceContext context)
    : context_(std::move(context)) {
  fs::path dir = context_.run_dir / kSessionsDir;
  if (!fs::exists(dir)) return;
  std::vector<fs::path> logs;
  for (const auto &entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.size() > std::strlen(kEventsSuffix) &&
        name.ends_with(kEventsSuffix)) {
      logs.push_back(entry.path());
    }
  }
  std::sort(logs.begin(), logs.end());
  for (const fs::path &log : logs) {
    Session s = Replay(log);
    if (s.id.size() > 1 && s.id[0] == 's') {
      std::size_t n = std::strtoull(s.id.c_str() + 1, nullptr, 10);
      next_id_ = std::max(next_id_, n + 1);
    }
    std::string id = s.id;
    sessions_.emplace(id, std::move(s));
  }
}

Session SessionStore::Replay(const fs::path &events_file) {
  std::istringstream in(ReadFile(events_file));
  std::string line;
  std::size_t line_number = 0;
  Session s;
  bool created = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    try {
      json e = json::parse(line);
      std::string type = e.at("event").get<std::string>();
      if (type == "created") {
        if (created) throw ParseError(line_number, "duplicate created event");
        s.id = e.at("id").get<std::string>();
        s.params = ParamsFromJson(e.at("params"));
        for (const json &item : e.at("queue")) {
          s.queue.push_back(QueueItemFromJson(item));
        }
        created = true;
      } else if (type == "verdict") {
        if (!created) throw ParseError(line_number, "verdict before creation");
        KeyedVerdict kv;
        kv.key = e.at("key").get<std::string>();
        kv.verdict.value = ParseVerdict(e.at("value").get<std::string>());
        kv.verdict.annotator = e.at("annotator").get<std::string>();
        kv.verdict.timestamp = e.at("timestamp").get<std::string>();
        ApplyVerdict(s, std::move(kv));
      } else {
        throw ParseError(line_number, "unknown event " + type);
      }
    } catch (const json::exception &e) {
      throw ParseError(line_number, std::string("bad session event: ") +
                                        e.what());
    }
  }
  if (!created) {
    throw ParseError(0, "session log without creation: " +
                            events_file.string());
  }
  return s;
}

fs::path SessionStore::EventsPath(const std::string &id) const {
  return context_.run_dir / kSessionsDir / (id + kEventsSuffix);
}

Session &SessionStore::Find(const std::string &id) {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("no session " + id);
  return it->second;
}

const Session &SessionStore::Find(const std::string &id) const {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("no session " + id);
  return it->second;
}

std::string SessionStore::Create(const SessionParams &params) {
  if (params.workflow != Workflow::kExpertNoLabels &&
      params.workflow != Workflow::kExpertWithLabels) {
    throw UsageError("sessions need an expert workflow");
  }
  if (params.workflow == Workflow::kExpertWithLabels && !context_.labels) {
    throw UsageError("expert_with_labels needs seed labels (run rank first)");
  }
  if (params.session_size < 1 || params.examples_per_item < 1) {
    throw UsageError("session_size and examples_per_item must be at least 1");
  }
  std::lock_guard<std::mutex> lock(mutex_);
  QueueOptions options;
  options.ordering = params.workflow == Workflow::kExpertWithLabels
                         ? QueueOrdering::kByMetrics
                         : QueueOrdering::kByCount;
  if (context_.labels) options.labels = &*context_.labels;
  options.thresholds = params.thresholds;
  options.session_size = params.session_size;
  options.examples_per_item = params.examples_per_item;
  options.seed = params.seed;
  options.cluster_radius = context_.cluster_radius;
  for (const auto &[id, s] : sessions_) {
    for (const auto &[key, v] : s.current) options.already_annotated.insert(key);
  }
  std::vector<QueueItem> queue = BuildAnnotationQueue(context_.index, options);

  char id_buf[32];
  std::snprintf(id_buf, sizeof(id_buf), "s%04zu", next_id_);
  Session s;
  s.id = id_buf;
  s.params = params;
  s.queue = std::move(queue);

  json items = json::array();
  for (const QueueItem &item : s.queue) items.push_back(QueueItemToJson(item));
  fs::create_directories(context_.run_dir / kSessionsDir);
  fs::path path = EventsPath(s.id);
  if (fs::exists(path)) throw UsageError("session log already exists: " + s.id);
  AppendLine(path, json({{"event", "created"},
                         {"id", s.id},
                         {"params", ParamsToJson(params)},
                         {"queue", items}})
                       .dump());
  ++next_id_;
  std::string id = s.id;
  sessions_.emplace(id, std::move(s));
  return id;
}

std::vector<std::string> SessionStore::Ids() const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<std::string> out;
  for (const auto &[id, s] : sessions_) out.push_back(id);
  return out;
}

Session SessionStore::Get(const std::string &id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return Find(id);
}

std::vector<QueueItem> SessionStore::NextItems(const std::string &id,
                                               std::size_t n) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const Session &s = Find(id);
  std::vector<QueueItem> out;
  for (std::size_t i = s.cursor(); i < s.queue.size() && out.size() < n; ++i) {
    if (!s.current.count(s.queue[i].key)) out.push_back(s.queue[i]);
  }
  return out;
}

VerdictAck SessionStore::Submit(const std::string &id, const std::string &key,
                                VerdictValue value,
                                const std::string &annotator,
                                const std::string &timestamp) {
  std::lock_guard<std::mutex> lock(mutex_);
  Session &s = Find(id);
  bool in_queue = std::any_of(s.queue.begin(), s.queue.end(),
                              [&](const QueueItem &q) { return q.key == key; });
  if (!in_queue) throw UsageError("key not in session " + id + ": " + key);
  KeyedVerdict kv{key, {value, annotator, timestamp.empty() ? UtcNow() : timestamp}};
  AppendLine(EventsPath(id), json({{"event", "verdict"},
                                   {"key", kv.key},
                                   {"value", VerdictName(value)},
                                   {"annotator", kv.verdict.annotator},
                                   {"timestamp", kv.verdict.timestamp}})
                                 .dump());
  VerdictAck ack;
  ack.key = key;
  ack.value = value;
  ack.overwritten = s.current.count(key) > 0;
  ApplyVerdict(s, std::move(kv));
  ack.annotated = s.current.size();
  ack.cursor = s.cursor();
  ack.msp = *s.msp();
  return ack;
}

ExportResult SessionStore::Export(const std::string &id) {
  std::lock_guard<std::mutex> lock(mutex_);
  const Session &s = Find(id);
  ExportResult r;
  r.verdicts_file = fs::path(kSessionsDir) / (id + ".verdicts.json");
  r.pairs_file = fs::path(kSessionsDir) / (id + ".generated_pairs.ndjson");
  WriteFile(context_.run_dir / r.verdicts_file,
            SerializeVerdictFile(id, WorkflowName(s.params.workflow), s.log));
  std::set<std::string> accepted = AcceptedKeys(s.log);
  std::vector<GeneratedPair> pairs =
      GeneratePairs(context_.index, accepted, context_.seed_positives,
                    context_.clustering ? &*context_.clustering : nullptr);
  WriteFile(context_.run_dir / r.pairs_file, SerializeGeneratedPairs(pairs));
  r.verdicts = s.log.size();
  r.accepted_keys = accepted.size();
  r.pairs = pairs.size();
  r.novel_pairs = CountNovel(pairs);
  return r;
}

// HTTP layer.

namespace {

class BadRequest : public Error {
 public:
  explicit BadRequest(const std::string &message)
      : Error("invalid_request", message) {}
};

void Reply(httplib::Response &res, int status, const json &body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response &res, int status, const std::string &code,
                const std::string &message) {
  Reply(res, status, {{"error", {{"code", code}, {"message", message}}}});
}

template <typename Handler>
httplib::Server::Handler Guard(Handler handler) {
  return [handler](const httplib::Request &req, httplib::Response &res) {
    try {
      handler(req, res);
    } catch (const BadRequest &e) {
      ReplyError(res, 400, e.code(), e.what());
    } catch (const NotFoundError &e) {
      ReplyError(res, 404, e.code(), e.what());
    } catch (const UsageError &e) {
      ReplyError(res, 409, e.code(), e.what());
    } catch (const Error &e) {
      ReplyError(res, 500, e.code(), e.what());
    } catch (const std::exception &e) {
      ReplyError(res, 500, "internal", e.what());
    }
  };
}

json ParseBody(const httplib::Request &req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw BadRequest("request body must be a JSON object");
  }
  return body;
}

template <typename T>
T Field(const json &body, const char *name, T fallback) {
  if (!body.contains(name)) return fallback;
  try {
    return body.at(name).get<T>();
  } catch (const json::exception &) {
    throw BadRequest(std::string("bad field ") + name);
  }
}

json ItemsToJson(const std::vector<QueueItem> &items) {
  json out = json::array();
  for (const QueueItem &item : items) out.push_back(QueueItemToJson(item));
  return out;
}

json StatsToJson(const Session &s) {
  std::size_t yes = 0, no = 0, maybe = 0;
  for (const auto &[key, v] : s.current) {
    yes += v.value == VerdictValue::kYes;
    no += v.value == VerdictValue::kNo;
    maybe += v.value == VerdictValue::kMaybe;
  }
  std::optional<double> msp = s.msp();
  return {{"id", s.id},
          {"workflow", WorkflowName(s.params.workflow)},
          {"size", s.queue.size()},
          {"annotated", s.current.size()},
          {"cursor", s.cursor()},
          {"submissions", s.log.size()},
          {"yes", yes},
          {"no", no},
          {"maybe", maybe},
          {"msp", msp ? json(*msp) : json(nullptr)}};
}

json SessionToJson(const Session &s) {
  json out = StatsToJson(s);
  out["params"] = ParamsToJson(s.params);
  json items = json::array();
  for (const QueueItem &item : s.queue) {
    json j = QueueItemToJson(item);
    auto it = s.current.find(item.key);
    j["verdict"] = it == s.current.end() ? json(nullptr) : VerdictToJson(it->second);
    items.push_back(std::move(j));
  }
  out["items"] = std::move(items);
  return out;
}

}  // namespace

struct AnnotationServer::Impl {
  SessionStore &store;
  std::string token;
  httplib::Server server;
  std::thread thread;

  Impl(SessionStore &s, std::string t) : store(s), token(std::move(t)) {
    Routes();
  }

  void Routes() {
    server.set_pre_routing_handler(
        [this](const httplib::Request &req, httplib::Response &res) {
          if (token.empty() ||
              req.get_header_value("Authorization") == "Bearer " + token) {
            return httplib::Server::HandlerResponse::Unhandled;
          }
          ReplyError(res, 401, "unauthorized", "missing or wrong bearer token");
          return httplib::Server::HandlerResponse::Handled;
        });

    server.Get("/health", Guard([](const httplib::Request &,
                                   httplib::Response &res) {
                 Reply(res, 200, {{"status", "ok"}});
               }));

    server.Post("/sessions", Guard([this](const httplib::Request &req,
                                          httplib::Response &res) {
                  json body = ParseBody(req);
                  const ServiceContext &ctx = store.context();
                  SessionParams p;
                  try {
                    p.workflow = ParseWorkflow(
                        Field<std::string>(body, "workflow", "expert_no_labels"));
                  } catch (const ConfigError &e) {
                    throw BadRequest(e.what());
                  }
                  if (p.workflow != Workflow::kExpertNoLabels &&
                      p.workflow != Workflow::kExpertWithLabels) {
                    throw BadRequest("sessions need an expert workflow");
                  }
                  if (!body.contains("seed")) throw BadRequest("seed is required");
                  p.seed = Field<std::uint64_t>(body, "seed", 0);
                  p.session_size = Field<std::size_t>(body, "session_size",
                                                      ctx.default_session_size);
                  p.examples_per_item = Field<std::size_t>(
                      body, "examples_per_item", ctx.default_examples_per_item);
                  if (p.session_size < 1 || p.examples_per_item < 1) {
                    throw BadRequest(
                        "session_size and examples_per_item must be positive");
                  }
                  p.thresholds = ctx.default_thresholds;
                  if (body.contains("thresholds")) {
                    const json &t = body["thresholds"];
                    if (!t.is_object()) throw BadRequest("bad field thresholds");
                    p.thresholds.precision =
                        Field<double>(t, "precision", p.thresholds.precision);
                    p.thresholds.recall =
                        Field<double>(t, "recall", p.thresholds.recall);
                    p.thresholds.min_words =
                        Field<std::size_t>(t, "min_words", p.thresholds.min_words);
                  }
                  std::string id = store.Create(p);
                  Reply(res, 201, StatsToJson(store.Get(id)));
                }));

    server.Get("/sessions", Guard([this](const httplib::Request &,
                                         httplib::Response &res) {
                 Reply(res, 200, {{"sessions", store.Ids()}});
               }));

    server.Get(R"(/sessions/([^/]+))",
               Guard([this](const httplib::Request &req, httplib::Response &res) {
                 Reply(res, 200, SessionToJson(store.Get(req.matches[1])));
               }));

    server.Get(R"(/sessions/([^/]+)/items)",
               Guard([this](const httplib::Request &req, httplib::Response &res) {
                 std::size_t n = 10;
                 if (req.has_param("n")) {
                   std::string raw = req.get_param_value("n");
                   char *end = nullptr;
                   long long v = std::strtoll(raw.c_str(), &end, 10);
                   if (raw.empty() || *end != '\0' || v < 1) {
                     throw BadRequest("n must be a positive integer");
                   }
                   n = static_cast<std::size_t>(v);
                 }
                 std::string id = req.matches[1];
                 Reply(res, 200, {{"items", ItemsToJson(store.NextItems(id, n))},
                                  {"cursor", store.Get(id).cursor()}});
               }));

    server.Post(R"(/sessions/([^/]+)/verdicts)",
                Guard([this](const httplib::Request &req, httplib::Response &res) {
                  json body = ParseBody(req);
                  std::string key = Field<std::string>(body, "key", "");
                  std::string value = Field<std::string>(body, "value", "");
                  if (key.empty()) throw BadRequest("key is required");
                  VerdictValue v;
                  try {
                    v = ParseVerdict(value);
                  } catch (const UsageError &e) {
                    throw BadRequest(e.what());
                  }
                  VerdictAck ack = store.Submit(
                      req.matches[1], key, v,
                      Field<std::string>(body, "annotator", ""),
                      Field<std::string>(body, "timestamp", ""));
                  Reply(res, 200, {{"key", ack.key},
                                   {"value", VerdictName(ack.value)},
                                   {"overwritten", ack.overwritten},
                                   {"annotated", ack.annotated},
                                   {"cursor", ack.cursor},
                                   {"msp", ack.msp}});
                }));

    server.Get(R"(/sessions/([^/]+)/export)",
               Guard([this](const httplib::Request &req, httplib::Response &res) {
                 ExportResult r = store.Export(req.matches[1]);
                 Reply(res, 200, {{"verdicts_file", r.verdicts_file.string()},
                                  {"pairs_file", r.pairs_file.string()},
                                  {"verdicts", r.verdicts},
                                  {"accepted_keys", r.accepted_keys},
                                  {"pairs", r.pairs},
                                  {"novel_pairs", r.novel_pairs}});
               }));

    server.Get(R"(/sessions/([^/]+)/stats)",
               Guard([this](const httplib::Request &req, httplib::Response &res) {
                 Reply(res, 200, StatsToJson(store.Get(req.matches[1])));
               }));
  }
};

AnnotationServer::AnnotationServer(SessionStore &store, std::string token)
    : impl_(std::make_unique<Impl>(store, std::move(token))) {}

AnnotationServer::~AnnotationServer() { Stop(); }

int AnnotationServer::Start(const std::string &host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void AnnotationServer::Stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void AnnotationServer::Wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace patmine
