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

#include "patmine/pipeline.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "json_io.h"
#include "patmine/clustering.h"
#include "patmine/error.h"
#include "patmine/filters.h"
#include "patmine/pair_index.h"
#include "patmine/pairgen.h"
#include "patmine/service.h"
#include "patmine/util.h"

namespace patmine {

namespace fs = std::filesystem;
using json = nlohmann::json;

json ConfigToJson(const RunConfig &c);

namespace {

constexpr const char *kIndexDir = "index";
constexpr const char *kSplitDir = "split";

json DefaultConfigJson() { return ConfigToJson(RunConfig{}); }

void Merge(json &base, const json &patch, const std::string &prefix) {
  if (!patch.is_object()) {
    throw ConfigError("config " + (prefix.empty() ? "root" : prefix) +
                      " must be an object");
  }
  for (const auto &[key, value] : patch.items()) {
    std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown config key " + path);
    if (base[key].is_object()) {
      Merge(base[key], value, path);
    } else {
      base[key] = value;
    }
  }
}

void ApplyOverride(json &base, const std::string &assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key=value: " + assignment);
  }
  std::string path = assignment.substr(0, eq);
  std::string raw = assignment.substr(eq + 1);
  json *node = &base;
  for (const std::string &part : SplitString(path, '.')) {
    if (!node->is_object() || !node->contains(part)) {
      throw ConfigError("unknown config key " + path);
    }
    node = &(*node)[part];
  }
  if (node->is_object()) throw ConfigError("cannot override section " + path);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded() || (node->is_string() && !value.is_string())) {
    value = raw;
  }
  *node = value;
}

template <typename T>
T Get(const json &j, const char *section, const char *key) {
  const json &v = section ? j.at(section).at(key) : j.at(key);
  try {
    return v.get<T>();
  } catch (const json::exception &) {
    std::string name = section ? std::string(section) + "." + key : key;
    throw ConfigError("bad value for " + name + ": " + v.dump());
  }
}

RunConfig FromJson(const json &j) {
  RunConfig c;
  c.run_dir = Get<std::string>(j, nullptr, "run_dir");
  c.corpus = Get<std::string>(j, nullptr, "corpus");
  c.gold_positives = Get<std::string>(j, nullptr, "gold_positives");
  c.filters = Get<std::string>(j, nullptr, "filters");
  c.verdicts = Get<std::string>(j, nullptr, "verdicts");
  c.conllu = Get<std::string>(j, nullptr, "conllu");
  c.mentions = Get<std::string>(j, nullptr, "mentions");
  c.roles.type_a = Get<std::string>(j, "types", "a");
  c.roles.type_b = Get<std::string>(j, "types", "b");
  c.workflow = ParseWorkflow(Get<std::string>(j, nullptr, "workflow"));
  c.thresholds.precision = Get<double>(j, "thresholds", "precision");
  c.thresholds.recall = Get<double>(j, "thresholds", "recall");
  c.thresholds.min_words = Get<std::size_t>(j, "thresholds", "min_words");
  c.min_pair_count = Get<std::size_t>(j, "thresholds", "min_pair_count");
  c.tune_threshold = Get<bool>(j, "thresholds", "tune");
  c.lexicon.use_lemma = Get<bool>(j, "lexicon", "use_lemma");
  c.lexicon.include_sentence_root =
      Get<bool>(j, "lexicon", "include_sentence_root");
  c.split.train = Get<double>(j, "split", "train");
  c.split.valid = Get<double>(j, "split", "valid");
  c.split.test = Get<double>(j, "split", "test");
  c.cluster_radius = Get<std::size_t>(j, "cluster", "radius");
  c.expand_clusters = Get<bool>(j, "cluster", "expand");
  c.session_size = Get<std::size_t>(j, "session", "size");
  c.examples_per_item = Get<std::size_t>(j, "session", "examples_per_item");
  c.kbc.embedding_dim = Get<std::size_t>(j, "kbc", "dim");
  c.kbc.epochs = Get<std::size_t>(j, "kbc", "epochs");
  c.kbc.learning_rate = Get<double>(j, "kbc", "learning_rate");
  c.kbc.negatives_per_positive = Get<std::size_t>(j, "kbc", "negatives");
  c.kbc.l2_weight = Get<double>(j, "kbc", "l2");
  c.kbc.init_scale = Get<double>(j, "kbc", "init_scale");
  c.relation = Get<std::string>(j, "kbc", "relation");
  c.k_values = Get<std::vector<std::size_t>>(j, "kbc", "k");
  c.kbc_filtered = Get<bool>(j, "kbc", "filtered");
  SyntheticSpec &s = c.synthetic;
  s.n_sentences = Get<std::size_t>(j, "synthetic", "sentences");
  s.n_genes = Get<std::size_t>(j, "synthetic", "genes");
  s.n_diseases = Get<std::size_t>(j, "synthetic", "diseases");
  s.n_blocks = Get<std::size_t>(j, "synthetic", "blocks");
  s.n_gold = Get<std::size_t>(j, "synthetic", "gold");
  s.n_negative_pool = Get<std::size_t>(j, "synthetic", "negative_pool");
  s.n_good_templates = Get<std::size_t>(j, "synthetic", "good_templates");
  s.n_bad_templates = Get<std::size_t>(j, "synthetic", "bad_templates");
  s.good_fraction = Get<double>(j, "synthetic", "good_fraction");
  s.noise = Get<double>(j, "synthetic", "noise");
  s.hedge_rate = Get<double>(j, "synthetic", "hedge_rate");
  s.multi_mention_rate = Get<double>(j, "synthetic", "multi_mention_rate");
  s.seed = Get<std::uint64_t>(j, "synthetic", "seed");
  c.host = Get<std::string>(j, "service", "host");
  c.port = Get<int>(j, "service", "port");
  c.token = Get<std::string>(j, "service", "token");
  if (!j.at("seed").is_null()) c.seed = Get<std::uint64_t>(j, nullptr, "seed");
  return c;
}

void Validate(RunConfig &c) {
  if (c.run_dir.empty()) throw ConfigError("run_dir must not be empty");
  if (c.roles.type_a.empty() || c.roles.type_b.empty() ||
      c.roles.type_a == c.roles.type_b) {
    throw ConfigError("types.a and types.b must be distinct and non-empty");
  }
  auto unit = [](double v, const char *name) {
    if (!(v >= 0 && v <= 1)) {
      throw ConfigError(std::string(name) + " must lie in [0, 1]");
    }
  };
  unit(c.thresholds.precision, "thresholds.precision");
  unit(c.thresholds.recall, "thresholds.recall");
  if (c.min_pair_count < 1) {
    throw ConfigError("thresholds.min_pair_count must be at least 1");
  }
  if (c.session_size < 1 || c.examples_per_item < 1) {
    throw ConfigError("session.size and session.examples_per_item must be >= 1");
  }
  if (c.port < 0 || c.port > 65535) throw ConfigError("service.port out of range");
  try {
    ValidateSplitSpec(c.split);
    ValidateKbcConfig(c.kbc);
  } catch (const UsageError &e) {
    throw ConfigError(e.what());
  }
  if (c.k_values.empty()) throw ConfigError("kbc.k must not be empty");
  for (std::size_t k : c.k_values) {
    if (k < 1) throw ConfigError("kbc.k values must be >= 1");
  }
  if (c.seed) {
    c.split.seed = *c.seed;
    c.kbc.seed = *c.seed;
  }
}

fs::path Artifact(const RunConfig &c, const fs::path &rel) {
  return c.run_dir / rel;
}

void Require(const fs::path &path, const std::string &hint) {
  if (!fs::exists(path)) {
    throw ConfigError("missing input " + path.string() + " (" + hint + ")");
  }
}

void WriteJson(const fs::path &path, const json &j) {
  WriteFile(path, j.dump(2) + "\n");
}

json ReadJson(const fs::path &path) {
  json j = json::parse(ReadFile(path), nullptr, false);
  if (j.is_discarded()) throw ConfigError("invalid JSON in " + path.string());
  return j;
}

std::uint64_t RequireSeed(const RunConfig &c, std::string_view stage) {
  if (!c.seed) {
    throw UsageError("stage " + std::string(stage) + " requires a seed");
  }
  return *c.seed;
}

PairIndex LoadIndex(const RunConfig &c) {
  fs::path dir = Artifact(c, kIndexDir);
  Require(dir, "run the extract stage first");
  return PairIndex::Load(dir);
}

PairSet LoadPairs(const fs::path &path, const TypeRoles &roles,
                  const std::string &hint) {
  Require(path, hint);
  return ParsePairList(ReadFile(path), roles);
}

PairSet LoadSplitPart(const RunConfig &c, const std::string &name) {
  return LoadPairs(Artifact(c, fs::path(kSplitDir) / (name + ".tsv")), c.roles,
                   "run the rank stage first");
}

void CheckSplitSeed(const RunConfig &c, std::uint64_t seed) {
  fs::path meta = Artifact(c, fs::path(kSplitDir) / "split.json");
  Require(meta, "run the rank stage first");
  std::uint64_t used = ReadJson(meta).at("seed").get<std::uint64_t>();
  if (used != seed) {
    throw UsageError("split was made with seed " + std::to_string(used) +
                     ", not " + std::to_string(seed));
  }
}

Clustering ClusterIndex(const PairIndex &index, std::size_t radius) {
  return ClusterSimplifications(index.Keys(), radius, index.PairCounts());
}

std::vector<std::string> ReadSelected(const fs::path &path) {
  std::vector<std::string> keys;
  std::istringstream in(ReadFile(path));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    keys.push_back(line.substr(0, line.find('\t')));
  }
  return keys;
}

std::string Summary(std::string_view stage, json counts,
                    const std::vector<std::string> &artifacts) {
  json out = {{"stage", stage}, {"artifacts", artifacts}};
  out["counts"] = std::move(counts);
  return out.dump();
}

std::string StageSynth(const RunConfig &c) {
  SyntheticCorpus corpus = GenerateSyntheticCorpus(c.synthetic);
  WriteCorpusFile(c.corpus_path(), corpus.sentences);
  WriteFile(c.gold_path(), SerializePairList(corpus.gold_positives));
  json templates = json::array();
  for (const SyntheticTemplate &t : corpus.templates) {
    templates.push_back(
        {{"key", t.key}, {"good", t.good}, {"filtered", t.filtered}});
  }
  WriteJson(Artifact(c, "templates.json"), templates);
  return Summary("synth",
                 {{"sentences", corpus.sentences.size()},
                  {"gold_positives", corpus.gold_positives.size()},
                  {"templates", corpus.templates.size()}},
                 {fs::relative(c.corpus_path(), c.run_dir).string(),
                  fs::relative(c.gold_path(), c.run_dir).string(),
                  "templates.json"});
}

std::string StageConvert(const RunConfig &c) {
  if (c.conllu.empty() || c.mentions.empty()) {
    throw ConfigError("convert-conllu needs conllu and mentions paths");
  }
  std::ifstream conllu(c.conllu);
  std::ifstream mentions(c.mentions);
  if (!conllu) throw ConfigError("cannot open " + c.conllu.string());
  if (!mentions) throw ConfigError("cannot open " + c.mentions.string());
  std::vector<Sentence> out = ConvertConllu(conllu, mentions);
  WriteCorpusFile(c.corpus_path(), out);
  return Summary("convert-conllu", {{"sentences", out.size()}},
                 {fs::relative(c.corpus_path(), c.run_dir).string()});
}

std::string StageIngest(const RunConfig &c) {
  Require(c.corpus_path(), "set corpus or run the synth stage");
  std::vector<Sentence> corpus = ReadCorpusFile(c.corpus_path());
  SkipReport report;
  std::vector<EligibleSentence> eligible =
      EligibleSentences(corpus, c.roles, &report);
  std::vector<Sentence> kept;
  kept.reserve(eligible.size());
  for (auto &e : eligible) kept.push_back(std::move(e.sentence));
  WriteCorpusFile(Artifact(c, "eligible.ndjson"), kept);
  json counts = {{"total", report.total},
                 {"kept", report.kept},
                 {"skipped", report.skipped}};
  WriteJson(Artifact(c, "ingest_report.json"), counts);
  return Summary("ingest", counts, {"eligible.ndjson", "ingest_report.json"});
}

std::string StageExtract(const RunConfig &c) {
  fs::path eligible_path = Artifact(c, "eligible.ndjson");
  Require(eligible_path, "run the ingest stage first");
  std::string eligible_text = ReadFile(eligible_path);
  std::istringstream in(eligible_text);
  std::vector<EligibleSentence> eligible =
      EligibleSentences(ReadCorpus(in), c.roles);
  FilterConfig filter;
  if (!c.filters.empty()) filter = LoadFilterConfig(c.filters);

  PairIndex index;
  index.meta().type_a = c.roles.type_a;
  index.meta().type_b = c.roles.type_b;
  index.meta().corpus_hash = HexDigest(Fnv1a64(eligible_text));
  std::map<std::string, std::size_t> filtered;
  std::size_t degenerate = 0;
  for (const EligibleSentence &e : eligible) {
    PairContext ctx = MakePairContext(e);
    PatternSet patterns;
    try {
      patterns = ExtractPatternSet(e.sentence, ctx);
    } catch (const DegeneratePathError &) {
      ++degenerate;
      continue;
    }
    FilterVerdict verdict = ApplyFilter(e.sentence, patterns, filter);
    if (!verdict.keep) {
      ++filtered[std::string(FilterReasonName(verdict.reason))];
      continue;
    }
    IndexRecord record;
    record.doc_id = e.sentence.doc_id;
    record.sent_id = e.sentence.sent_id;
    record.pair = e.pair;
    record.simplification_key =
        SimplificationKey(e.sentence, patterns, ctx, c.lexicon).key;
    record.display =
        LexicalizeDisplay(e.sentence, patterns, ctx, DisplayParts{}, c.lexicon);
    record.sentence_text = e.sentence.text;
    index.Insert(record);
  }
  index.Save(Artifact(c, kIndexDir));
  json counts = {{"eligible", eligible.size()},
                 {"indexed", index.size()},
                 {"filtered", filtered},
                 {"degenerate", degenerate},
                 {"simplifications", index.Keys().size()},
                 {"pairs", index.AllPairs().size()}};
  WriteJson(Artifact(c, "extract_report.json"), counts);
  return Summary("extract", counts, {"index", "extract_report.json"});
}

std::string StageRank(const RunConfig &c) {
  std::uint64_t seed = RequireSeed(c, "rank");
  PairIndex index = LoadIndex(c);
  Clustering clustering = ClusterIndex(index, c.cluster_radius);
  std::vector<std::string> artifacts;
  json counts = {{"simplifications", index.Keys().size()}};

  std::vector<SimplificationMetrics> rows;
  std::optional<GoldSplit> split;
  bool needs_labels = c.workflow == Workflow::kNoExpertLabels ||
                      c.workflow == Workflow::kExpertWithLabels;
  if (fs::exists(c.gold_path())) {
    PairSet gold = ParsePairList(ReadFile(c.gold_path()), c.roles);
    PairSet negatives = ClosedWorldNegatives(index.AllPairs(), gold);
    SplitSpec spec = c.split;
    spec.seed = seed;
    split = SplitGold(gold, negatives, spec);
    const std::pair<const char *, const PairSet *> parts[] = {
        {"train_pos", &split->train_pos}, {"valid_pos", &split->valid_pos},
        {"test_pos", &split->test_pos},   {"train_neg", &split->train_neg},
        {"valid_neg", &split->valid_neg}, {"test_neg", &split->test_neg}};
    json sizes;
    for (const auto &[name, set] : parts) {
      fs::path rel = fs::path(kSplitDir) / (std::string(name) + ".tsv");
      WriteFile(Artifact(c, rel), SerializePairList(*set));
      sizes[name] = set->size();
    }
    WriteJson(Artifact(c, fs::path(kSplitDir) / "split.json"),
              {{"seed", seed},
               {"fractions", {spec.train, spec.valid, spec.test}},
               {"sizes", sizes}});
    artifacts.push_back(kSplitDir);
    counts["split"] = sizes;
    if (split->train_neg.empty()) {
      throw UsageError("no closed-world negatives in the training split");
    }
    rows = ComputeAllMetrics(index, split->train());
  } else if (needs_labels) {
    throw ConfigError("workflow " + std::string(WorkflowName(c.workflow)) +
                      " needs gold positives at " + c.gold_path().string());
  } else {
    for (const auto &[key, count] : index.PairCounts()) {
      SimplificationMetrics m;
      m.key = key;
      m.pair_count = count;
      rows.push_back(m);
    }
  }
  std::sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
    if (a.pair_count != b.pair_count) return a.pair_count > b.pair_count;
    return a.key < b.key;
  });
  WriteFile(Artifact(c, "ranked.tsv"), SerializeRankedList(rows, clustering));
  artifacts.push_back("ranked.tsv");

  SelectionThresholds thresholds = c.thresholds;
  if (split && !split->valid_pos.empty() && !split->valid_neg.empty()) {
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
    ThresholdChoice choice =
        TunePrecisionThreshold(index, *split, grid, c.thresholds);
    WriteJson(Artifact(c, "threshold_tuning.json"),
              {{"grid", grid},
               {"chosen", choice.precision_threshold},
               {"applied", c.tune_threshold},
               {"valid", PairMetricsToJson(choice.valid_metrics)}});
    artifacts.push_back("threshold_tuning.json");
    if (c.tune_threshold) thresholds.precision = choice.precision_threshold;
  } else if (c.tune_threshold) {
    throw UsageError("thresholds.tune needs a non-empty validation split");
  }

  std::optional<std::vector<std::string>> selected;
  if (c.workflow == Workflow::kBaseline) {
    selected = SelectBaseline(index, c.min_pair_count);
  } else if (c.workflow == Workflow::kNoExpertLabels) {
    selected.emplace();
    counts["precision_threshold"] = thresholds.precision;
    for (const auto &m : SelectAutomatic(index, split->train(), thresholds)) {
      selected->push_back(m.key);
    }
  }
  if (selected) {
    auto counts_by_key = index.PairCounts();
    std::string out = "key\tpair_count\n";
    for (const std::string &k : *selected) {
      out += k + "\t" + std::to_string(counts_by_key[k]) + "\n";
    }
    WriteFile(Artifact(c, "selected.tsv"), out);
    artifacts.push_back("selected.tsv");
    counts["selected"] = selected->size();
  }
  return Summary("rank", counts, artifacts);
}

std::string StageCluster(const RunConfig &c) {
  PairIndex index = LoadIndex(c);
  Clustering clustering = ClusterIndex(index, c.cluster_radius);
  WriteFile(Artifact(c, "clusters.tsv"), SerializeClusters(clustering));
  std::size_t largest = 0;
  std::size_t multi = 0;
  for (const Cluster &cl : clustering.clusters()) {
    largest = std::max(largest, cl.members.size());
    multi += cl.members.size() > 1;
  }
  return Summary("cluster",
                 {{"simplifications", index.Keys().size()},
                  {"clusters", clustering.clusters().size()},
                  {"multi_member_clusters", multi},
                  {"largest", largest}},
                 {"clusters.tsv"});
}

std::string StageQueue(const RunConfig &c) {
  std::uint64_t seed = RequireSeed(c, "queue");
  if (c.workflow != Workflow::kExpertNoLabels &&
      c.workflow != Workflow::kExpertWithLabels) {
    throw UsageError("the queue stage needs an expert workflow");
  }
  PairIndex index = LoadIndex(c);
  QueueOptions options;
  LabelledPairs labels;
  if (c.workflow == Workflow::kExpertWithLabels) {
    CheckSplitSeed(c, seed);
    labels = {LoadSplitPart(c, "train_pos"), LoadSplitPart(c, "train_neg")};
    options.ordering = QueueOrdering::kByMetrics;
    options.labels = &labels;
  }
  options.thresholds = c.thresholds;
  options.session_size = c.session_size;
  options.examples_per_item = c.examples_per_item;
  options.seed = seed;
  options.cluster_radius = c.cluster_radius;
  if (!c.verdicts.empty() && fs::exists(c.verdicts)) {
    for (const auto &[key, v] :
         LatestVerdicts(ParseVerdictFile(ReadFile(c.verdicts)))) {
      options.already_annotated.insert(key);
    }
  }
  std::vector<QueueItem> queue = BuildAnnotationQueue(index, options);
  json items = json::array();
  for (const QueueItem &item : queue) items.push_back(QueueItemToJson(item));
  WriteJson(Artifact(c, "queue.json"),
            {{"workflow", WorkflowName(c.workflow)},
             {"seed", seed},
             {"items", items}});
  return Summary("queue",
                 {{"items", queue.size()},
                  {"excluded_annotated", options.already_annotated.size()}},
                 {"queue.json"});
}

std::string StageGenerate(const RunConfig &c) {
  PairIndex index = LoadIndex(c);
  std::set<std::string> accepted;
  std::string source;
  if (c.workflow == Workflow::kBaseline ||
      c.workflow == Workflow::kNoExpertLabels) {
    fs::path selected = Artifact(c, "selected.tsv");
    Require(selected, "run the rank stage first");
    for (auto &k : ReadSelected(selected)) accepted.insert(std::move(k));
    source = "selected.tsv";
  } else {
    if (c.verdicts.empty()) {
      throw ConfigError("expert workflows need a verdicts file");
    }
    Require(c.verdicts, "export a session from the annotation service");
    accepted = AcceptedKeys(ParseVerdictFile(ReadFile(c.verdicts)));
    source = "verdicts";
  }
  PairSet seed_positives;
  fs::path train_pos = Artifact(c, fs::path(kSplitDir) / "train_pos.tsv");
  if (fs::exists(train_pos)) {
    seed_positives = ParsePairList(ReadFile(train_pos), c.roles);
  } else if (fs::exists(c.gold_path())) {
    seed_positives = ParsePairList(ReadFile(c.gold_path()), c.roles);
  }
  std::optional<Clustering> clustering;
  std::size_t expanded = accepted.size();
  if (c.expand_clusters) {
    clustering = ClusterIndex(index, c.cluster_radius);
    for (const std::string &k : accepted) {
      if (!index.Contains(k)) throw UsageError("unknown simplification " + k);
    }
    expanded = ExpandSelection(accepted, *clustering).size();
  }
  std::vector<GeneratedPair> pairs = GeneratePairs(
      index, accepted, seed_positives, clustering ? &*clustering : nullptr);
  WriteFile(Artifact(c, "generated_pairs.ndjson"),
            SerializeGeneratedPairs(pairs));
  json counts = {{"workflow", WorkflowName(c.workflow)},
                 {"source", source},
                 {"accepted_keys", accepted.size()},
                 {"expanded_keys", expanded},
                 {"pairs", pairs.size()},
                 {"novel_pairs", CountNovel(pairs)}};
  WriteJson(Artifact(c, "generate_summary.json"), counts);
  return Summary("generate", counts,
                 {"generated_pairs.ndjson", "generate_summary.json"});
}

std::vector<GeneratedPair> LoadGenerated(const RunConfig &c) {
  fs::path path = Artifact(c, "generated_pairs.ndjson");
  Require(path, "run the generate stage first");
  return ParseGeneratedPairs(ReadFile(path));
}

std::string SelectionMethod(const RunConfig &c) {
  std::string name(WorkflowName(c.workflow));
  switch (c.workflow) {
    case Workflow::kBaseline:
      return name + " (pair count >= " + std::to_string(c.min_pair_count) + ")";
    case Workflow::kNoExpertLabels:
    case Workflow::kExpertWithLabels: {
      double precision = c.thresholds.precision;
      fs::path tuning = Artifact(c, "threshold_tuning.json");
      if (c.workflow == Workflow::kNoExpertLabels && c.tune_threshold &&
          fs::exists(tuning)) {
        precision = ReadJson(tuning).at("chosen").get<double>();
      }
      return name + " (precision >= " + FormatDouble(precision) +
             ", recall >= " + FormatDouble(c.thresholds.recall) + ")";
    }
    case Workflow::kExpertNoLabels:
      return name;
  }
  return name;
}

std::string StageEvalIntrinsic(const RunConfig &c) {
  std::uint64_t seed = RequireSeed(c, "eval-intrinsic");
  CheckSplitSeed(c, seed);
  PairSet test_pos = LoadSplitPart(c, "test_pos");
  PairSet test_neg = LoadSplitPart(c, "test_neg");
  std::vector<GeneratedPair> generated = LoadGenerated(c);
  PairMetrics m = ComputePairMetrics(PairsOf(generated), test_pos, test_neg);

  json report;
  report["selection_method"] = SelectionMethod(c);
  report["msp"] = nullptr;
  if ((c.workflow == Workflow::kExpertNoLabels ||
       c.workflow == Workflow::kExpertWithLabels) &&
      !c.verdicts.empty() && fs::exists(c.verdicts)) {
    std::vector<Verdict> current;
    for (const auto &[key, v] :
         LatestVerdicts(ParseVerdictFile(ReadFile(c.verdicts)))) {
      current.push_back(v);
    }
    if (!current.empty()) {
      report["msp"] = ManualSimplificationPrecision(current);
      report["verdicts"] = current.size();
    }
  }
  report["new_pairs"] = CountNovel(generated);
  report["generated_pairs"] = generated.size();
  report["recall"] = m.recall;
  report["specificity"] = m.specificity;
  report["precision"] = m.precision;
  report["f_score"] = m.f_score;
  report["counts"] = PairMetricsToJson(m);
  report["test_positives"] = test_pos.size();
  report["test_negatives"] = test_neg.size();
  WriteJson(Artifact(c, "metrics_intrinsic.json"), report);
  return Summary("eval-intrinsic",
                 {{"new_pairs", report["new_pairs"]},
                  {"recall", m.recall},
                  {"precision", m.precision},
                  {"f_score", m.f_score}},
                 {"metrics_intrinsic.json"});
}

std::string StageEvalExtrinsic(const RunConfig &c) {
  std::uint64_t seed = RequireSeed(c, "eval-extrinsic");
  CheckSplitSeed(c, seed);
  PairSet train_pos = LoadSplitPart(c, "train_pos");
  PairSet valid_pos = LoadSplitPart(c, "valid_pos");
  PairSet test_pos = LoadSplitPart(c, "test_pos");
  PairSet generated = PairsOf(LoadGenerated(c));
  PairIndex index = LoadIndex(c);

  PairSet universe = index.AllPairs();
  for (const PairSet *set : {&train_pos, &valid_pos, &test_pos}) {
    universe.insert(set->begin(), set->end());
  }
  KbcVocabulary vocabulary = VocabularyFromPairs(universe, c.relation);
  KbcConfig config = c.kbc;
  config.seed = seed;

  PairSet augmented = train_pos;
  std::size_t added = 0;
  for (const EntityPair &p : generated) added += augmented.insert(p).second;

  json conditions = json::array();
  json summary;
  const std::pair<const char *, const PairSet *> runs[] = {
      {"seed", &train_pos}, {"seed+generated", &augmented}};
  for (const auto &[name, training] : runs) {
    KbcModel model =
        TrainKbc(TriplesFromPairs(*training, c.relation), vocabulary, config);
    RankingMetrics metrics = EvaluateKbc(model, c.relation, train_pos,
                                         test_pos, c.k_values, c.kbc_filtered);
    json row = RankingMetricsToJson(metrics);
    row["training_data"] = name;
    row["training_pairs"] = training->size();
    row["new_pairs"] = training == &train_pos ? 0 : added;
    row["final_loss"] =
        model.loss_trace().empty() ? 0.0 : model.loss_trace().back();
    summary[name] = metrics.map;
    conditions.push_back(std::move(row));
  }
  json report = {{"relation", c.relation},
                 {"filtered_ranking", c.kbc_filtered},
                 {"top_k_granularity", "pooled over all test diseases"},
                 {"test_pairs", test_pos.size()},
                 {"conditions", conditions}};
  WriteJson(Artifact(c, "metrics_extrinsic.json"), report);
  return Summary("eval-extrinsic", {{"map", summary}},
                 {"metrics_extrinsic.json"});
}

std::string StageServe(const RunConfig &c) {
  SessionStore store(LoadServiceContext(c));
  AnnotationServer server(store, c.token);
  int port = server.Start(c.host, c.port);
  std::cout << json({{"stage", "serve"}, {"host", c.host}, {"port", port}})
                   .dump()
            << std::endl;
  server.Wait();
  return Summary("serve", {{"sessions", store.Ids().size()}}, {"sessions"});
}

}  // namespace

std::string_view WorkflowName(Workflow workflow) {
  switch (workflow) {
    case Workflow::kBaseline:
      return "baseline";
    case Workflow::kNoExpertLabels:
      return "no_expert_labels";
    case Workflow::kExpertNoLabels:
      return "expert_no_labels";
    case Workflow::kExpertWithLabels:
      return "expert_with_labels";
  }
  return "unknown";
}

Workflow ParseWorkflow(std::string_view name) {
  for (Workflow w : {Workflow::kBaseline, Workflow::kNoExpertLabels,
                     Workflow::kExpertNoLabels, Workflow::kExpertWithLabels}) {
    if (WorkflowName(w) == name) return w;
  }
  throw ConfigError("unknown workflow " + std::string(name));
}

fs::path RunConfig::corpus_path() const {
  return corpus.empty() ? run_dir / "corpus.ndjson" : corpus;
}

fs::path RunConfig::gold_path() const {
  return gold_positives.empty() ? run_dir / "gold_positives.tsv"
                                : gold_positives;
}

RunConfig ParseRunConfig(std::string_view json_text,
                         const std::vector<std::string> &overrides) {
  json base = DefaultConfigJson();
  json file = json::parse(json_text, nullptr, false);
  if (file.is_discarded()) throw ConfigError("config is not valid JSON");
  Merge(base, file, "");
  for (const std::string &o : overrides) ApplyOverride(base, o);
  RunConfig config = FromJson(base);
  Validate(config);
  return config;
}

RunConfig LoadRunConfig(const std::optional<fs::path> &file,
                        const std::vector<std::string> &overrides) {
  if (!file) return ParseRunConfig("{}", overrides);
  if (!fs::exists(*file)) {
    throw ConfigError("config file not found: " + file->string());
  }
  return ParseRunConfig(ReadFile(*file), overrides);
}

json ConfigToJson(const RunConfig &c) {
  json j;
  j["run_dir"] = c.run_dir.string();
  j["corpus"] = c.corpus.string();
  j["gold_positives"] = c.gold_positives.string();
  j["filters"] = c.filters.string();
  j["verdicts"] = c.verdicts.string();
  j["conllu"] = c.conllu.string();
  j["mentions"] = c.mentions.string();
  j["types"] = {{"a", c.roles.type_a}, {"b", c.roles.type_b}};
  j["workflow"] = WorkflowName(c.workflow);
  j["thresholds"] = {{"precision", c.thresholds.precision},
                     {"recall", c.thresholds.recall},
                     {"min_words", c.thresholds.min_words},
                     {"min_pair_count", c.min_pair_count},
                     {"tune", c.tune_threshold}};
  j["lexicon"] = {{"use_lemma", c.lexicon.use_lemma},
                  {"include_sentence_root", c.lexicon.include_sentence_root}};
  j["split"] = {
      {"train", c.split.train}, {"valid", c.split.valid}, {"test", c.split.test}};
  j["cluster"] = {{"radius", c.cluster_radius}, {"expand", c.expand_clusters}};
  j["session"] = {{"size", c.session_size},
                  {"examples_per_item", c.examples_per_item}};
  j["kbc"] = {{"dim", c.kbc.embedding_dim},
              {"epochs", c.kbc.epochs},
              {"learning_rate", c.kbc.learning_rate},
              {"negatives", c.kbc.negatives_per_positive},
              {"l2", c.kbc.l2_weight},
              {"init_scale", c.kbc.init_scale},
              {"relation", c.relation},
              {"k", c.k_values},
              {"filtered", c.kbc_filtered}};
  const SyntheticSpec &s = c.synthetic;
  j["synthetic"] = {{"sentences", s.n_sentences},
                    {"genes", s.n_genes},
                    {"diseases", s.n_diseases},
                    {"blocks", s.n_blocks},
                    {"gold", s.n_gold},
                    {"negative_pool", s.n_negative_pool},
                    {"good_templates", s.n_good_templates},
                    {"bad_templates", s.n_bad_templates},
                    {"good_fraction", s.good_fraction},
                    {"noise", s.noise},
                    {"hedge_rate", s.hedge_rate},
                    {"multi_mention_rate", s.multi_mention_rate},
                    {"seed", s.seed}};
  j["service"] = {{"host", c.host}, {"port", c.port}, {"token", c.token}};
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  return j;
}

std::string DumpRunConfig(const RunConfig &c) {
  return ConfigToJson(c).dump(2);
}

const std::vector<std::string> &StageNames() {
  static const std::vector<std::string> names = {
      "synth",    "convert-conllu", "ingest",         "extract",
      "rank",     "cluster",        "queue",          "generate",
      "eval-intrinsic", "eval-extrinsic", "serve"};
  return names;
}

bool StageNeedsSeed(std::string_view stage) {
  return stage == "rank" || stage == "queue" || stage == "eval-intrinsic" ||
         stage == "eval-extrinsic";
}

std::string RunStage(std::string_view stage, const RunConfig &config) {
  if (stage == "synth") return StageSynth(config);
  if (stage == "convert-conllu") return StageConvert(config);
  if (stage == "ingest") return StageIngest(config);
  if (stage == "extract") return StageExtract(config);
  if (stage == "rank") return StageRank(config);
  if (stage == "cluster") return StageCluster(config);
  if (stage == "queue") return StageQueue(config);
  if (stage == "generate") return StageGenerate(config);
  if (stage == "eval-intrinsic") return StageEvalIntrinsic(config);
  if (stage == "eval-extrinsic") return StageEvalExtrinsic(config);
  if (stage == "serve") return StageServe(config);
  throw UsageError("unknown stage " + std::string(stage));
}

std::string SerializeVerdictFile(const std::string &session,
                                 std::string_view workflow,
                                 const std::vector<KeyedVerdict> &verdicts) {
  json list = json::array();
  for (const KeyedVerdict &v : verdicts) {
    list.push_back({{"key", v.key},
                    {"value", VerdictName(v.verdict.value)},
                    {"annotator", v.verdict.annotator},
                    {"timestamp", v.verdict.timestamp}});
  }
  return json({{"session", session},
               {"workflow", workflow},
               {"verdicts", list}})
             .dump(2) +
         "\n";
}

std::vector<KeyedVerdict> ParseVerdictFile(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("verdicts")) {
    throw ParseError(0, "not a verdict file");
  }
  std::vector<KeyedVerdict> out;
  try {
    for (const json &v : j.at("verdicts")) {
      KeyedVerdict kv;
      kv.key = v.at("key").get<std::string>();
      kv.verdict.value = ParseVerdict(v.at("value").get<std::string>());
      kv.verdict.annotator = v.value("annotator", "");
      kv.verdict.timestamp = v.value("timestamp", "");
      out.push_back(std::move(kv));
    }
  } catch (const json::exception &e) {
    throw ParseError(0, std::string("bad verdict entry: ") + e.what());
  }
  return out;
}

std::map<std::string, Verdict> LatestVerdicts(
    const std::vector<KeyedVerdict> &log) {
  std::map<std::string, Verdict> out;
  for (const KeyedVerdict &kv : log) out[kv.key] = kv.verdict;
  return out;
}

std::set<std::string> AcceptedKeys(const std::vector<KeyedVerdict> &log) {
  std::set<std::string> out;
  for (const auto &[key, v] : LatestVerdicts(log)) {
    if (v.value == VerdictValue::kYes) out.insert(key);
  }
  return out;
}

std::string SerializeRankedList(const std::vector<SimplificationMetrics> &rows,
                                const Clustering &clustering) {
  std::string out =
      "key\tpair_count\ttp\tfp\tprecision_s\trecall_s\tcluster_id\n";
  for (const SimplificationMetrics &m : rows) {
    out += m.key + "\t" + std::to_string(m.pair_count) + "\t" +
           std::to_string(m.tp) + "\t" + std::to_string(m.fp) + "\t" +
           FormatDouble(m.precision_s) + "\t" + FormatDouble(m.recall_s) +
           "\t";
    out += clustering.Contains(m.key)
               ? std::to_string(clustering.ClusterOf(m.key).id)
               : std::string("-");
    out += "\n";
  }
  return out;
}

std::string SerializeClusters(const Clustering &clustering) {
  std::string out = "cluster_id\trepresentative\tmember\n";
  for (const Cluster &cl : clustering.clusters()) {
    for (const std::string &m : cl.members) {
      out += std::to_string(cl.id) + "\t" + cl.representative + "\t" + m + "\n";
    }
  }
  return out;
}

}  // namespace patmine
