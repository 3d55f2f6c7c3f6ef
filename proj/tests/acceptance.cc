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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "oracles.h"
#include "patmine/clustering.h"
#include "patmine/eval_intrinsic.h"
#include "patmine/kbc.h"
#include "patmine/pairgen.h"
#include "patmine/pattern.h"
#include "patmine/pipeline.h"
#include "patmine/ranking.h"
#include "patmine/service.h"
#include "patmine/util.h"
#include "run_fixture.h"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using patmine::RunConfig;

// Collects failed expectations for one criterion.
class Check {
 public:
  void That(bool ok, const std::string &what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ |= !ok;
  }
  void Note(const std::string &text) { notes_.push_back(text); }
  bool failed() const { return failed_; }
  std::string Detail() const {
    std::string out;
    for (const auto &s : failed_ ? failures_ : notes_) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string Fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

const std::vector<std::string> &FullStages() {
  static const std::vector<std::string> stages = {
      "synth", "ingest", "extract", "rank", "cluster",
      "generate", "eval-intrinsic", "eval-extrinsic"};
  return stages;
}

// The planted configuration at full size: 10^4 sentences.
RunConfig PlantedConfig(const fs::path &dir, std::uint64_t seed) {
  RunConfig c;
  c.run_dir = dir;
  c.filters = oracle::DataDir() / "filters" / "default.json";
  c.workflow = patmine::Workflow::kNoExpertLabels;
  c.thresholds.precision = 0.8;
  c.split = {0.4, 0.1, 0.5, seed};
  c.seed = seed;
  c.kbc.seed = seed;
  return c;
}

json ReadJsonFile(const fs::path &path) {
  return json::parse(patmine::ReadFile(path));
}

std::set<std::string> SelectedKeys(const fs::path &run_dir) {
  std::set<std::string> keys;
  std::istringstream in(patmine::ReadFile(run_dir / "selected.tsv"));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (!line.empty()) keys.insert(patmine::SplitString(line, '\t')[0]);
  }
  return keys;
}

patmine::PairSet SplitPart(const RunConfig &c, const std::string &name) {
  return patmine::ParsePairList(
      patmine::ReadFile(c.run_dir / "split" / (name + ".tsv")), c.roles);
}

bool Close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

void WorkedFormulas(Check &check) {
  // 10% of the positives and 10% of the negatives.
  double p = patmine::NormalizedPrecision(20, 300, 200, 3000);
  check.That(p == 0.5, "precision_s 10%/10% = " + Fmt(p, 17));
  patmine::PairIndex index;
  patmine::LabelledPairs labels;
  for (int i = 0; i < 10; ++i) {
    labels.positives.insert({"p" + std::to_string(i), "d", "GENE", "DISEASE"});
    labels.negatives.insert({"n" + std::to_string(i), "d", "GENE", "DISEASE"});
  }
  for (const char *a : {"p0", "n0"}) {
    patmine::EntityPair pair{a, "d", "GENE", "DISEASE"};
    index.Insert({std::string("doc-") + a, "0", pair, "k", "~k~", "k"});
  }
  auto m = patmine::ComputeSimplificationMetrics(index, "k", labels);
  check.That(m.precision_s == 0.5, "index precision_s = " + Fmt(m.precision_s, 17));

  std::vector<patmine::Verdict> session(200, {patmine::VerdictValue::kNo, "", ""});
  for (int i = 0; i < 63; ++i) session[i].value = patmine::VerdictValue::kYes;
  double msp = patmine::ManualSimplificationPrecision(session);
  check.That(msp == 0.315, "MSP 63/200 = " + Fmt(msp, 17));
  check.Note("precision_s=0.5 MSP=0.315");
}

void LexicalisationGoldens(Check &check) {
  auto corpus =
      patmine::ReadCorpusFile(oracle::FixtureDir() / "worked_examples.ndjson");
  auto eligible = patmine::EligibleSentences(corpus, {"GENE", "DISEASE"});
  check.That(eligible.size() == 2, "two eligible worked sentences");
  if (eligible.size() != 2) return;
  auto key = [](const patmine::EligibleSentence &e) {
    patmine::PairContext ctx = patmine::MakePairContext(e);
    return patmine::SimplificationKey(e.sentence, patmine::ExtractPatternSet(e),
                                      ctx)
        .key;
  };
  std::string k1 = key(eligible[0]);
  check.That(k1 == "knockdown of GENE affect DISEASE progression",
             "sentence 1 key: " + k1);
  patmine::PairContext c2 = patmine::MakePairContext(eligible[1]);
  std::string path = patmine::RenderPath(
      eligible[1].sentence,
      patmine::ShortestDepPath(eligible[1].sentence, c2.head_a, c2.head_b),
      patmine::PathNotation::kUnicode);
  check.That(path ==
                 "NF-kb ←compound– activity –prep→ in "
                 "–pobj→ patients –compound→ cancer",
             "sentence 2 path: " + path);
  check.Note(k1 + " | " + path);
}

void ClusteringCriterion(Check &check) {
  std::vector<std::string> example = {"GENE effects on DISEASE",
                                      "GENE effect on DISEASE",
                                      "GENE effects in DISEASE"};
  patmine::Clustering c = patmine::ClusterSimplifications(example, 2);
  check.That(c.clusters().size() == 1 && c.clusters()[0].members.size() == 3,
             "three-member example forms one cluster");

  std::mt19937 gen(2026);
  std::size_t fixtures = 0;
  for (std::size_t n : {10u, 50u, 200u, 500u}) {
    for (int rep = 0; rep < 3; ++rep) {
      std::set<std::string> seen;
      std::vector<std::string> keys;
      while (keys.size() < n) {
        std::string k = "GENE ";
        std::size_t len = gen() % 9;
        for (std::size_t i = 0; i < len; ++i) k += "abcd "[gen() % 5];
        k += " DISEASE";
        if (seen.insert(k).second) keys.push_back(k);
      }
      for (std::size_t radius : {0u, 1u, 2u, 3u}) {
        patmine::Clustering got = patmine::ClusterSimplifications(keys, radius);
        std::set<std::set<std::string>> partition;
        for (const auto &cl : got.clusters()) {
          partition.insert({cl.members.begin(), cl.members.end()});
        }
        check.That(partition == oracle::Components(keys, radius),
                   "partition differs at n=" + std::to_string(n) +
                       " radius=" + std::to_string(radius));
        ++fixtures;
      }
    }
  }
  check.Note(std::to_string(fixtures) + " random fixtures up to 500 keys");
}

void PlantedPipeline(Check &check) {
  patmine_test::ScratchDir dir("acceptance_planted");
  RunConfig c = PlantedConfig(dir.path(), 1);
  patmine_test::RunStages(c, {"synth", "ingest", "extract", "rank", "generate",
                              "eval-intrinsic"});

  std::set<std::string> good;
  for (const json &t : ReadJsonFile(dir.path() / "templates.json")) {
    if (t["good"].get<bool>() && !t["filtered"].get<bool>()) good.insert(t["key"]);
  }
  std::set<std::string> selected = SelectedKeys(dir.path());
  check.That(!good.empty() && selected == good,
             "selected " + std::to_string(selected.size()) + " keys vs " +
                 std::to_string(good.size()) + " good templates");
  auto sentences =
      ReadJsonFile(dir.path() / "ingest_report.json")["total"].get<std::size_t>();
  check.That(sentences == 10000, "corpus size " + std::to_string(sentences));

  // Split fractions and disjointness, against the gold file and the
  // closed-world negatives recomputed from the index.
  patmine::PairSet gold = patmine::ParsePairList(
      patmine::ReadFile(c.gold_path()), c.roles);
  patmine::PairIndex index = patmine::PairIndex::Load(dir.path() / "index");
  patmine::PairSet negatives;
  for (const auto &p : index.AllPairs()) {
    if (!gold.count(p)) negatives.insert(p);
  }
  const double fractions[] = {0.4, 0.1, 0.5};
  const char *parts[] = {"train", "valid", "test"};
  for (const auto &[label, full] :
       std::vector<std::pair<std::string, const patmine::PairSet *>>{
           {"pos", &gold}, {"neg", &negatives}}) {
    patmine::PairSet joined;
    std::size_t total = 0;
    for (int i = 0; i < 3; ++i) {
      patmine::PairSet part = SplitPart(c, std::string(parts[i]) + "_" + label);
      double expected = fractions[i] * static_cast<double>(full->size());
      check.That(std::abs(static_cast<double>(part.size()) - expected) <= 1.0,
                 std::string(parts[i]) + "_" + label + " size " +
                     std::to_string(part.size()));
      total += part.size();
      joined.insert(part.begin(), part.end());
    }
    check.That(total == full->size() && joined == *full,
               label + " split is not a partition");
  }

  auto generated = patmine::ParseGeneratedPairs(
      patmine::ReadFile(dir.path() / "generated_pairs.ndjson"));
  oracle::CountMetrics expected = oracle::PairMetrics(
      patmine::PairsOf(generated), SplitPart(c, "test_pos"),
      SplitPart(c, "test_neg"));
  json report = ReadJsonFile(dir.path() / "metrics_intrinsic.json");
  const std::pair<const char *, double> metrics[] = {
      {"recall", expected.recall},
      {"specificity", expected.specificity},
      {"precision", expected.precision},
      {"f_score", expected.f_score}};
  for (const auto &[name, value] : metrics) {
    double got = report[name].get<double>();
    check.That(Close(got, value, 1e-12),
               std::string(name) + " " + Fmt(got, 15) + " vs " + Fmt(value, 15));
  }
  check.Note(std::to_string(selected.size()) + " good templates selected, P=" +
             Fmt(expected.precision) + " R=" + Fmt(expected.recall));
}

void ThresholdMonotonicity(Check &check) {
  patmine_test::ScratchDir dir("acceptance_sweep");
  RunConfig c = PlantedConfig(dir.path(), 2);
  patmine_test::RunStages(c, {"synth", "ingest", "extract"});
  double last_precision = -1, last_recall = 2;
  std::string trace;
  for (double threshold : {0.4, 0.5, 0.6, 0.7, 0.8}) {
    c.thresholds.precision = threshold;
    patmine_test::RunStages(c, {"rank", "generate", "eval-intrinsic"});
    json report = ReadJsonFile(dir.path() / "metrics_intrinsic.json");
    double p = report["precision"].get<double>();
    double r = report["recall"].get<double>();
    check.That(p >= last_precision, "precision fell at " + Fmt(threshold, 1));
    check.That(r <= last_recall, "recall rose at " + Fmt(threshold, 1));
    last_precision = p;
    last_recall = r;
    trace += (trace.empty() ? "" : " ") + Fmt(threshold, 1) + ":P=" + Fmt(p, 3) +
             ",R=" + Fmt(r, 3);
  }
  check.Note(trace);
}

patmine::ComplexVector RandomVector(std::mt19937 &gen, std::size_t dim) {
  std::normal_distribution<double> normal(0, 1);
  patmine::ComplexVector v(dim);
  for (auto &x : v) x = {normal(gen), normal(gen)};
  return v;
}

void ComplexNumerics(Check &check) {
  std::mt19937 gen(99);
  double worst_gradient = 0, worst_score = 0, worst_ap = 0;
  const double h = 1e-6;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t dim = 1 + gen() % 8;
    auto s = RandomVector(gen, dim), w = RandomVector(gen, dim),
         o = RandomVector(gen, dim);
    worst_score = std::max(worst_score,
                           std::abs(patmine::ComplexScore(s, w, o) -
                                    oracle::ComplexScore(s, w, o)));
    int label = trial % 2 ? 1 : -1;
    double l2 = trial % 3 ? 0.01 : 0.0;
    patmine::TripleGradient g = patmine::TripleLossGradient(s, w, o, label, l2);
    for (int which = 0; which < 3; ++which) {
      patmine::ComplexVector *v = which == 0 ? &s : which == 1 ? &w : &o;
      const patmine::ComplexVector &grad =
          which == 0 ? g.subject : which == 1 ? g.relation : g.object;
      for (std::size_t d = 0; d < dim; ++d) {
        for (int part = 0; part < 2; ++part) {
          std::complex<double> orig = (*v)[d];
          std::complex<double> step(part == 0 ? h : 0, part == 0 ? 0 : h);
          (*v)[d] = orig + step;
          double plus = patmine::TripleLoss(s, w, o, label, l2);
          (*v)[d] = orig - step;
          double minus = patmine::TripleLoss(s, w, o, label, l2);
          (*v)[d] = orig;
          double numeric = (plus - minus) / (2 * h);
          double analytic = part == 0 ? grad[d].real() : grad[d].imag();
          double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
          worst_gradient =
              std::max(worst_gradient, std::abs(analytic - numeric) / scale);
        }
      }
    }
  }
  check.That(worst_gradient <= 1e-4, "gradient rel error " + Fmt(worst_gradient, 8));
  check.That(worst_score <= 1e-12, "score error " + std::to_string(worst_score));

  for (int i = 0; i < 500; ++i) {
    std::vector<bool> flags(1 + gen() % 60);
    std::size_t n = 0;
    for (std::size_t k = 0; k < flags.size(); ++k) n += (flags[k] = gen() % 4 == 0);
    if (n == 0) continue;
    worst_ap = std::max(worst_ap, std::abs(patmine::AveragePrecision(flags, n) -
                                           oracle::AveragePrecision(flags, n)));
  }

  // mAP on a trained model against a brute-force re-ranking.
  patmine::PairSet all, train, test;
  for (int a = 0; a < 40; ++a) {
    for (int b = 0; b < 8; ++b) {
      patmine::EntityPair p{"g" + std::to_string(a), "d" + std::to_string(b),
                            "GENE", "DISEASE"};
      all.insert(p);
      int roll = static_cast<int>(gen() % 10);
      if (roll < 3) train.insert(p);
      else if (roll < 5) test.insert(p);
    }
  }
  patmine::KbcConfig config;
  config.embedding_dim = 8;
  config.epochs = 30;
  config.seed = 4;
  patmine::KbcModel model = patmine::TrainKbc(
      patmine::TriplesFromPairs(train, "r"),
      patmine::VocabularyFromPairs(all, "r"), config);
  patmine::RankingMetrics m = patmine::EvaluateKbc(model, "r", train, test, {10});
  std::set<std::string> genes, diseases;
  for (const auto &p : all) {
    genes.insert(p.a_id);
    diseases.insert(p.b_id);
  }
  double total = 0;
  std::size_t counted = 0;
  for (const auto &d : diseases) {
    std::vector<std::pair<double, std::string>> ranked;
    std::size_t relevant = 0;
    for (const auto &g : genes) {
      patmine::EntityPair p{g, d, "GENE", "DISEASE"};
      if (train.count(p)) continue;
      ranked.push_back({-oracle::ComplexScore(model.entity(g), model.relation("r"),
                                              model.entity(d)),
                        g});
      relevant += test.count(p);
    }
    if (relevant == 0) continue;
    std::sort(ranked.begin(), ranked.end());
    std::vector<bool> flags;
    for (const auto &[score, g] : ranked) {
      flags.push_back(test.count({g, d, "GENE", "DISEASE"}) > 0);
    }
    double ap = oracle::AveragePrecision(flags, relevant);
    worst_ap = std::max(worst_ap, std::abs(m.average_precision.at(d) - ap));
    total += ap;
    ++counted;
  }
  worst_ap = std::max(worst_ap,
                      std::abs(m.map - total / static_cast<double>(counted)));
  check.That(worst_ap <= 1e-10, "AveP/mAP error " + std::to_string(worst_ap));
  char buf[128];
  std::snprintf(buf, sizeof(buf), "grad %.2e, score %.2e, AveP %.2e",
                worst_gradient, worst_score, worst_ap);
  check.Note(buf);
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

void ExtrinsicAugmentation(Check &check) {
  patmine_test::ScratchDir dir("acceptance_extrinsic");
  RunConfig c = PlantedConfig(dir.path(), 1);
  patmine_test::RunStages(c, {"synth", "ingest", "extract"});
  std::vector<double> seed_only, augmented;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    c.seed = seed;
    c.split.seed = seed;
    c.kbc.seed = seed;
    patmine_test::RunStages(c, {"rank", "generate", "eval-extrinsic"});
    json report = ReadJsonFile(dir.path() / "metrics_extrinsic.json");
    for (const json &cond : report["conditions"]) {
      auto &bucket = cond["training_data"] == "seed" ? seed_only : augmented;
      bucket.push_back(cond["map"].get<double>());
    }
  }
  check.That(seed_only.size() == 5 && augmented.size() == 5,
             "two conditions per seed");
  if (check.failed()) return;
  double a = Median(seed_only), b = Median(augmented);
  check.That(b >= a, "median mAP seed+generated " + Fmt(b) + " < seed " + Fmt(a));
  check.Note("median mAP seed=" + Fmt(a) + " seed+generated=" + Fmt(b));
}

std::map<std::string, std::string> TreeContents(const fs::path &root) {
  std::map<std::string, std::string> out;
  for (const auto &e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out[fs::relative(e.path(), root).string()] = patmine::ReadFile(e.path());
    }
  }
  return out;
}

void Determinism(Check &check) {
  patmine_test::ScratchDir a("acceptance_det_a");
  patmine_test::ScratchDir b("acceptance_det_b");
  for (const fs::path *dir : {&a.path(), &b.path()}) {
    RunConfig c = PlantedConfig(*dir, 7);
    patmine_test::RunStages(c, FullStages());
    c.workflow = patmine::Workflow::kExpertWithLabels;
    patmine::RunStage("queue", c);
  }
  auto ta = TreeContents(a.path());
  auto tb = TreeContents(b.path());
  std::size_t differing = 0;
  for (const auto &[name, content] : ta) {
    auto it = tb.find(name);
    differing += it == tb.end() || it->second != content;
  }
  check.That(ta.size() == tb.size() && differing == 0,
             std::to_string(differing) + " of " + std::to_string(ta.size()) +
                 " artifacts differ");
  check.Note(std::to_string(ta.size()) + " artifacts byte-identical");
}

void ServiceOverHttp(Check &check) {
  patmine_test::ScratchDir dir("acceptance_service");
  RunConfig c = PlantedConfig(dir.path(), 3);
  patmine_test::RunStages(c, {"synth", "ingest", "extract", "rank"});
  std::vector<std::string> script_values;
  std::vector<std::string> keys;
  json before;
  {
    patmine::SessionStore store(patmine::LoadServiceContext(c));
    patmine::AnnotationServer server(store, "token");
    int port = server.Start("127.0.0.1", 0);
    httplib::Client client("127.0.0.1", port);
    client.set_bearer_token_auth("token");

    auto created = client.Post("/sessions",
                               json({{"workflow", "expert_no_labels"},
                                     {"session_size", 20},
                                     {"examples_per_item", 5},
                                     {"seed", 3}})
                                   .dump(),
                               "application/json");
    check.That(created && created->status == 201, "create session");
    if (!created || created->status != 201) return;
    json session = json::parse(created->body);
    std::string id = session["id"];
    std::size_t size = session["size"];

    const char *cycle[] = {"Yes", "No", "Maybe", "Yes", "Yes"};
    std::size_t yes = 0;
    for (std::size_t step = 0;; ++step) {
      auto next = client.Get("/sessions/" + id + "/items?n=1");
      json items = json::parse(next->body)["items"];
      if (items.empty()) break;
      std::string key = items[0]["key"];
      std::string value = cycle[step % 5];
      auto r = client.Post("/sessions/" + id + "/verdicts",
                           json({{"key", key}, {"value", value},
                                 {"annotator", "script"}})
                               .dump(),
                           "application/json");
      check.That(r && r->status == 200, "verdict accepted");
      if (!r || r->status != 200) return;
      yes += value == "Yes";
      double expected = static_cast<double>(yes) / static_cast<double>(step + 1);
      check.That(Close(json::parse(r->body)["msp"].get<double>(), expected, 1e-12),
                 "running MSP at step " + std::to_string(step));
      keys.push_back(key);
      script_values.push_back(value);
    }
    check.That(size > 0 && keys.size() == size,
               "annotated " + std::to_string(keys.size()) + " of " +
                   std::to_string(size));

    httplib::Client anonymous("127.0.0.1", port);
    auto denied = anonymous.Get("/sessions");
    check.That(denied && denied->status == 401, "token enforced");
    auto missing = client.Get("/sessions/s0999/stats");
    check.That(missing && missing->status == 404, "unknown session is 404");

    json exported = json::parse(client.Get("/sessions/" + id + "/export")->body);
    auto log = patmine::ParseVerdictFile(patmine::ReadFile(
        dir.path() / exported["verdicts_file"].get<std::string>()));
    bool same = log.size() == keys.size();
    for (std::size_t i = 0; same && i < log.size(); ++i) {
      same = log[i].key == keys[i] &&
             patmine::VerdictName(log[i].verdict.value) == script_values[i];
    }
    check.That(same, "exported verdict log equals the script");
    before = json::parse(client.Get("/sessions/" + id)->body);
    server.Stop();
  }
  patmine::SessionStore replayed(patmine::LoadServiceContext(c));
  patmine::AnnotationServer server(replayed);
  httplib::Client client("127.0.0.1", server.Start("127.0.0.1", 0));
  auto after = client.Get("/sessions/" + before["id"].get<std::string>());
  check.That(after && json::parse(after->body) == before,
             "state after restart equals state before");
  check.Note(std::to_string(keys.size()) +
             " verdicts over HTTP, export and replay consistent");
}

struct Criterion {
  std::string name;
  double budget_seconds;  // 0 means no time limit
  std::function<void(Check &)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"worked_formulas", 1, WorkedFormulas},
      {"lexicalisation_goldens", 0, LexicalisationGoldens},
      {"clustering", 10, ClusteringCriterion},
      {"planted_pipeline", 30, PlantedPipeline},
      {"threshold_monotonicity", 0, ThresholdMonotonicity},
      {"complex_numerics", 60, ComplexNumerics},
      {"extrinsic_augmentation", 0, ExtrinsicAugmentation},
      {"determinism", 0, Determinism},
      {"service_http_no_ui", 0, ServiceOverHttp},
  };
  int failed = 0;
  for (const Criterion &c : criteria) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(check);
    } catch (const std::exception &e) {
      check.That(false, std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    if (c.budget_seconds > 0) {
      check.That(seconds < c.budget_seconds,
                 "took " + Fmt(seconds, 2) + "s, limit " +
                     Fmt(c.budget_seconds, 0) + "s");
    }
    failed += check.failed();
    std::cout << (check.failed() ? "FAIL " : "PASS ") << c.name << " ("
              << Fmt(seconds, 2) << "s) " << check.Detail() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
