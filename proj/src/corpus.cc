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

#include "patmine/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "patmine/error.h"
#include "patmine/util.h"

namespace patmine {

using json = nlohmann::json;

TokenIndex Sentence::root() const {
  for (const Token &t : tokens) {
    if (t.head == kRoot) return t.idx;
  }
  return kRoot;
}

std::vector<TokenIndex> Sentence::children(TokenIndex idx) const {
  std::vector<TokenIndex> out;
  for (const Token &t : tokens) {
    if (t.head == idx) out.push_back(t.idx);
  }
  return out;
}

void ValidateSentence(const Sentence &s) {
  const int n = s.size();
  if (n == 0) throw ValidationError("empty sentence");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token &t = s.tokens[i];
    if (t.idx != i) throw ValidationError("token index mismatch at " +
                                          std::to_string(i));
    if (t.head == kRoot) {
      ++roots;
    } else if (t.head < 0 || t.head >= n) {
      throw ValidationError("head out of range at token " +
                            std::to_string(i));
    } else if (t.head == i) {
      throw ValidationError("self-loop at token " + std::to_string(i));
    }
  }
  if (roots == 0) throw ValidationError("no root");
  if (roots > 1) throw ValidationError("multiple roots");

  // With exactly one root and in-range heads, the graph is a tree iff every
  // token reaches the root without revisiting a node.
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on stack, 2 reaches root
  for (int i = 0; i < n; ++i) {
    std::vector<int> trail;
    int cur = i;
    while (cur != kRoot && state[cur] == 0) {
      state[cur] = 1;
      trail.push_back(cur);
      cur = s.tokens[cur].head;
    }
    if (cur != kRoot && state[cur] == 1) throw ValidationError("cycle");
    for (int t : trail) state[t] = 2;
  }

  std::vector<std::pair<int, int>> spans;
  for (const Mention &m : s.mentions) {
    if (m.start_tok < 0 || m.start_tok >= m.end_tok || m.end_tok > n) {
      throw ValidationError("mention span out of range");
    }
    if (m.entity_type.empty()) throw ValidationError("empty entity type");
    spans.emplace_back(m.start_tok, m.end_tok);
  }
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first < spans[i - 1].second) {
      throw ValidationError("overlapping mentions");
    }
  }
}

namespace {

template <typename T>
T Field(const json &obj, const char *name, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw ParseError(line, std::string("missing field '") + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception &) {
    throw ParseError(line, std::string("bad type for field '") + name + "'");
  }
}

}  // namespace

Sentence ParseCorpusRecord(std::string_view line, std::size_t line_number) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error &e) {
    throw ParseError(line_number, std::string("malformed record: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError(line_number, "record is not an object");

  Sentence s;
  s.doc_id = Field<std::string>(obj, "doc_id", line_number);
  s.sent_id = Field<std::string>(obj, "sent_id", line_number);
  s.text = Field<std::string>(obj, "text", line_number);
  auto tokens = Field<json>(obj, "tokens", line_number);
  auto mentions = Field<json>(obj, "mentions", line_number);
  if (!tokens.is_array() || !mentions.is_array()) {
    throw ParseError(line_number, "tokens and mentions must be arrays");
  }
  for (const json &t : tokens) {
    if (!t.is_object()) throw ParseError(line_number, "token is not an object");
    Token tok;
    tok.idx = Field<int>(t, "i", line_number);
    tok.form = Field<std::string>(t, "form", line_number);
    tok.lemma = Field<std::string>(t, "lemma", line_number);
    auto head = t.find("head");
    if (head == t.end()) throw ParseError(line_number, "missing field 'head'");
    if (head->is_null()) {
      tok.head = kRoot;
    } else if (head->is_number_integer()) {
      tok.head = head->get<int>();
      // Negative heads are never the root sentinel in the file format.
      if (tok.head < 0) tok.head = -2;
    } else {
      throw ParseError(line_number, "bad type for field 'head'");
    }
    tok.deprel = Field<std::string>(t, "dep", line_number);
    s.tokens.push_back(std::move(tok));
  }
  std::stable_sort(s.tokens.begin(), s.tokens.end(),
                   [](const Token &x, const Token &y) { return x.idx < y.idx; });
  for (const json &m : mentions) {
    if (!m.is_object()) {
      throw ParseError(line_number, "mention is not an object");
    }
    Mention men;
    men.start_tok = Field<int>(m, "start", line_number);
    men.end_tok = Field<int>(m, "end", line_number);
    men.entity_type = Field<std::string>(m, "type", line_number);
    men.entity_id = Field<std::string>(m, "id", line_number);
    s.mentions.push_back(std::move(men));
  }
  try {
    ValidateSentence(s);
  } catch (const ValidationError &e) {
    if (line_number == 0) throw;
    throw ValidationError("line " + std::to_string(line_number) + ": " +
                          e.what());
  }
  return s;
}

std::string SerializeCorpusRecord(const Sentence &s) {
  json tokens = json::array();
  for (const Token &t : s.tokens) {
    tokens.push_back({{"i", t.idx},
                      {"form", t.form},
                      {"lemma", t.lemma},
                      {"head", t.head == kRoot ? json(nullptr) : json(t.head)},
                      {"dep", t.deprel}});
  }
  json mentions = json::array();
  for (const Mention &m : s.mentions) {
    mentions.push_back({{"start", m.start_tok},
                        {"end", m.end_tok},
                        {"type", m.entity_type},
                        {"id", m.entity_id}});
  }
  json obj = {{"doc_id", s.doc_id},
              {"sent_id", s.sent_id},
              {"text", s.text},
              {"tokens", std::move(tokens)},
              {"mentions", std::move(mentions)}};
  return obj.dump();
}

std::vector<Sentence> ReadCorpus(std::istream &in) {
  std::vector<Sentence> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    out.push_back(ParseCorpusRecord(line, line_number));
  }
  return out;
}

std::vector<Sentence> ReadCorpusFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open corpus " + path.string());
  return ReadCorpus(in);
}

void WriteCorpusFile(const std::filesystem::path &path,
                     const std::vector<Sentence> &sentences) {
  std::string out;
  for (const Sentence &s : sentences) {
    out += SerializeCorpusRecord(s);
    out += '\n';
  }
  WriteFile(path, out);
}

std::string EligibilitySkipReason(const Sentence &sentence,
                                  const TypeRoles &roles) {
  int count_a = 0;
  int count_b = 0;
  for (const Mention &m : sentence.mentions) {
    if (m.entity_type == roles.type_a) ++count_a;
    if (m.entity_type == roles.type_b) ++count_b;
  }
  if (count_a > 1) return "multiple_type_a";
  if (count_b > 1) return "multiple_type_b";
  if (count_a == 0) return "missing_type_a";
  if (count_b == 0) return "missing_type_b";
  return "";
}

std::vector<EligibleSentence> EligibleSentences(
    const std::vector<Sentence> &corpus, const TypeRoles &roles,
    SkipReport *report) {
  if (roles.type_a == roles.type_b) {
    throw UsageError("entity type roles must differ");
  }
  SkipReport local;
  std::vector<EligibleSentence> out;
  for (const Sentence &s : corpus) {
    ++local.total;
    std::string reason = EligibilitySkipReason(s, roles);
    if (!reason.empty()) {
      ++local.skipped[reason];
      continue;
    }
    EligibleSentence e;
    for (std::size_t i = 0; i < s.mentions.size(); ++i) {
      if (s.mentions[i].entity_type == roles.type_a) e.mention_a = i;
      if (s.mentions[i].entity_type == roles.type_b) e.mention_b = i;
    }
    const Mention &a = s.mentions[e.mention_a];
    const Mention &b = s.mentions[e.mention_b];
    e.pair = {a.entity_id, b.entity_id, a.entity_type, b.entity_type};
    e.sentence = s;
    out.push_back(std::move(e));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EligibleSentence &x, const EligibleSentence &y) {
                     return std::tie(x.sentence.doc_id, x.sentence.sent_id) <
                            std::tie(y.sentence.doc_id, y.sentence.sent_id);
                   });
  local.kept = out.size();
  if (report != nullptr) *report = std::move(local);
  return out;
}

std::string SerializePairList(const PairSet &pairs) {
  std::string out;
  for (const EntityPair &p : pairs) out += p.a_id + "\t" + p.b_id + "\n";
  return out;
}

PairSet ParsePairList(std::string_view text, const TypeRoles &roles) {
  PairSet out;
  std::size_t line_number = 0;
  for (const std::string &raw : SplitString(text, '\n')) {
    ++line_number;
    std::string line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto cols = SplitString(line, '\t');
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
      throw ParseError(line_number, "pair list lines need two tab-separated ids");
    }
    out.insert({cols[0], cols[1], roles.type_a, roles.type_b});
  }
  return out;
}

TokenIndex MentionHead(const Sentence &sentence, const Mention &mention) {
  for (TokenIndex i = mention.start_tok; i < mention.end_tok; ++i) {
    TokenIndex h = sentence.tokens[i].head;
    if (h == kRoot || h < mention.start_tok || h >= mention.end_tok) return i;
  }
  // Unreachable for a tree: some token of any span attaches outside it.
  return mention.start_tok;
}

namespace {

std::string CommentValue(const std::string &line, const std::string &key) {
  // "# key = value"
  std::string body = Trim(std::string_view(line).substr(1));
  if (body.rfind(key, 0) != 0) return "";
  std::string rest = Trim(std::string_view(body).substr(key.size()));
  if (rest.empty() || rest[0] != '=') return "";
  return Trim(std::string_view(rest).substr(1));
}

}  // namespace

std::vector<Sentence> ConvertConllu(std::istream &conllu,
                                    std::istream &mentions) {
  std::map<std::pair<std::string, std::string>, std::vector<Mention>> side;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(mentions, line)) {
    ++line_number;
    if (Trim(line).empty() || line[0] == '#') continue;
    auto cols = SplitString(line, '\t');
    if (cols.size() != 6) {
      throw ParseError(line_number, "mention side-file needs 6 columns");
    }
    Mention m;
    try {
      m.start_tok = std::stoi(cols[2]);
      m.end_tok = std::stoi(cols[3]);
    } catch (const std::exception &) {
      throw ParseError(line_number, "bad mention offsets");
    }
    m.entity_type = cols[4];
    m.entity_id = cols[5];
    side[{cols[0], cols[1]}].push_back(std::move(m));
  }

  std::vector<Sentence> out;
  std::string doc_id = "doc";
  Sentence cur;
  bool has_tokens = false;
  std::size_t sentence_start = 0;
  line_number = 0;
  int auto_id = 0;
  auto flush = [&]() {
    if (!has_tokens) return;
    cur.doc_id = doc_id;
    if (cur.sent_id.empty()) cur.sent_id = std::to_string(auto_id);
    ++auto_id;
    if (cur.text.empty()) {
      for (const Token &t : cur.tokens) {
        if (!cur.text.empty()) cur.text += ' ';
        cur.text += t.form;
      }
    }
    auto it = side.find({cur.doc_id, cur.sent_id});
    if (it != side.end()) cur.mentions = it->second;
    try {
      ValidateSentence(cur);
    } catch (const ValidationError &e) {
      throw ValidationError("sentence at line " +
                            std::to_string(sentence_start) + ": " + e.what());
    }
    out.push_back(std::move(cur));
    cur = Sentence{};
    has_tokens = false;
  };
  while (std::getline(conllu, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      if (auto v = CommentValue(line, "newdoc id"); !v.empty()) doc_id = v;
      if (auto v = CommentValue(line, "doc_id"); !v.empty()) doc_id = v;
      if (auto v = CommentValue(line, "sent_id"); !v.empty()) cur.sent_id = v;
      if (auto v = CommentValue(line, "text"); !v.empty()) cur.text = v;
      continue;
    }
    auto cols = SplitString(line, '\t');
    if (cols.size() != 10) throw ParseError(line_number, "CoNLL-U needs 10 columns");
    // Multiword ranges and empty nodes are not part of the basic tree.
    if (cols[0].find_first_of("-.") != std::string::npos) continue;
    if (!has_tokens) sentence_start = line_number;
    has_tokens = true;
    Token t;
    try {
      t.idx = std::stoi(cols[0]) - 1;
      int head = std::stoi(cols[6]);
      t.head = head == 0 ? kRoot : head - 1;
    } catch (const std::exception &) {
      throw ParseError(line_number, "bad token id or head");
    }
    t.form = cols[1];
    t.lemma = cols[2] == "_" ? cols[1] : cols[2];
    t.deprel = cols[7];
    cur.tokens.push_back(std::move(t));
  }
  flush();
  return out;
}

}  // namespace patmine
