// Copyright 2026 The kbner Authors
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

#include "kbner/corpus.h"

#include <fstream>

#include "kbner/errors.h"
#include "kbner/iob.h"

namespace kbner {
namespace {

std::vector<std::string> SplitOn(std::string_view text, char sep) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    size_t next = text.find(sep, pos);
    out.emplace_back(text.substr(pos, next == std::string_view::npos
                                           ? std::string_view::npos
                                           : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

template <typename T, typename F>
void WriteJoined(std::ostream &out, const std::vector<T> &items, char sep,
                 F &&write) {
  for (size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out << sep;
    write(items[i]);
  }
}

AnnotatedSentence ParseSentenceLine(std::string_view line, size_t index) {
  std::vector<std::string> cols = SplitOn(line, '\t');
  if (cols.size() < 3 || cols.size() > 5) {
    throw FormatError("expected 3 to 5 tab-separated columns, got " +
                      std::to_string(cols.size()));
  }
  AnnotatedSentence s;
  s.domain = cols[0];
  if (cols[1].empty()) throw FormatError("sentence without tokens");
  std::vector<std::string> texts = SplitOn(cols[1], ' ');
  s.tags = SplitOn(cols[2], ' ');
  if (texts.size() != s.tags.size()) {
    throw FormatError(std::to_string(texts.size()) + " tokens but " +
                      std::to_string(s.tags.size()) + " tags");
  }
  for (const std::string &t : texts) {
    if (t.empty()) throw FormatError("empty token");
  }
  for (const std::string &tag : s.tags) {
    if (!IsWellFormedTag(tag)) throw FormatError("malformed tag '" + tag + "'");
  }
  if (!IsValidIob(s.tags)) throw FormatError("I- tag without preceding B-/I-");
  s.sentence.index = index;
  s.sentence.tokens = TokensFromTexts(texts);
  if (cols.size() >= 4 && cols[3] != "-") {
    for (const std::string &group : SplitOn(cols[3], ' ')) {
      if (group == "-") {
        s.span_rankings.emplace_back();
      } else {
        s.span_rankings.push_back(SplitOn(group, '|'));
      }
    }
  }
  if (cols.size() == 5 && cols[4] != "-") {
    for (const std::string &n : SplitOn(cols[4], ' ')) {
      size_t used = 0;
      unsigned long value = 0;
      try {
        value = std::stoul(n, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used == 0 || used != n.size() || n[0] == '-' || n[0] == '+') {
        throw FormatError("bad agreement count '" + n + "'");
      }
      s.agreement.push_back(value);
    }
  }
  return s;
}

}  // namespace

std::vector<std::string> AnnotatedSentence::TokenTexts() const {
  std::vector<std::string> out;
  out.reserve(sentence.tokens.size());
  for (const Token &t : sentence.tokens) out.push_back(t.text);
  return out;
}

size_t AnnotatedSentence::TaggedTokenCount() const {
  size_t n = 0;
  for (const std::string &tag : tags) n += tag != kOutsideTag;
  return n;
}

std::string AnnotatedCorpus::Meta(std::string_view key) const {
  for (const auto &[k, v] : meta) {
    if (k == key) return v;
  }
  return {};
}

void AnnotatedCorpus::SetMeta(std::string_view key, std::string value) {
  for (auto &[k, v] : meta) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  meta.emplace_back(std::string(key), std::move(value));
}

AnnotatedCorpus ReadCorpus(std::istream &in) {
  AnnotatedCorpus corpus;
  std::string line;
  size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line != kCorpusHeader) {
        throw FormatError("expected '#twnertc v1' header", line_no);
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    if (line.rfind("#meta ", 0) == 0) {
      std::string_view kv = std::string_view(line).substr(6);
      size_t eq = kv.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw FormatError("malformed meta line", line_no);
      }
      corpus.SetMeta(kv.substr(0, eq), std::string(kv.substr(eq + 1)));
      continue;
    }
    if (line[0] == '#') throw FormatError("unexpected directive", line_no);
    try {
      corpus.sentences.push_back(
          ParseSentenceLine(line, corpus.sentences.size()));
    } catch (const FormatError &e) {
      throw FormatError(e.what(), line_no);
    }
  }
  // A zero-byte file is an empty corpus.
  return corpus;
}

AnnotatedCorpus ReadCorpusFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open corpus " + path.string());
  return ReadCorpus(in);
}

void WriteCorpus(const AnnotatedCorpus &corpus, std::ostream &out) {
  out << kCorpusHeader << '\n';
  for (const auto &[k, v] : corpus.meta) out << "#meta " << k << '=' << v << '\n';
  for (const AnnotatedSentence &s : corpus.sentences) {
    out << s.domain << '\t';
    WriteJoined(out, s.sentence.tokens, ' ', [&](const Token &t) { out << t.text; });
    out << '\t';
    WriteJoined(out, s.tags, ' ', [&](const std::string &t) { out << t; });
    if (!s.span_rankings.empty() || !s.agreement.empty()) {
      out << '\t';
      if (s.span_rankings.empty()) {
        out << '-';
      } else {
        WriteJoined(out, s.span_rankings, ' ',
                    [&](const std::vector<std::string> &r) {
                      if (r.empty()) {
                        out << '-';
                      } else {
                        WriteJoined(out, r, '|',
                                    [&](const std::string &t) { out << t; });
                      }
                    });
      }
    }
    if (!s.agreement.empty()) {
      out << '\t';
      WriteJoined(out, s.agreement, ' ', [&](size_t n) { out << n; });
    }
    out << '\n';
  }
}

void WriteCorpusFile(const AnnotatedCorpus &corpus,
                     const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  WriteCorpus(corpus, out);
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

void WriteConll(const AnnotatedCorpus &corpus, std::ostream &out) {
  for (const AnnotatedSentence &s : corpus.sentences) {
    out << "# domain: " << s.domain << '\n';
    for (size_t i = 0; i < s.tags.size(); ++i) {
      out << s.sentence.tokens[i].text << '\t' << s.tags[i] << '\n';
    }
    out << '\n';
  }
}

}  // namespace kbner
