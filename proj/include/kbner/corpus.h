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

#ifndef KBNER_CORPUS_H_
#define KBNER_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kbner/text.h"

namespace kbner {

// A sentence with one IOB tag per token and a domain label.
//
// `span_rankings` and `agreement` are only filled for ground-truth and
// prediction files: a ranked type list per entity span and an agreement
// count per adjudication unit.
struct AnnotatedSentence {
  Sentence sentence;
  std::vector<std::string> tags;
  std::string domain;
  std::vector<std::vector<std::string>> span_rankings;
  std::vector<size_t> agreement;

  const std::vector<Token> &tokens() const { return sentence.tokens; }
  std::vector<std::string> TokenTexts() const;
  size_t TaggedTokenCount() const;
};

struct AnnotatedCorpus {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<AnnotatedSentence> sentences;

  // Empty when absent.
  std::string Meta(std::string_view key) const;
  // Replaces in place or appends.
  void SetMeta(std::string_view key, std::string value);
};

inline constexpr std::string_view kCorpusHeader = "#twnertc v1";

// Corpus file: "#twnertc v1", optional "#meta key=value" lines, then one line
// per sentence: domain TAB tokens TAB tags [TAB rankings [TAB agreement]].
// Throws FormatError with the offending line number.
AnnotatedCorpus ReadCorpus(std::istream &in);
AnnotatedCorpus ReadCorpusFile(const std::filesystem::path &path);

void WriteCorpus(const AnnotatedCorpus &corpus, std::ostream &out);
void WriteCorpusFile(const AnnotatedCorpus &corpus,
                     const std::filesystem::path &path);

// CoNLL-style: "# domain: X", one "token TAB tag" line per token, blank line
// after every sentence.
void WriteConll(const AnnotatedCorpus &corpus, std::ostream &out);

}  // namespace kbner

#endif  // KBNER_CORPUS_H_
