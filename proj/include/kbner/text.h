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

#ifndef KBNER_TEXT_H_
#define KBNER_TEXT_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kbner {

// A token with UTF-8 byte offsets into its sentence.
struct Token {
  std::string text;
  size_t begin = 0;
  size_t end = 0;
  bool is_punct = false;

  bool operator==(const Token &) const = default;
};

struct Sentence {
  std::string doc_key;
  size_t index = 0;
  std::vector<Token> tokens;
};

struct Document {
  std::string article_key;
  std::string title;
  std::optional<std::string> mid;
  std::string raw_text;
};

// Articles keyed by article_key.
using DocumentStore = std::map<std::string, Document, std::less<>>;

using Tokenizer = std::function<std::vector<Token>(std::string_view)>;

// Whitespace tokenizer with Turkish rules:
//  * every punctuation character is a token of its own;
//  * an apostrophe followed by a word character starts a suffix token, so
//    "Ankara'da" -> "Ankara", "'da";
//  * '-' between word characters and '.'/',' between ASCII digits stay
//    inside the word.
std::vector<Token> Tokenize(std::string_view sentence);

// Sentences on '.', '!', '?', U+2026 followed by whitespace and an uppercase
// letter or digit, and on blank lines. A single '.' after a listed
// abbreviation, a one-letter initial or an all-digit ordinal does not split.
// Never returns an empty sentence.
std::vector<std::string> SplitSentences(std::string_view text);

// Turkishness in [0, 1]. Throws ValidationError on empty (all-space) text.
double DetectLanguage(std::string_view text);

constexpr double kDefaultLanguageThreshold = 0.5;

// Turkish-aware lowercase: I -> ı, İ -> i, never I -> i.
std::string FoldTurkishCase(std::string_view text);

// True when every code point of `text` is punctuation (or an apostrophe).
bool IsPunctuationToken(std::string_view text);

// Rebuilds offsets for tokens that were stored space-joined.
std::vector<Token> TokensFromTexts(const std::vector<std::string> &texts);

// Reads a "#wikidump v1" file: article_key TAB title TAB mid TAB text, with
// \n, \t, \r and \\ escapes. Throws FormatError.
DocumentStore ReadDump(std::istream &in);
DocumentStore ReadDumpFile(const std::filesystem::path &path);

std::string EscapeField(std::string_view raw);
// Throws FormatError on a dangling or unknown escape.
std::string UnescapeField(std::string_view escaped);

}  // namespace kbner

#endif  // KBNER_TEXT_H_
