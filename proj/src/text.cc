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

#include "kbner/text.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_set>

#include "kbner/errors.h"
#include "kbner/utf8.h"

namespace kbner {
namespace {

using utf8::CodePoint;

bool IsSpace(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
    case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool IsApostrophe(char32_t c) { return c == U'\'' || c == 0x2019; }

bool IsPunct(char32_t c) {
  if (c < 0x80) {
    return c > 0x20 && c < 0x7F && !IsApostrophe(c) &&
           !((c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') ||
             (c >= 'a' && c <= 'z'));
  }
  switch (c) {
    case 0x00AB: case 0x00BB: case 0x201C: case 0x201D: case 0x201E:
    case 0x2018: case 0x201A: case 0x2039: case 0x203A: case 0x2026:
    case 0x2013: case 0x2014: case 0x2010: case 0x2011: case 0x2012:
    case 0x2015: case 0x00B7: case 0x2022: case 0x00A1: case 0x00BF:
    case 0x00A7: case 0x00B6: case 0x00B0: case 0x2032: case 0x2033:
    case 0x2030:
      return true;
    default:
      return false;
  }
}

bool IsWordChar(char32_t c) {
  return !IsSpace(c) && !IsPunct(c) && !IsApostrophe(c);
}

bool IsAsciiDigit(char32_t c) { return c >= '0' && c <= '9'; }

bool IsUpper(char32_t c) {
  if (c >= 'A' && c <= 'Z') return true;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return true;
  return c == 0x011E || c == 0x0130 || c == 0x015E;  // Ğ İ Ş
}

bool IsTerminator(char32_t c) {
  return c == '.' || c == '!' || c == '?' || c == 0x2026;
}

char32_t FoldChar(char32_t c) {
  if (c == 'I') return 0x0131;
  if (c == 0x0130) return 'i';
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c == 0x011E) return 0x011F;
  if (c == 0x015E) return 0x015F;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  return c;
}

const std::set<std::string, std::less<>> &Abbreviations() {
  static const std::set<std::string, std::less<>> kSet = {
      "Dr.",   "Prof.", "Doç.", "Yrd.",  "Av.",   "Op.",   "Uzm.",  "Müh.",
      "Öğr.",  "Gör.",  "Sn.",  "St.",   "Mr.",   "Mrs.",  "Ms.",   "Jr.",
      "Sr.",   "vb.",   "vs.",  "vd.",   "yy.",   "bkz.",  "örn.",  "Ltd.",
      "Şti.",  "Inc.",  "Co.",  "No.",   "Nr.",   "Tel.",  "Cad.",  "Sok.",
      "Mah.",  "Apt.",  "Alb.", "Gen.",  "Org.",  "Kor.",  "Tuğg.", "Hz.",
      "M.Ö.",  "M.S.",  "age.", "a.g.e.", "s.",   "ss.",   "Bşk.",  "Müd."};
  return kSet;
}

const std::unordered_set<std::string> &TurkishStopwords() {
  static const std::unordered_set<std::string> kSet = {
      "ve",     "bir",   "bu",     "da",     "de",    "ne",    "için",
      "çok",    "ile",   "gibi",   "daha",   "en",    "şu",    "o",
      "ama",    "veya",  "ki",     "mi",     "olan",  "olarak", "sonra",
      "kadar",  "her",   "bazı",   "göre",   "ancak", "hem",   "ise",
      "değil",  "var",   "yok",    "tarafından", "ayrıca", "ya", "hiç",
      "biri",   "şey",   "diye",   "çünkü",  "yani",  "üzere", "arasında"};
  return kSet;
}

const std::unordered_set<std::string> &EnglishStopwords() {
  static const std::unordered_set<std::string> kSet = {
      "the",  "a",     "an",    "and",   "or",    "of",    "to",   "in",
      "is",   "was",   "are",   "were",  "be",    "been",  "it",   "that",
      "this", "with",  "for",   "on",    "as",    "by",    "at",   "from",
      "his",  "her",   "he",    "she",   "they",  "not",   "but",  "have",
      "has",  "had",   "which", "who",   "over",  "into",  "about", "its",
      "their", "there", "what", "when",  "where"};
  return kSet;
}

bool HasTurkishLetter(std::string_view word) {
  for (const CodePoint &cp : utf8::Decode(word)) {
    switch (cp.value) {
      case 0x00E7: case 0x011F: case 0x0131: case 0x0130: case 0x00F6:
      case 0x015F: case 0x00FC: case 0x00C7: case 0x011E: case 0x00D6:
      case 0x015E: case 0x00DC:
        return true;
      default:
        break;
    }
  }
  return false;
}

// Trims whitespace code points from both ends of cps[begin, end).
std::string_view TrimRange(std::string_view text,
                           const std::vector<CodePoint> &cps, size_t begin,
                           size_t end) {
  while (begin < end && IsSpace(cps[begin].value)) ++begin;
  while (end > begin && IsSpace(cps[end - 1].value)) --end;
  if (begin == end) return {};
  size_t b = cps[begin].offset;
  size_t e = cps[end - 1].offset + cps[end - 1].length;
  return text.substr(b, e - b);
}

bool SplitSuppressed(std::string_view text, const std::vector<CodePoint> &cps,
                     size_t start, size_t dot) {
  size_t k = dot;
  while (k > start && !IsSpace(cps[k - 1].value)) --k;
  while (k < dot && (IsPunct(cps[k].value) || IsApostrophe(cps[k].value))) {
    ++k;
  }
  if (k == dot) return false;
  std::string word(text.substr(cps[k].offset, cps[dot].offset - cps[k].offset));
  if (Abbreviations().count(word + ".")) return true;
  if (dot - k == 1 && IsWordChar(cps[k].value) && !IsAsciiDigit(cps[k].value)) {
    return true;
  }
  for (size_t i = k; i < dot; ++i) {
    if (!IsAsciiDigit(cps[i].value)) return false;
  }
  return true;
}

void SplitParagraph(std::string_view p, std::vector<std::string> &out) {
  std::vector<CodePoint> cps = utf8::Decode(p);
  const size_t n = cps.size();
  size_t start = 0;
  size_t i = 0;
  while (i < n) {
    if (!IsTerminator(cps[i].value)) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < n && IsTerminator(cps[j].value)) ++j;
    size_t k = j;
    while (k < n && IsSpace(cps[k].value)) ++k;
    bool single_dot = j == i + 1 && cps[i].value == '.';
    if (k > j && k < n &&
        (IsUpper(cps[k].value) || IsAsciiDigit(cps[k].value)) &&
        !(single_dot && SplitSuppressed(p, cps, start, i))) {
      std::string_view s = TrimRange(p, cps, start, j);
      if (!s.empty()) out.emplace_back(s);
      start = k;
      i = k;
      continue;
    }
    i = j;
  }
  std::string_view s = TrimRange(p, cps, start, n);
  if (!s.empty()) out.emplace_back(s);
}

bool IsBlankLine(std::string_view line) {
  for (const CodePoint &cp : utf8::Decode(line)) {
    if (!IsSpace(cp.value)) return false;
  }
  return true;
}

}  // namespace

std::vector<Token> Tokenize(std::string_view sentence) {
  std::vector<Token> tokens;
  std::vector<CodePoint> cps = utf8::Decode(sentence);
  const size_t n = cps.size();
  bool open = false;
  size_t cur_begin = 0;
  size_t cur_end = 0;
  char32_t cur_last = 0;

  auto flush = [&]() {
    if (!open) return;
    tokens.push_back({std::string(sentence.substr(cur_begin, cur_end - cur_begin)),
                      cur_begin, cur_end, false});
    open = false;
  };
  auto single = [&](const CodePoint &cp) {
    tokens.push_back({std::string(sentence.substr(cp.offset, cp.length)),
                      cp.offset, cp.offset + cp.length, true});
  };
  auto extend = [&](const CodePoint &cp) {
    if (!open) {
      open = true;
      cur_begin = cp.offset;
    }
    cur_end = cp.offset + cp.length;
    cur_last = cp.value;
  };

  for (size_t i = 0; i < n; ++i) {
    const CodePoint &cp = cps[i];
    const char32_t c = cp.value;
    const bool has_next = i + 1 < n;
    const char32_t next = has_next ? cps[i + 1].value : 0;
    if (IsSpace(c)) {
      flush();
    } else if (IsApostrophe(c)) {
      flush();
      if (has_next && IsWordChar(next)) {
        extend(cp);
      } else {
        single(cp);
      }
    } else if (IsPunct(c)) {
      if (c == '-' && open && has_next && IsWordChar(next)) {
        extend(cp);
      } else if ((c == '.' || c == ',') && open && IsAsciiDigit(cur_last) &&
                 has_next && IsAsciiDigit(next)) {
        extend(cp);
      } else {
        flush();
        single(cp);
      }
    } else {
      extend(cp);
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> SplitSentences(std::string_view text) {
  std::vector<std::string> out;
  size_t para_begin = std::string_view::npos;
  size_t para_end = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    size_t line_end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(pos, line_end - pos);
    if (IsBlankLine(line)) {
      if (para_begin != std::string_view::npos) {
        SplitParagraph(text.substr(para_begin, para_end - para_begin), out);
        para_begin = std::string_view::npos;
      }
    } else {
      if (para_begin == std::string_view::npos) para_begin = pos;
      para_end = line_end;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (para_begin != std::string_view::npos) {
    SplitParagraph(text.substr(para_begin, para_end - para_begin), out);
  }
  return out;
}

double DetectLanguage(std::string_view text) {
  if (IsBlankLine(text)) {
    throw ValidationError("language detection on empty text");
  }
  size_t words = 0;
  size_t tr = 0;
  size_t en = 0;
  size_t special = 0;
  for (const Token &token : Tokenize(text)) {
    if (token.is_punct) continue;
    ++words;
    std::string folded = FoldTurkishCase(token.text);
    if (TurkishStopwords().count(folded)) ++tr;
    if (EnglishStopwords().count(folded)) ++en;
    if (HasTurkishLetter(token.text)) ++special;
  }
  if (words == 0) return 0.0;
  double chars = std::min(1.0, 4.0 * static_cast<double>(special) /
                                   static_cast<double>(words));
  if (tr + en == 0) return chars;
  return 0.75 * (static_cast<double>(tr) / static_cast<double>(tr + en)) +
         0.25 * chars;
}

std::string FoldTurkishCase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const CodePoint &cp : utf8::Decode(text)) {
    char32_t folded = FoldChar(cp.value);
    if (folded == cp.value && cp.value != 0xFFFD) {
      out.append(text.substr(cp.offset, cp.length));
    } else {
      utf8::Append(out, folded);
    }
  }
  return out;
}

bool IsPunctuationToken(std::string_view text) {
  for (const CodePoint &cp : utf8::Decode(text)) {
    if (!IsPunct(cp.value) && !IsApostrophe(cp.value)) return false;
  }
  return true;
}

std::vector<Token> TokensFromTexts(const std::vector<std::string> &texts) {
  std::vector<Token> tokens;
  tokens.reserve(texts.size());
  size_t offset = 0;
  for (const std::string &text : texts) {
    tokens.push_back({text, offset, offset + text.size(),
                      IsPunctuationToken(text)});
    offset += text.size() + 1;
  }
  return tokens;
}

std::string EscapeField(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string UnescapeField(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (size_t i = 0; i < escaped.size(); ++i) {
    char c = escaped[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (i + 1 >= escaped.size()) throw FormatError("dangling escape");
    switch (escaped[++i]) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case '\\': out.push_back('\\'); break;
      default:
        throw FormatError(std::string("unknown escape \\") + escaped[i]);
    }
  }
  return out;
}

DocumentStore ReadDump(std::istream &in) {
  DocumentStore docs;
  std::string line;
  size_t line_no = 0;
  if (!std::getline(in, line)) return docs;
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "#wikidump v1") {
    throw FormatError("expected '#wikidump v1' header", line_no);
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      size_t tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 4) {
      throw FormatError("expected 4 tab-separated fields, got " +
                            std::to_string(fields.size()),
                        line_no);
    }
    try {
      Document doc;
      doc.article_key = UnescapeField(fields[0]);
      doc.title = UnescapeField(fields[1]);
      if (!fields[2].empty()) doc.mid = UnescapeField(fields[2]);
      doc.raw_text = UnescapeField(fields[3]);
      if (doc.article_key.empty()) throw FormatError("empty article_key");
      std::string key = doc.article_key;
      if (!docs.emplace(key, std::move(doc)).second) {
        throw FormatError("duplicate article_key '" + key + "'");
      }
    } catch (const FormatError &e) {
      if (e.line() != 0) throw;
      throw FormatError(e.what(), line_no);
    }
  }
  return docs;
}

DocumentStore ReadDumpFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open dump " + path.string());
  return ReadDump(in);
}

}  // namespace kbner
