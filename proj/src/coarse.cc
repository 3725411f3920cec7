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

#include "kbner/coarse.h"

#include <fstream>
#include <sstream>

#include "kbner/errors.h"
#include "kbner/iob.h"
#include "kbner/type_path.h"

namespace kbner {

std::string_view ToString(CoarseLabel label) {
  switch (label) {
    case CoarseLabel::kPerson: return "PERSON";
    case CoarseLabel::kOrganization: return "ORGANIZATION";
    case CoarseLabel::kLocation: return "LOCATION";
    case CoarseLabel::kMisc: return "MISC";
    case CoarseLabel::kOutside: return "O";
  }
  return "O";
}

std::optional<CoarseLabel> ParseCoarseLabel(std::string_view text) {
  if (text == "PERSON") return CoarseLabel::kPerson;
  if (text == "ORGANIZATION") return CoarseLabel::kOrganization;
  if (text == "LOCATION") return CoarseLabel::kLocation;
  if (text == "MISC") return CoarseLabel::kMisc;
  if (text == "O") return CoarseLabel::kOutside;
  return std::nullopt;
}

bool IsCoarseLabelName(std::string_view text) {
  return ParseCoarseLabel(text).has_value();
}

void TypeMappingTable::Add(const std::string &type_or_wildcard,
                           CoarseLabel label) {
  const std::string suffix = "/*";
  bool wildcard = type_or_wildcard.size() > suffix.size() &&
                  type_or_wildcard.compare(type_or_wildcard.size() - 2, 2,
                                           suffix) == 0;
  if (wildcard) {
    std::string domain = type_or_wildcard.substr(1, type_or_wildcard.size() - 3);
    if (type_or_wildcard[0] != '/' || !TypePath::IsValidSegment(domain)) {
      throw ValidationError("invalid wildcard " + type_or_wildcard);
    }
    if (!wildcard_.emplace(domain, label).second) {
      throw ValidationError("duplicate mapping for " + type_or_wildcard);
    }
    return;
  }
  auto path = TypePath::TryParse(type_or_wildcard);
  if (!path) throw ValidationError("invalid type " + type_or_wildcard);
  if (!exact_.emplace(path->ToString(), label).second) {
    throw ValidationError("duplicate mapping for " + type_or_wildcard);
  }
}

void TypeMappingTable::Drop(const std::string &domain) {
  if (!TypePath::IsValidSegment(domain)) {
    throw ValidationError("invalid domain " + domain);
  }
  dropped_.insert(domain);
}

std::optional<CoarseLabel> TypeMappingTable::Lookup(
    std::string_view fine_type) const {
  auto it = exact_.find(fine_type);
  if (it != exact_.end()) return it->second;
  auto wild = wildcard_.find(DomainOf(fine_type));
  if (wild != wildcard_.end()) return wild->second;
  return std::nullopt;
}

bool TypeMappingTable::IsDropped(std::string_view domain) const {
  return dropped_.count(domain) > 0;
}

TypeMappingTable LoadMapping(std::istream &in) {
  TypeMappingTable table;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string key, value, extra;
    if (!(fields >> key) || key[0] == '#') continue;
    if (!(fields >> value) || (fields >> extra)) {
      throw FormatError("expected two fields", line_no);
    }
    try {
      if (key == "!drop") {
        table.Drop(value);
        continue;
      }
      auto label = ParseCoarseLabel(value);
      if (!label) throw FormatError("unknown label '" + value + "'", line_no);
      table.Add(key, *label);
    } catch (const ValidationError &e) {
      throw FormatError(e.what(), line_no);
    }
  }
  return table;
}

TypeMappingTable LoadMappingFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open mapping " + path.string());
  return LoadMapping(in);
}

CoarseResult ToCoarse(const AnnotatedCorpus &corpus,
                      const TypeMappingTable &table) {
  CoarseResult result;
  result.corpus.meta = corpus.meta;
  for (CoarseLabel label : kEntityLabels) result.label_tokens[label] = 0;
  for (const AnnotatedSentence &s : corpus.sentences) {
    if (table.IsDropped(s.domain)) {
      ++result.dropped_sentences;
      continue;
    }
    AnnotatedSentence mapped = s;
    mapped.tags.assign(s.tags.size(), std::string(kOutsideTag));
    mapped.span_rankings.clear();
    for (const Span &span : ExtractSpans(s.tags)) {
      CoarseLabel label = CoarseLabel::kOutside;
      if (!table.IsDropped(DomainOf(span.label))) {
        auto found = table.Lookup(span.label);
        if (!found) {
          throw ValidationError("no coarse mapping for type " + span.label);
        }
        label = *found;
      }
      if (label == CoarseLabel::kOutside) continue;
      TagSpan(mapped.tags, span.begin, span.end, ToString(label));
      result.label_tokens[label] += span.end - span.begin;
    }
    result.corpus.sentences.push_back(std::move(mapped));
  }
  result.corpus.SetMeta("labels", "coarse");
  return result;
}

}  // namespace kbner
