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

#ifndef KBNER_COARSE_H_
#define KBNER_COARSE_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "kbner/corpus.h"

namespace kbner {

enum class CoarseLabel { kPerson, kOrganization, kLocation, kMisc, kOutside };

inline constexpr std::array<CoarseLabel, 4> kEntityLabels = {
    CoarseLabel::kPerson, CoarseLabel::kLocation, CoarseLabel::kOrganization,
    CoarseLabel::kMisc};

std::string_view ToString(CoarseLabel label);
// Accepts PERSON, ORGANIZATION, LOCATION, MISC and O.
std::optional<CoarseLabel> ParseCoarseLabel(std::string_view text);
bool IsCoarseLabelName(std::string_view text);

// Fine type -> coarse label, plus domains that are eliminated outright.
class TypeMappingTable {
 public:
  // Throws ValidationError on a duplicate key.
  void Add(const std::string &type_or_wildcard, CoarseLabel label);
  void Drop(const std::string &domain);

  // Exact entry first, then the "/domain/*" wildcard.
  std::optional<CoarseLabel> Lookup(std::string_view fine_type) const;
  bool IsDropped(std::string_view domain) const;

  size_t size() const { return exact_.size() + wildcard_.size(); }
  bool empty() const { return size() == 0 && dropped_.empty(); }
  const std::set<std::string, std::less<>> &dropped_domains() const {
    return dropped_;
  }

 private:
  std::map<std::string, CoarseLabel, std::less<>> exact_;
  std::map<std::string, CoarseLabel, std::less<>> wildcard_;  // by domain
  std::set<std::string, std::less<>> dropped_;
};

// Mapping file: "type LABEL" per line ("/domain/*" allowed as type),
// "!drop domain", '#' comments. Throws FormatError on an unknown label,
// duplicate type or malformed line.
TypeMappingTable LoadMapping(std::istream &in);
TypeMappingTable LoadMappingFile(const std::filesystem::path &path);

struct CoarseResult {
  AnnotatedCorpus corpus;
  std::map<CoarseLabel, size_t> label_tokens;  // tokens per entity label
  size_t dropped_sentences = 0;
};

// Drops sentences of eliminated domains, maps every span to its coarse
// label (spans of eliminated domains or mapped to O become O) and keeps the
// IOB prefixes. Throws ValidationError naming an uncovered fine type.
CoarseResult ToCoarse(const AnnotatedCorpus &corpus,
                      const TypeMappingTable &table);

}  // namespace kbner

#endif  // KBNER_COARSE_H_
