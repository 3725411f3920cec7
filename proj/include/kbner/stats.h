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

#ifndef KBNER_STATS_H_
#define KBNER_STATS_H_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "json.hpp"
#include "kbner/corpus.h"

namespace kbner {

struct DomainCount {
  std::string domain;  // "-" when there is no domain at all
  size_t count = 0;
};

struct StatsReport {
  size_t sentences = 0;
  size_t tokens_with_punct = 0;
  size_t tokens_without_punct = 0;
  size_t tagged_tokens = 0;
  std::map<std::string, size_t> domain_sentences;
  std::set<std::string> entity_types;  // labels without IOB prefix
  std::map<std::string, std::set<std::string>> domain_types;
  bool coarse = false;
  std::map<std::string, size_t> label_tokens;

  size_t unique_types() const { return entity_types.size(); }

  // Ties resolve to the lexicographically smallest domain.
  DomainCount LargestBySentences() const;
  DomainCount SmallestBySentences() const;
  DomainCount LargestByUniqueTypes() const;
  DomainCount SmallestByUniqueTypes() const;

  // Associative merge of partial reports.
  StatsReport &operator+=(const StatsReport &other);
};

// Coarse label counts are reported when the corpus carries labels=coarse.
StatsReport ComputeStats(const AnnotatedCorpus &corpus);

// Table-style text layout followed by a per-domain table.
std::string FormatStats(const StatsReport &report);
nlohmann::json StatsToJson(const StatsReport &report);

}  // namespace kbner

#endif  // KBNER_STATS_H_
