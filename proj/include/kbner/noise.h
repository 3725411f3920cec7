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

#ifndef KBNER_NOISE_H_
#define KBNER_NOISE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kbner/corpus.h"

namespace kbner {

enum class NoiseMode { kDomainIndependent, kDomainDependent };

std::string_view ToString(NoiseMode mode);  // "di" / "dd"
std::optional<NoiseMode> ParseNoiseMode(std::string_view text);

// Occurrence votes per surface key. The key is the span's token sequence,
// prefixed by the sentence domain in domain-dependent mode.
class TypeVoteTable {
 public:
  void Add(const std::vector<std::string> &key, const std::string &type,
           size_t span_length);

  // Most voted type; ties go to the larger total span length, then to the
  // lexicographically smallest type. Throws NotFoundError for unseen keys.
  const std::string &Modal(const std::vector<std::string> &key) const;

  size_t size() const { return votes_.size(); }

 private:
  struct Tally {
    size_t count = 0;
    size_t length = 0;
  };
  std::map<std::vector<std::string>, std::map<std::string, Tally>> votes_;
  mutable std::map<std::vector<std::string>, std::string> modal_cache_;
};

// Re-types every span with its surface's corpus-wide modal type. Span
// boundaries, tokens and sentence count are untouched.
AnnotatedCorpus ReduceDomainIndependent(const AnnotatedCorpus &corpus);

// Same, with votes partitioned by sentence domain. Throws ValidationError if
// a sentence has no domain.
AnnotatedCorpus ReduceDomainDependent(const AnnotatedCorpus &corpus);

AnnotatedCorpus ReduceNoise(const AnnotatedCorpus &corpus, NoiseMode mode);

}  // namespace kbner

#endif  // KBNER_NOISE_H_
