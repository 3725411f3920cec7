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

#ifndef KBNER_SAMPLING_H_
#define KBNER_SAMPLING_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kbner/corpus.h"

namespace kbner {

struct SampleSplit {
  AnnotatedCorpus sample;
  AnnotatedCorpus rest;
};

inline constexpr uint64_t kDefaultSeed = 20160901;

// Seeded Fisher-Yates permutation of [0, n). Uses its own bounded draw on top
// of mt19937_64 so results do not depend on the standard library's
// distributions.
std::vector<size_t> SeededPermutation(size_t n, uint64_t seed);

// Random sentences until at least `target_words` non-punctuation tokens are
// collected (NER test sets). Both halves keep corpus order.
SampleSplit SampleByWords(const AnnotatedCorpus &corpus, size_t target_words,
                          uint64_t seed = kDefaultSeed);

// Exactly min(count, size) random sentences (categorization test sets).
SampleSplit SampleBySentences(const AnnotatedCorpus &corpus, size_t count,
                              uint64_t seed = kDefaultSeed);

}  // namespace kbner

#endif  // KBNER_SAMPLING_H_
