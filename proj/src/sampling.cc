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

#include "kbner/sampling.h"

#include <algorithm>
#include <numeric>
#include <random>

namespace kbner {
namespace {

// Uniform draw in [0, bound) by rejection.
uint64_t Bounded(std::mt19937_64 &rng, uint64_t bound) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

size_t WordCount(const AnnotatedSentence &s) {
  size_t n = 0;
  for (const Token &t : s.tokens()) n += !t.is_punct;
  return n;
}

SampleSplit Partition(const AnnotatedCorpus &corpus, std::vector<bool> chosen) {
  SampleSplit split;
  split.sample.meta = corpus.meta;
  split.rest.meta = corpus.meta;
  for (size_t i = 0; i < corpus.sentences.size(); ++i) {
    (chosen[i] ? split.sample : split.rest)
        .sentences.push_back(corpus.sentences[i]);
  }
  return split;
}

}  // namespace

std::vector<size_t> SeededPermutation(size_t n, uint64_t seed) {
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  for (size_t i = n; i > 1; --i) {
    size_t j = static_cast<size_t>(Bounded(rng, i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

SampleSplit SampleByWords(const AnnotatedCorpus &corpus, size_t target_words,
                          uint64_t seed) {
  std::vector<bool> chosen(corpus.sentences.size(), false);
  size_t words = 0;
  for (size_t i : SeededPermutation(corpus.sentences.size(), seed)) {
    if (words >= target_words) break;
    chosen[i] = true;
    words += WordCount(corpus.sentences[i]);
  }
  return Partition(corpus, std::move(chosen));
}

SampleSplit SampleBySentences(const AnnotatedCorpus &corpus, size_t count,
                              uint64_t seed) {
  std::vector<bool> chosen(corpus.sentences.size(), false);
  std::vector<size_t> perm = SeededPermutation(corpus.sentences.size(), seed);
  for (size_t i = 0; i < std::min(count, perm.size()); ++i) chosen[perm[i]] = true;
  return Partition(corpus, std::move(chosen));
}

}  // namespace kbner
