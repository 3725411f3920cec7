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

#include "kbner/noise.h"

#include "kbner/errors.h"
#include "kbner/iob.h"

namespace kbner {
namespace {

std::vector<std::string> SpanKey(const AnnotatedSentence &s, const Span &span,
                                 bool by_domain) {
  std::vector<std::string> key;
  key.reserve(span.end - span.begin + 1);
  if (by_domain) key.push_back(s.domain);
  for (size_t i = span.begin; i < span.end; ++i) {
    key.push_back(s.sentence.tokens[i].text);
  }
  return key;
}

AnnotatedCorpus Reduce(const AnnotatedCorpus &corpus, NoiseMode mode) {
  const bool by_domain = mode == NoiseMode::kDomainDependent;
  TypeVoteTable votes;
  for (const AnnotatedSentence &s : corpus.sentences) {
    if (by_domain && s.domain.empty()) {
      throw ValidationError("domain-dependent noise reduction needs a domain "
                            "on every sentence");
    }
    for (const Span &span : ExtractSpans(s.tags)) {
      votes.Add(SpanKey(s, span, by_domain), span.label, span.end - span.begin);
    }
  }
  AnnotatedCorpus out = corpus;
  for (AnnotatedSentence &s : out.sentences) {
    for (const Span &span : ExtractSpans(s.tags)) {
      const std::string &modal = votes.Modal(SpanKey(s, span, by_domain));
      if (modal != span.label) TagSpan(s.tags, span.begin, span.end, modal);
    }
  }
  out.SetMeta("noise", std::string(ToString(mode)));
  return out;
}

}  // namespace

std::string_view ToString(NoiseMode mode) {
  return mode == NoiseMode::kDomainIndependent ? "di" : "dd";
}

std::optional<NoiseMode> ParseNoiseMode(std::string_view text) {
  if (text == "di") return NoiseMode::kDomainIndependent;
  if (text == "dd") return NoiseMode::kDomainDependent;
  return std::nullopt;
}

void TypeVoteTable::Add(const std::vector<std::string> &key,
                        const std::string &type, size_t span_length) {
  Tally &tally = votes_[key][type];
  ++tally.count;
  tally.length += span_length;
  modal_cache_.erase(key);
}

const std::string &TypeVoteTable::Modal(
    const std::vector<std::string> &key) const {
  auto cached = modal_cache_.find(key);
  if (cached != modal_cache_.end()) return cached->second;
  auto it = votes_.find(key);
  if (it == votes_.end() || it->second.empty()) {
    throw NotFoundError("no votes for surface");
  }
  const std::string *best = nullptr;
  Tally best_tally;
  for (const auto &[type, tally] : it->second) {
    // Map order visits types lexicographically, so only strict wins replace.
    if (best == nullptr || tally.count > best_tally.count ||
        (tally.count == best_tally.count && tally.length > best_tally.length)) {
      best = &type;
      best_tally = tally;
    }
  }
  return modal_cache_.emplace(key, *best).first->second;
}

AnnotatedCorpus ReduceDomainIndependent(const AnnotatedCorpus &corpus) {
  return Reduce(corpus, NoiseMode::kDomainIndependent);
}

AnnotatedCorpus ReduceDomainDependent(const AnnotatedCorpus &corpus) {
  return Reduce(corpus, NoiseMode::kDomainDependent);
}

AnnotatedCorpus ReduceNoise(const AnnotatedCorpus &corpus, NoiseMode mode) {
  return Reduce(corpus, mode);
}

}  // namespace kbner
