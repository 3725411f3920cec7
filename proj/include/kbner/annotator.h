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

#ifndef KBNER_ANNOTATOR_H_
#define KBNER_ANNOTATOR_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kbner/corpus.h"
#include "kbner/gazetteer.h"
#include "kbner/kb.h"
#include "kbner/matcher.h"
#include "kbner/text.h"

namespace kbner {

struct AnnotatorConfig {
  double language_threshold = kDefaultLanguageThreshold;
  bool fold_case = false;

  // Stable fingerprint recorded in corpus provenance.
  std::string Hash() const;
};

struct AnnotationCounters {
  size_t cpns = 0;
  size_t no_text = 0;            // neither article nor description
  size_t language_dropped = 0;   // text below the language threshold
  size_t unannotated_sentences = 0;
  size_t duplicate_sentences = 0;

  AnnotationCounters &operator+=(const AnnotationCounters &other);
};

// Which candidate to use when several entities share a matched surface.
// The preferred mid wins when present, otherwise the smallest mid.
const EntityRef &ChooseCandidate(const std::vector<EntityRef> &candidates,
                                 std::string_view preferred_mid);

// Tags leftmost-longest matches inside every punctuation-free run of tokens.
// Punctuation is always "O". The domain is left empty.
AnnotatedSentence AnnotateSentence(const MatchAutomaton &automaton,
                                   const Sentence &sentence,
                                   std::string_view preferred_mid = {});

// Matches only inside runs of untagged, non-punctuation tokens; existing tags
// are never changed. Returns the number of new spans.
size_t ExtendAnnotation(const MatchAutomaton &automaton,
                        AnnotatedSentence &annotated,
                        std::string_view preferred_mid = {});

// Entity-count majority over the sentence's spans; ties go to
// `preferred_domain`, then to the lexicographically smallest domain.
std::string AssignDomain(const AnnotatedSentence &annotated,
                         std::string_view preferred_domain);

// The per-entity crawl: pick the CPN's text (article, else description),
// drop it when it is not Turkish, tag first-order surfaces, extend with
// second-order surfaces, then categorize each sentence. Sentences without
// any entity are not returned.
std::vector<AnnotatedSentence> AnnotateCpn(
    const KnowledgeSnapshot &snapshot, const Gazetteer &gazetteer,
    const DocumentStore &docs, std::string_view cpn_mid,
    const AnnotatorConfig &config = {},
    AnnotationCounters *counters = nullptr);

// Runs AnnotateCpn for every gazetteer entry (optionally on `jobs` threads)
// and merges deterministically: one copy per (doc_key, index), taken from
// the CPN that tagged the most tokens, first mid winning ties.
AnnotatedCorpus AnnotateCorpus(const KnowledgeSnapshot &snapshot,
                               const Gazetteer &gazetteer,
                               const DocumentStore &docs,
                               const AnnotatorConfig &config = {},
                               size_t jobs = 1,
                               AnnotationCounters *counters = nullptr);

}  // namespace kbner

#endif  // KBNER_ANNOTATOR_H_
