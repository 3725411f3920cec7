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

#include "kbner/annotator.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <utility>

#include "kbner/errors.h"
#include "kbner/hash.h"
#include "kbner/iob.h"
#include "kbner/type_path.h"

namespace kbner {
namespace {

void AddSurfaces(const GazetteerEntry &entry, std::vector<SurfacePattern> &out) {
  for (const Surface &surface : entry.surfaces) {
    out.push_back({surface, entry.mid, entry.resolved_type});
  }
}

// Tags matches inside maximal runs of tokens accepted by `eligible`.
template <typename Eligible>
size_t TagRuns(const MatchAutomaton &automaton, AnnotatedSentence &annotated,
               std::string_view preferred_mid, Eligible &&eligible) {
  const std::vector<Token> &tokens = annotated.sentence.tokens;
  size_t added = 0;
  size_t i = 0;
  while (i < tokens.size()) {
    if (!eligible(i)) {
      ++i;
      continue;
    }
    size_t j = i;
    std::vector<std::string> run;
    while (j < tokens.size() && eligible(j)) run.push_back(tokens[j++].text);
    for (const Match &m : automaton.FindLeftmostLongest(run)) {
      const EntityRef &ref =
          ChooseCandidate(automaton.candidates(m.pattern), preferred_mid);
      TagSpan(annotated.tags, i + m.start, i + m.start + m.length,
              ref.type.ToString());
      ++added;
    }
    i = j;
  }
  return added;
}

std::string_view ChooseText(const EntityRecord &rec, const DocumentStore &docs,
                            std::string &doc_key) {
  if (rec.article_key) {
    auto it = docs.find(*rec.article_key);
    if (it != docs.end()) {
      doc_key = *rec.article_key;
      return it->second.raw_text;
    }
  }
  if (rec.description && !SplitSentences(*rec.description).empty()) {
    doc_key = "desc:" + rec.mid;
    return *rec.description;
  }
  return {};
}

}  // namespace

std::string AnnotatorConfig::Hash() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "lang_threshold=%.2f;fold_case=%d",
                language_threshold, fold_case ? 1 : 0);
  return HexDigest(Fnv1a64(buf));
}

AnnotationCounters &AnnotationCounters::operator+=(
    const AnnotationCounters &other) {
  cpns += other.cpns;
  no_text += other.no_text;
  language_dropped += other.language_dropped;
  unannotated_sentences += other.unannotated_sentences;
  duplicate_sentences += other.duplicate_sentences;
  return *this;
}

const EntityRef &ChooseCandidate(const std::vector<EntityRef> &candidates,
                                 std::string_view preferred_mid) {
  if (candidates.empty()) throw ValidationError("no candidate entity");
  if (!preferred_mid.empty()) {
    for (const EntityRef &ref : candidates) {
      if (ref.mid == preferred_mid) return ref;
    }
  }
  return *std::min_element(
      candidates.begin(), candidates.end(),
      [](const EntityRef &a, const EntityRef &b) { return a.mid < b.mid; });
}

AnnotatedSentence AnnotateSentence(const MatchAutomaton &automaton,
                                   const Sentence &sentence,
                                   std::string_view preferred_mid) {
  AnnotatedSentence annotated;
  annotated.sentence = sentence;
  annotated.tags.assign(sentence.tokens.size(), std::string(kOutsideTag));
  TagRuns(automaton, annotated, preferred_mid,
          [&](size_t i) { return !sentence.tokens[i].is_punct; });
  return annotated;
}

size_t ExtendAnnotation(const MatchAutomaton &automaton,
                        AnnotatedSentence &annotated,
                        std::string_view preferred_mid) {
  std::vector<bool> open(annotated.tags.size());
  for (size_t i = 0; i < open.size(); ++i) {
    open[i] = !annotated.sentence.tokens[i].is_punct &&
              annotated.tags[i] == kOutsideTag;
  }
  return TagRuns(automaton, annotated, preferred_mid,
                 [&](size_t i) { return static_cast<bool>(open[i]); });
}

std::string AssignDomain(const AnnotatedSentence &annotated,
                         std::string_view preferred_domain) {
  std::map<std::string, size_t, std::less<>> counts;
  for (const Span &span : ExtractSpans(annotated.tags)) {
    ++counts[std::string(DomainOf(span.label))];
  }
  if (counts.empty()) return {};
  size_t top = 0;
  for (const auto &[domain, n] : counts) top = std::max(top, n);
  auto preferred = counts.find(preferred_domain);
  if (preferred != counts.end() && preferred->second == top) {
    return preferred->first;
  }
  for (const auto &[domain, n] : counts) {
    if (n == top) return domain;
  }
  return {};
}

std::vector<AnnotatedSentence> AnnotateCpn(
    const KnowledgeSnapshot &snapshot, const Gazetteer &gazetteer,
    const DocumentStore &docs, std::string_view cpn_mid,
    const AnnotatorConfig &config, AnnotationCounters *counters) {
  AnnotationCounters local;
  AnnotationCounters &count = counters ? *counters : local;
  const EntityRecord &rec = snapshot.Get(cpn_mid);
  const GazetteerEntry *cpn = gazetteer.Find(cpn_mid);
  if (cpn == nullptr) {
    throw NotFoundError("mid " + rec.mid + " is not in the gazetteer");
  }
  ++count.cpns;

  std::string doc_key;
  std::string_view text = ChooseText(rec, docs, doc_key);
  if (doc_key.empty()) {
    ++count.no_text;
    return {};
  }
  if (SplitSentences(text).empty() ||
      DetectLanguage(text) < config.language_threshold) {
    ++count.language_dropped;
    return {};
  }

  std::vector<SurfacePattern> first;
  AddSurfaces(*cpn, first);
  for (const RelationEdge &edge : rec.relations) {
    if (!edge.is_mid()) continue;
    if (const GazetteerEntry *target = gazetteer.Find(edge.target)) {
      AddSurfaces(*target, first);
    }
  }
  std::vector<SurfacePattern> second;
  for (const auto &[mid, type] : SecondOrderEntities(snapshot, cpn_mid)) {
    if (const GazetteerEntry *entry = gazetteer.Find(mid)) {
      AddSurfaces(*entry, second);
    }
  }
  MatchAutomaton first_automaton = MatchAutomaton::Build(first, config.fold_case);
  MatchAutomaton second_automaton =
      MatchAutomaton::Build(second, config.fold_case);

  std::vector<AnnotatedSentence> out;
  std::vector<std::string> sentences = SplitSentences(text);
  for (size_t index = 0; index < sentences.size(); ++index) {
    Sentence sentence{doc_key, index, Tokenize(sentences[index])};
    AnnotatedSentence annotated =
        AnnotateSentence(first_automaton, sentence, cpn_mid);
    ExtendAnnotation(second_automaton, annotated);
    if (annotated.TaggedTokenCount() == 0) {
      ++count.unannotated_sentences;
      continue;
    }
    annotated.domain = AssignDomain(annotated, cpn->domain);
    out.push_back(std::move(annotated));
  }
  return out;
}

AnnotatedCorpus AnnotateCorpus(const KnowledgeSnapshot &snapshot,
                               const Gazetteer &gazetteer,
                               const DocumentStore &docs,
                               const AnnotatorConfig &config, size_t jobs,
                               AnnotationCounters *counters) {
  std::vector<std::string> mids;
  for (const auto &[mid, entry] : gazetteer.entries()) mids.push_back(mid);

  std::vector<std::vector<AnnotatedSentence>> results(mids.size());
  std::vector<AnnotationCounters> per_cpn(mids.size());
  jobs = std::max<size_t>(1, std::min(jobs, mids.size()));
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= mids.size()) return;
      try {
        results[i] = AnnotateCpn(snapshot, gazetteer, docs, mids[i], config,
                                 &per_cpn[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = mids.size();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (std::thread &t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  AnnotationCounters total;
  std::map<std::pair<std::string, size_t>, AnnotatedSentence> best;
  for (size_t i = 0; i < mids.size(); ++i) {
    total += per_cpn[i];
    for (AnnotatedSentence &s : results[i]) {
      auto key = std::make_pair(s.sentence.doc_key, s.sentence.index);
      auto it = best.find(key);
      if (it == best.end()) {
        best.emplace(std::move(key), std::move(s));
        continue;
      }
      ++total.duplicate_sentences;
      if (s.TaggedTokenCount() > it->second.TaggedTokenCount()) {
        it->second = std::move(s);
      }
    }
  }
  if (counters) *counters += total;

  AnnotatedCorpus corpus;
  corpus.SetMeta("snapshot", snapshot.source_id());
  corpus.SetMeta("config", config.Hash());
  corpus.sentences.reserve(best.size());
  for (auto &[key, s] : best) corpus.sentences.push_back(std::move(s));
  return corpus;
}

}  // namespace kbner
