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

#include "kbner/stats.h"

#include <cstdio>

#include "kbner/coarse.h"
#include "kbner/iob.h"
#include "kbner/text.h"

namespace kbner {
namespace {

template <typename Map, typename Value>
DomainCount Extreme(const Map &map, Value &&value, bool largest) {
  DomainCount best{"-", 0};
  bool found = false;
  for (const auto &entry : map) {
    size_t v = value(entry.second);
    if (!found || (largest ? v > best.count : v < best.count)) {
      best = {entry.first, v};
      found = true;
    }
  }
  return best;
}

size_t Size(const std::set<std::string> &s) { return s.size(); }
size_t Identity(size_t n) { return n; }

std::string Cell(const DomainCount &d) {
  return d.domain + " (" + std::to_string(d.count) + ")";
}

void Row(std::string &out, const std::string &name, const std::string &value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-42s", name.c_str());
  out += buf;
  out += value;
  out += '\n';
}

nlohmann::json DomainJson(const DomainCount &d) {
  return {{"domain", d.domain}, {"count", d.count}};
}

}  // namespace

DomainCount StatsReport::LargestBySentences() const {
  return Extreme(domain_sentences, Identity, true);
}

DomainCount StatsReport::SmallestBySentences() const {
  return Extreme(domain_sentences, Identity, false);
}

DomainCount StatsReport::LargestByUniqueTypes() const {
  return Extreme(domain_types, Size, true);
}

DomainCount StatsReport::SmallestByUniqueTypes() const {
  return Extreme(domain_types, Size, false);
}

StatsReport &StatsReport::operator+=(const StatsReport &other) {
  sentences += other.sentences;
  tokens_with_punct += other.tokens_with_punct;
  tokens_without_punct += other.tokens_without_punct;
  tagged_tokens += other.tagged_tokens;
  for (const auto &[d, n] : other.domain_sentences) domain_sentences[d] += n;
  entity_types.insert(other.entity_types.begin(), other.entity_types.end());
  for (const auto &[d, types] : other.domain_types) {
    domain_types[d].insert(types.begin(), types.end());
  }
  coarse = coarse || other.coarse;
  for (const auto &[l, n] : other.label_tokens) label_tokens[l] += n;
  return *this;
}

StatsReport ComputeStats(const AnnotatedCorpus &corpus) {
  StatsReport report;
  report.coarse = corpus.Meta("labels") == "coarse";
  for (const AnnotatedSentence &s : corpus.sentences) {
    ++report.sentences;
    ++report.domain_sentences[s.domain];
    std::set<std::string> &types = report.domain_types[s.domain];
    for (size_t i = 0; i < s.tags.size(); ++i) {
      ++report.tokens_with_punct;
      if (!IsPunctuationToken(s.sentence.tokens[i].text)) {
        ++report.tokens_without_punct;
      }
      std::string_view label = TagLabel(s.tags[i]);
      if (label.empty()) continue;
      ++report.tagged_tokens;
      report.entity_types.emplace(label);
      types.emplace(label);
      ++report.label_tokens[std::string(label)];
    }
  }
  return report;
}

std::string FormatStats(const StatsReport &report) {
  std::string out;
  Row(out, "# of Sentences", std::to_string(report.sentences));
  Row(out, "# of Domains", std::to_string(report.domain_sentences.size()));
  Row(out, "Largest Domain (# sentences)", Cell(report.LargestBySentences()));
  Row(out, "Smallest Domain (# sentences)", Cell(report.SmallestBySentences()));
  Row(out, "# of Tokens (with punctuation)",
      std::to_string(report.tokens_with_punct));
  Row(out, "# of Tokens (without punctuation)",
      std::to_string(report.tokens_without_punct));
  Row(out, "# of Tagged Tokens", std::to_string(report.tagged_tokens));
  Row(out, "# of Unique Entity Types", std::to_string(report.unique_types()));
  Row(out, "Largest Domain (# unique entity types)",
      Cell(report.LargestByUniqueTypes()));
  Row(out, "Smallest Domain (# unique entity types)",
      Cell(report.SmallestByUniqueTypes()));
  if (report.coarse) {
    for (CoarseLabel label : kEntityLabels) {
      std::string name(ToString(label));
      auto it = report.label_tokens.find(name);
      Row(out, "# of " + name + " Tokens",
          std::to_string(it == report.label_tokens.end() ? 0 : it->second));
    }
  }
  out += "\ndomain\tsentences\tunique_types\n";
  for (const auto &[domain, n] : report.domain_sentences) {
    auto types = report.domain_types.find(domain);
    size_t unique = types == report.domain_types.end() ? 0 : types->second.size();
    out += domain + "\t" + std::to_string(n) + "\t" + std::to_string(unique) +
           "\n";
  }
  return out;
}

nlohmann::json StatsToJson(const StatsReport &report) {
  nlohmann::json j;
  j["sentences"] = report.sentences;
  j["domains"] = report.domain_sentences.size();
  j["largest_domain_by_sentences"] = DomainJson(report.LargestBySentences());
  j["smallest_domain_by_sentences"] = DomainJson(report.SmallestBySentences());
  j["tokens_with_punctuation"] = report.tokens_with_punct;
  j["tokens_without_punctuation"] = report.tokens_without_punct;
  j["tagged_tokens"] = report.tagged_tokens;
  j["unique_entity_types"] = report.unique_types();
  j["largest_domain_by_unique_types"] = DomainJson(report.LargestByUniqueTypes());
  j["smallest_domain_by_unique_types"] =
      DomainJson(report.SmallestByUniqueTypes());
  if (report.coarse) {
    nlohmann::json labels = nlohmann::json::object();
    for (CoarseLabel label : kEntityLabels) {
      std::string name(ToString(label));
      auto it = report.label_tokens.find(name);
      labels[name] = it == report.label_tokens.end() ? 0 : it->second;
    }
    j["label_tokens"] = std::move(labels);
  }
  nlohmann::json per_domain = nlohmann::json::array();
  for (const auto &[domain, n] : report.domain_sentences) {
    auto types = report.domain_types.find(domain);
    per_domain.push_back(
        {{"domain", domain},
         {"sentences", n},
         {"unique_types",
          types == report.domain_types.end() ? 0 : types->second.size()}});
  }
  j["per_domain"] = std::move(per_domain);
  return j;
}

}  // namespace kbner
