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

#include "kbner/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "kbner/errors.h"
#include "kbner/iob.h"

namespace kbner {
namespace {

double Ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }

double F1(double p, double r) { return p + r == 0 ? 0.0 : 2 * p * r / (p + r); }

// Label of an IOB tag or of an already stripped label; empty for "O".
std::string_view EntityLabel(std::string_view tag) {
  if (tag == kOutsideTag) return {};
  std::string_view label = TagLabel(tag);
  return label.empty() ? tag : label;
}

void Finish(LabelScore &s) {
  s.precision = Ratio(static_cast<double>(s.correct), static_cast<double>(s.predicted));
  s.recall = Ratio(static_cast<double>(s.correct), static_cast<double>(s.gold));
  s.f1 = F1(s.precision, s.recall);
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

nlohmann::json ScoreJson(const LabelScore &s) {
  return {{"label", s.label},         {"correct", s.correct},
          {"predicted", s.predicted}, {"gold", s.gold},
          {"precision", s.precision}, {"recall", s.recall},
          {"f1", s.f1}};
}

}  // namespace

GroundTruth MergeJudgments(std::span<const Judgment> judgments,
                           const std::map<UnitKey, std::string> &auto_labels,
                           size_t quorum) {
  if (quorum == 0) throw ValidationError("quorum must be at least 1");
  // Latest verdict per annotator and unit.
  std::map<UnitKey, std::map<std::string, std::string>> votes;
  for (const Judgment &j : judgments) {
    UnitKey key{j.sentence, j.unit};
    if (!auto_labels.count(key)) {
      throw ValidationError("judgment for unknown unit " +
                            std::to_string(j.sentence) + ":" +
                            std::to_string(j.unit));
    }
    votes[key][j.annotator] = j.label;
  }
  GroundTruth gt;
  for (const auto &[key, auto_label] : auto_labels) {
    MergedUnit merged{auto_label, 0, 0, false};
    auto it = votes.find(key);
    if (it != votes.end()) {
      std::map<std::string, size_t> tally;
      for (const auto &[annotator, label] : it->second) ++tally[label];
      merged.annotators = it->second.size();
      const std::string *winner = nullptr;
      size_t best = 0;
      for (const auto &[label, n] : tally) {
        if (n < quorum) continue;
        bool better = winner == nullptr || n > best ||
                      (n == best && label == auto_label);
        if (better) {
          winner = &label;
          best = n;
        }
      }
      if (winner != nullptr) {
        merged.label = *winner;
        merged.agreement = best;
        merged.replaced = true;
      } else {
        auto same = tally.find(auto_label);
        merged.agreement = same == tally.end() ? 0 : same->second;
      }
    }
    gt.units.emplace(key, std::move(merged));
  }
  return gt;
}

std::vector<std::string> MergeRankings(
    const std::vector<std::vector<std::string>> &rankings,
    const std::vector<std::string> &candidates, size_t depth) {
  std::vector<std::string> universe;
  auto note = [&](const std::string &t) {
    if (std::find(universe.begin(), universe.end(), t) == universe.end()) {
      universe.push_back(t);
    }
  };
  for (const auto &ranking : rankings) {
    for (const std::string &t : ranking) note(t);
  }
  for (const std::string &t : candidates) note(t);

  const size_t unlisted = candidates.size() + 2;
  std::vector<size_t> rank_sum(universe.size(), 0);
  for (size_t u = 0; u < universe.size(); ++u) {
    for (const auto &ranking : rankings) {
      auto pos = std::find(ranking.begin(), ranking.end(), universe[u]);
      rank_sum[u] += pos == ranking.end()
                         ? unlisted
                         : static_cast<size_t>(pos - ranking.begin()) + 1;
    }
  }
  std::vector<size_t> order(universe.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return rank_sum[a] < rank_sum[b];
  });
  std::vector<std::string> out;
  for (size_t i = 0; i < order.size() && out.size() < depth; ++i) {
    out.push_back(universe[order[i]]);
  }
  return out;
}

double DiffAccounting::SameOverKept() const {
  return Ratio(static_cast<double>(same), static_cast<double>(same + changed));
}

double DiffAccounting::SameOverAuto() const {
  return Ratio(static_cast<double>(same), static_cast<double>(auto_total));
}

double DiffAccounting::SameOverGround() const {
  return Ratio(static_cast<double>(same), static_cast<double>(gt_total));
}

DiffAccounting &DiffAccounting::operator+=(const DiffAccounting &other) {
  added += other.added;
  removed += other.removed;
  changed += other.changed;
  same += other.same;
  auto_total += other.auto_total;
  gt_total += other.gt_total;
  return *this;
}

DiffAccounting DiffAnnotations(std::span<const std::string> auto_tags,
                               std::span<const std::string> gt_tags) {
  if (auto_tags.size() != gt_tags.size()) {
    throw ValidationError("tag sequences differ in length: " +
                          std::to_string(auto_tags.size()) + " vs " +
                          std::to_string(gt_tags.size()));
  }
  DiffAccounting d;
  for (size_t i = 0; i < auto_tags.size(); ++i) {
    std::string_view a = EntityLabel(auto_tags[i]);
    std::string_view g = EntityLabel(gt_tags[i]);
    if (!a.empty()) ++d.auto_total;
    if (!g.empty()) ++d.gt_total;
    if (a.empty() && g.empty()) continue;
    if (a.empty()) {
      ++d.added;
    } else if (g.empty()) {
      ++d.removed;
    } else if (a != g) {
      ++d.changed;
    } else {
      ++d.same;
    }
  }
  return d;
}

DiffAccounting DiffCorpora(const AnnotatedCorpus &automated,
                           const AnnotatedCorpus &ground_truth) {
  if (automated.sentences.size() != ground_truth.sentences.size()) {
    throw ValidationError("corpora differ in sentence count: " +
                          std::to_string(automated.sentences.size()) + " vs " +
                          std::to_string(ground_truth.sentences.size()));
  }
  DiffAccounting total;
  for (size_t i = 0; i < automated.sentences.size(); ++i) {
    const AnnotatedSentence &a = automated.sentences[i];
    const AnnotatedSentence &g = ground_truth.sentences[i];
    if (a.TokenTexts() != g.TokenTexts()) {
      throw ValidationError("sentence " + std::to_string(i + 1) +
                            " is not token-aligned");
    }
    total += DiffAnnotations(a.tags, g.tags);
  }
  return total;
}

void CoarseCounts::Add(std::span<const std::string> predicted,
                       std::span<const std::string> gold) {
  if (predicted.size() != gold.size()) {
    throw ValidationError("tag sequences differ in length");
  }
  for (size_t i = 0; i < predicted.size(); ++i) {
    std::string p(EntityLabel(predicted[i]));
    std::string g(EntityLabel(gold[i]));
    if (!p.empty()) {
      LabelScore &s = per_label[p];
      s.label = p;
      ++s.predicted;
      if (p == g) ++s.correct;
    }
    if (!g.empty()) {
      LabelScore &s = per_label[g];
      s.label = g;
      ++s.gold;
    }
  }
}

CoarseCounts &CoarseCounts::operator+=(const CoarseCounts &other) {
  for (const auto &[label, s] : other.per_label) {
    LabelScore &mine = per_label[label];
    mine.label = label;
    mine.correct += s.correct;
    mine.predicted += s.predicted;
    mine.gold += s.gold;
  }
  return *this;
}

CoarseScores ScoreCoarse(const CoarseCounts &counts, Averaging averaging) {
  CoarseScores scores;
  scores.average.label = averaging == Averaging::kMacro ? "macro" : "micro";
  for (const auto &[label, raw] : counts.per_label) {
    LabelScore s = raw;
    Finish(s);
    scores.average.correct += s.correct;
    scores.average.predicted += s.predicted;
    scores.average.gold += s.gold;
    scores.labels.push_back(std::move(s));
  }
  if (averaging == Averaging::kMicro) {
    Finish(scores.average);
  } else if (!scores.labels.empty()) {
    double n = static_cast<double>(scores.labels.size());
    for (const LabelScore &s : scores.labels) {
      scores.average.precision += s.precision / n;
      scores.average.recall += s.recall / n;
      scores.average.f1 += s.f1 / n;
    }
  }
  return scores;
}

CoarseScores CoarsePrf(std::span<const std::string> predicted,
                       std::span<const std::string> gold, Averaging averaging) {
  CoarseCounts counts;
  counts.Add(predicted, gold);
  return ScoreCoarse(counts, averaging);
}

FineScores FineGrainedF1(std::span<const TypeSet> predicted,
                         std::span<const TypeSet> gold) {
  if (predicted.size() != gold.size()) {
    throw ValidationError("predicted and gold entity counts differ");
  }
  if (gold.empty()) throw ValidationError("no entities to score");
  size_t exact = 0;
  size_t nonempty_pred = 0;
  double macro_p = 0;
  double macro_r = 0;
  size_t inter_total = 0;
  size_t pred_total = 0;
  size_t gold_total = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].empty()) {
      throw ValidationError("empty gold type set for entity " +
                            std::to_string(i));
    }
    size_t inter = 0;
    for (const std::string &t : predicted[i]) inter += gold[i].count(t);
    if (!predicted[i].empty()) {
      ++nonempty_pred;
      macro_p += static_cast<double>(inter) /
                 static_cast<double>(predicted[i].size());
    }
    macro_r += static_cast<double>(inter) / static_cast<double>(gold[i].size());
    if (predicted[i] == gold[i]) ++exact;
    inter_total += inter;
    pred_total += predicted[i].size();
    gold_total += gold[i].size();
  }
  const double n = static_cast<double>(gold.size());
  FineScores s;
  s.strict_precision = Ratio(static_cast<double>(exact),
                             static_cast<double>(nonempty_pred));
  s.strict_recall = static_cast<double>(exact) / n;
  s.strict = F1(s.strict_precision, s.strict_recall);
  s.macro_precision = Ratio(macro_p, static_cast<double>(nonempty_pred));
  s.macro_recall = macro_r / n;
  s.loose_macro = F1(s.macro_precision, s.macro_recall);
  s.micro_precision = Ratio(static_cast<double>(inter_total),
                            static_cast<double>(pred_total));
  s.micro_recall = static_cast<double>(inter_total) /
                   static_cast<double>(gold_total);
  s.loose_micro = F1(s.micro_precision, s.micro_recall);
  return s;
}

std::map<size_t, double> TopKAgreement(
    std::span<const std::vector<std::string>> ranked,
    std::span<const std::string> reference, std::span<const size_t> ks) {
  if (ranked.size() != reference.size()) {
    throw ValidationError("ranked and reference counts differ");
  }
  for (size_t k : ks) {
    if (k < 1) throw ValidationError("k must be at least 1");
  }
  std::vector<size_t> positions;
  positions.reserve(ranked.size());
  for (size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i].empty()) {
      throw ValidationError("empty ranked list for item " + std::to_string(i));
    }
    auto it = std::find(ranked[i].begin(), ranked[i].end(), reference[i]);
    positions.push_back(it == ranked[i].end()
                            ? SIZE_MAX
                            : static_cast<size_t>(it - ranked[i].begin()));
  }
  std::map<size_t, double> rates;
  for (size_t k : ks) {
    size_t hits = static_cast<size_t>(std::count_if(
        positions.begin(), positions.end(), [k](size_t p) { return p < k; }));
    rates[k] = Ratio(static_cast<double>(hits),
                     static_cast<double>(positions.size()));
  }
  return rates;
}

std::map<size_t, double> TopKAgreement(
    std::span<const std::vector<std::string>> ranked,
    std::span<const std::string> reference) {
  static constexpr size_t kDefaultKs[] = {1, 3, 5};
  return TopKAgreement(ranked, reference, kDefaultKs);
}

nlohmann::json ToJson(const EvalReport &report) {
  nlohmann::json j = nlohmann::json::object();
  if (report.diff) {
    const DiffAccounting &d = *report.diff;
    j["diff"] = {{"added", d.added},
                 {"removed", d.removed},
                 {"changed", d.changed},
                 {"same", d.same},
                 {"auto_total", d.auto_total},
                 {"gt_total", d.gt_total},
                 {"same_over_kept", d.SameOverKept()},
                 {"same_over_auto", d.SameOverAuto()},
                 {"same_over_ground", d.SameOverGround()}};
  }
  if (report.coarse) {
    nlohmann::json labels = nlohmann::json::array();
    for (const LabelScore &s : report.coarse->labels) labels.push_back(ScoreJson(s));
    j["coarse"] = {{"labels", labels},
                   {"average", ScoreJson(report.coarse->average)}};
  }
  if (report.fine) {
    const FineScores &f = *report.fine;
    j["fine"] = {{"strict", f.strict},
                 {"loose_macro", f.loose_macro},
                 {"loose_micro", f.loose_micro},
                 {"strict_precision", f.strict_precision},
                 {"strict_recall", f.strict_recall},
                 {"macro_precision", f.macro_precision},
                 {"macro_recall", f.macro_recall},
                 {"micro_precision", f.micro_precision},
                 {"micro_recall", f.micro_recall}};
  }
  if (!report.topk.empty()) {
    nlohmann::json topk = nlohmann::json::object();
    for (const auto &[k, rate] : report.topk) topk[std::to_string(k)] = rate;
    j["topk"] = std::move(topk);
  }
  return j;
}

std::string FormatReport(const EvalReport &report) {
  std::string out;
  char buf[160];
  if (report.diff) {
    const DiffAccounting &d = *report.diff;
    std::snprintf(buf, sizeof(buf),
                  "added %zu  removed %zu  changed %zu  same %zu  "
                  "automated %zu  ground truth %zu\n",
                  d.added, d.removed, d.changed, d.same, d.auto_total,
                  d.gt_total);
    out += buf;
    out += "same/(same+changed) " + Fixed(d.SameOverKept()) +
           "  same/automated " + Fixed(d.SameOverAuto()) +
           "  same/ground truth " + Fixed(d.SameOverGround()) + "\n";
  }
  if (report.coarse) {
    if (!out.empty()) out += '\n';
    std::snprintf(buf, sizeof(buf), "%-14s%10s%10s%10s\n", "label",
                  "precision", "recall", "f1");
    out += buf;
    auto row = [&](const LabelScore &s) {
      std::snprintf(buf, sizeof(buf), "%-14s%10.4f%10.4f%10.4f\n",
                    s.label.c_str(), s.precision, s.recall, s.f1);
      out += buf;
    };
    for (const LabelScore &s : report.coarse->labels) row(s);
    row(report.coarse->average);
  }
  if (report.fine) {
    if (!out.empty()) out += '\n';
    const FineScores &f = *report.fine;
    out += "strict       " + Fixed(f.strict) + "\n";
    out += "loose macro  " + Fixed(f.loose_macro) + "\n";
    out += "loose micro  " + Fixed(f.loose_micro) + "\n";
  }
  if (!report.topk.empty()) {
    if (!out.empty()) out += '\n';
    for (const auto &[k, rate] : report.topk) {
      out += "top-" + std::to_string(k) + "  " + Fixed(rate) + "\n";
    }
  }
  return out;
}

}  // namespace kbner
