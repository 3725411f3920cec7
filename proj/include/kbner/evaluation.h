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

#ifndef KBNER_EVALUATION_H_
#define KBNER_EVALUATION_H_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "kbner/corpus.h"

namespace kbner {

// ---------------------------------------------------------------------------
// Judgment merging

// One annotator's verdict on one unit (span or token) of one sentence.
// Coarse tasks fill `label`; fine tasks fill `ranking` and optionally
// `suggestion`.
struct Judgment {
  std::string annotator;
  size_t sentence = 0;
  size_t unit = 0;
  std::string label;
  std::vector<std::string> ranking;
  std::optional<std::string> suggestion;
};

struct UnitKey {
  size_t sentence = 0;
  size_t unit = 0;

  auto operator<=>(const UnitKey &) const = default;
  bool operator==(const UnitKey &) const = default;
};

struct MergedUnit {
  std::string label;
  size_t agreement = 0;  // votes for the winning label
  size_t annotators = 0;
  bool replaced = false;  // quorum reached
};

struct GroundTruth {
  std::map<UnitKey, MergedUnit> units;
};

// A unit takes the label chosen by at least `quorum` annotators; otherwise
// the automated label stays. Throws ValidationError for a judgment on a unit
// missing from `auto_labels` or for quorum 0.
GroundTruth MergeJudgments(std::span<const Judgment> judgments,
                           const std::map<UnitKey, std::string> &auto_labels,
                           size_t quorum = 3);

// Mean-rank merge of per-annotator rankings (already in annotator order).
// A type an annotator did not list gets rank |candidates| + 2; ties keep the
// order of first appearance. Returns at most `depth` types.
std::vector<std::string> MergeRankings(
    const std::vector<std::vector<std::string>> &rankings,
    const std::vector<std::string> &candidates, size_t depth = 5);

// ---------------------------------------------------------------------------
// Diff accounting

struct DiffAccounting {
  size_t added = 0;    // O -> X
  size_t removed = 0;  // X -> O
  size_t changed = 0;  // X -> Y
  size_t same = 0;     // X -> X
  size_t auto_total = 0;
  size_t gt_total = 0;

  bool IdentitiesHold() const {
    return auto_total == removed + changed + same &&
           gt_total == added + changed + same;
  }
  // Candidate readings of an overall "matching ratio".
  double SameOverKept() const;     // same / (same + changed)
  double SameOverAuto() const;     // same / auto_total
  double SameOverGround() const;   // same / gt_total

  DiffAccounting &operator+=(const DiffAccounting &other);
  bool operator==(const DiffAccounting &) const = default;
};

// Token-aligned comparison with IOB prefixes stripped. Throws
// ValidationError on a length mismatch.
DiffAccounting DiffAnnotations(std::span<const std::string> auto_tags,
                               std::span<const std::string> gt_tags);
DiffAccounting DiffCorpora(const AnnotatedCorpus &automated,
                           const AnnotatedCorpus &ground_truth);

// ---------------------------------------------------------------------------
// Coarse precision / recall / F1

enum class Averaging { kMacro, kMicro };

struct LabelScore {
  std::string label;
  size_t correct = 0;
  size_t predicted = 0;
  size_t gold = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Additive token counts; shards can be summed before scoring.
struct CoarseCounts {
  std::map<std::string, LabelScore> per_label;

  void Add(std::span<const std::string> predicted,
           std::span<const std::string> gold);
  CoarseCounts &operator+=(const CoarseCounts &other);
};

struct CoarseScores {
  std::vector<LabelScore> labels;  // labels seen in prediction or gold
  LabelScore average;
};

// Undefined precision or recall (empty denominator) counts as 0. "O" never
// contributes. Labels absent from both sides are left out of the average.
CoarseScores ScoreCoarse(const CoarseCounts &counts,
                         Averaging averaging = Averaging::kMacro);
CoarseScores CoarsePrf(std::span<const std::string> predicted,
                       std::span<const std::string> gold,
                       Averaging averaging = Averaging::kMacro);

// ---------------------------------------------------------------------------
// Fine-grained typing

using TypeSet = std::set<std::string>;

struct FineScores {
  double strict = 0;
  double loose_macro = 0;
  double loose_micro = 0;
  double strict_precision = 0, strict_recall = 0;
  double macro_precision = 0, macro_recall = 0;
  double micro_precision = 0, micro_recall = 0;
};

// Strict, loose-macro and loose-micro F1 over one (predicted, gold) type
// set pair per entity. Throws ValidationError on an empty gold set or a
// size mismatch.
FineScores FineGrainedF1(std::span<const TypeSet> predicted,
                         std::span<const TypeSet> gold);

// ---------------------------------------------------------------------------
// Top-k agreement

// Fraction of items whose reference is among the first k ranked entries, for
// each k. Throws ValidationError on k < 1, an empty ranked list or a size
// mismatch.
std::map<size_t, double> TopKAgreement(
    std::span<const std::vector<std::string>> ranked,
    std::span<const std::string> reference,
    std::span<const size_t> ks);
std::map<size_t, double> TopKAgreement(
    std::span<const std::vector<std::string>> ranked,
    std::span<const std::string> reference);

// ---------------------------------------------------------------------------
// Reports

struct EvalReport {
  std::optional<DiffAccounting> diff;
  std::optional<CoarseScores> coarse;
  std::optional<FineScores> fine;
  std::map<size_t, double> topk;
};

nlohmann::json ToJson(const EvalReport &report);
std::string FormatReport(const EvalReport &report);

}  // namespace kbner

#endif  // KBNER_EVALUATION_H_
