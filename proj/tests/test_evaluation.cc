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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "kbner/errors.h"
#include "kbner/evaluation.h"

namespace kbner {
namespace {

using V = std::vector<std::string>;

const LabelScore &Find(const CoarseScores &s, const std::string &label) {
  for (const LabelScore &l : s.labels) {
    if (l.label == label) return l;
  }
  FAIL("missing label " << label);
  static LabelScore none;
  return none;
}

TEST_CASE("diff accounting") {
  V autos{"O", "B-PER", "B-ORG", "B-LOC"};
  V gold{"B-MISC", "B-PER", "O", "B-PER"};
  DiffAccounting d = DiffAnnotations(autos, gold);
  CHECK(d.added == 1);
  CHECK(d.removed == 1);
  CHECK(d.changed == 1);
  CHECK(d.same == 1);
  CHECK(d.auto_total == 3);
  CHECK(d.gt_total == 3);
  CHECK(d.IdentitiesHold());

  V tagged{"B-PER", "I-PER", "O", "B-LOC"};
  DiffAccounting same = DiffAnnotations(tagged, tagged);
  CHECK(same.added + same.removed + same.changed == 0);
  CHECK(same.same == 3);

  // Prefixes are ignored and bare labels are accepted.
  CHECK(DiffAnnotations(V{"PER", "O"}, V{"B-PER", "LOC"}).added == 1);
  CHECK(DiffAnnotations(V{"B-PER", "I-PER"}, V{"I-PER", "B-PER"}).same == 2);
  CHECK_THROWS_AS(DiffAnnotations(V{"O"}, V{"O", "O"}), ValidationError);
}

TEST_CASE("published accounting columns") {
  // Automated vs. manual counts per test set: removed, changed, same, added.
  DiffAccounting di{958, 163, 278, 1417, 1858, 2653};
  DiffAccounting dd{926, 120, 198, 1647, 1965, 2771};
  CHECK(di.IdentitiesHold());
  CHECK(dd.IdentitiesHold());
  CHECK(di.SameOverKept() == doctest::Approx(1417.0 / 1695.0));
  // The raw-corpus automated total adds up, its ground-truth total does not.
  DiffAccounting raw{872, 537, 564, 1275, 2376, 2891};
  CHECK(raw.auto_total == raw.removed + raw.changed + raw.same);
  CHECK_FALSE(raw.IdentitiesHold());
  CHECK(raw.added + raw.changed + raw.same == 2711);
}

TEST_CASE("coarse scores") {
  CoarseScores s = CoarsePrf(V{"PER", "PER", "ORG"}, V{"PER", "ORG", "ORG"});
  const LabelScore &per = Find(s, "PER");
  CHECK(per.precision == 0.5);
  CHECK(per.recall == 1.0);
  CHECK(per.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  const LabelScore &org = Find(s, "ORG");
  CHECK(org.precision == 1.0);
  CHECK(org.recall == 0.5);
  CHECK(s.labels.size() == 2);
  CHECK(s.average.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  CoarseScores perfect = CoarsePrf(V{"B-PER", "O", "B-LOC"}, V{"B-PER", "O", "B-LOC"});
  for (const LabelScore &l : perfect.labels) {
    CHECK(l.precision == 1.0);
    CHECK(l.recall == 1.0);
    CHECK(l.f1 == 1.0);
  }
  CoarseScores missing = CoarsePrf(V{"O"}, V{"B-LOC"});
  CHECK(Find(missing, "LOC").precision == 0.0);
  CHECK(Find(missing, "LOC").recall == 0.0);
  CHECK(Find(missing, "LOC").f1 == 0.0);

  CoarseScores micro =
      CoarsePrf(V{"PER", "PER", "ORG"}, V{"PER", "ORG", "ORG"}, Averaging::kMicro);
  CHECK(micro.average.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(micro.average.label == "micro");
}

TEST_CASE("fine-grained scores") {
  std::vector<TypeSet> pred{{"a"}, {"b"}};
  std::vector<TypeSet> gold{{"a"}, {"c"}};
  FineScores f = FineGrainedF1(pred, gold);
  CHECK(f.strict == 0.5);
  CHECK(f.loose_macro == 0.5);
  CHECK(f.loose_micro == 0.5);

  std::vector<TypeSet> p2{{"a", "b"}};
  std::vector<TypeSet> g2{{"a"}};
  FineScores f2 = FineGrainedF1(p2, g2);
  CHECK(f2.strict == 0.0);
  CHECK(f2.macro_precision == 0.5);
  CHECK(f2.macro_recall == 1.0);
  CHECK(f2.loose_macro == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(f2.loose_micro == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  FineScores same = FineGrainedF1(gold, gold);
  CHECK(same.strict == 1.0);
  CHECK(same.loose_macro == 1.0);
  CHECK(same.loose_micro == 1.0);

  std::vector<TypeSet> empty_gold{{}};
  CHECK_THROWS_AS(FineGrainedF1(g2, empty_gold), ValidationError);
  CHECK_THROWS_AS(FineGrainedF1(pred, g2), ValidationError);
}

TEST_CASE("strict never exceeds loose") {
  std::mt19937_64 rng(5);
  const V universe{"a", "b", "c", "d", "e"};
  for (int round = 0; round < 500; ++round) {
    size_t n = 1 + rng() % 6;
    std::vector<TypeSet> pred(n), gold(n);
    for (size_t i = 0; i < n; ++i) {
      for (const std::string &t : universe) {
        if (rng() % 3 == 0) pred[i].insert(t);
        if (rng() % 3 == 0) gold[i].insert(t);
      }
      if (gold[i].empty()) gold[i].insert(universe[rng() % universe.size()]);
    }
    FineScores f = FineGrainedF1(pred, gold);
    CHECK(f.strict <= f.loose_macro + 1e-12);
  }
}

TEST_CASE("strict can exceed loose micro") {
  std::vector<TypeSet> pred{{"a"}, {"b", "c", "d", "e"}};
  std::vector<TypeSet> gold{{"a"}, {"z"}};
  FineScores f = FineGrainedF1(pred, gold);
  CHECK(f.strict == 0.5);
  CHECK(f.loose_micro == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
  CHECK(f.strict > f.loose_micro);
  CHECK(f.strict <= f.loose_macro);
}

TEST_CASE("top-k agreement") {
  std::vector<V> ranked{{"soccer", "people", "location"}};
  V reference{"people"};
  auto rates = TopKAgreement(ranked, reference);
  CHECK(rates[1] == 0.0);
  CHECK(rates[3] == 1.0);

  std::vector<V> four;
  for (size_t rank : {1, 2, 4, 6}) {
    V list{"x1", "x2", "x3", "x4", "x5", "x6"};
    list[rank - 1] = "ref";
    four.push_back(list);
  }
  V refs(4, "ref");
  auto r4 = TopKAgreement(four, refs);
  CHECK(r4[1] == 0.25);
  CHECK(r4[3] == 0.5);
  CHECK(r4[5] == 0.75);

  std::vector<V> first(3, V{"ref", "x"});
  for (const auto &[k, rate] : TopKAgreement(first, V(3, "ref"))) {
    CHECK(rate == 1.0);
  }
  const size_t bad_k[] = {0};
  CHECK_THROWS_AS(TopKAgreement(first, V(3, "ref"), bad_k), ValidationError);
  std::vector<V> empty_list{{}};
  CHECK_THROWS_AS(TopKAgreement(empty_list, V{"ref"}), ValidationError);
  CHECK_THROWS_AS(TopKAgreement(first, V{"ref"}), ValidationError);
}

std::map<UnitKey, std::string> OneUnit(const std::string &label) {
  return {{UnitKey{0, 0}, label}};
}

std::vector<Judgment> Votes(const V &labels) {
  std::vector<Judgment> out;
  for (size_t i = 0; i < labels.size(); ++i) {
    out.push_back({"ann" + std::to_string(i), 0, 0, labels[i], {}, {}});
  }
  return out;
}

TEST_CASE("judgment merge quorum") {
  GroundTruth a = MergeJudgments(Votes({"PER", "PER", "PER", "ORG", "O"}),
                                 OneUnit("MISC"));
  CHECK(a.units.at({0, 0}).label == "PER");
  CHECK(a.units.at({0, 0}).agreement == 3);
  CHECK(a.units.at({0, 0}).replaced);

  GroundTruth b = MergeJudgments(Votes({"PER", "ORG", "O", "LOC", "MISC"}),
                                 OneUnit("MISC"));
  CHECK(b.units.at({0, 0}).label == "MISC");
  CHECK_FALSE(b.units.at({0, 0}).replaced);
  CHECK(b.units.at({0, 0}).annotators == 5);

  GroundTruth c = MergeJudgments(Votes({"ORG", "ORG", "ORG", "ORG", "ORG"}),
                                 OneUnit("ORG"));
  CHECK(c.units.at({0, 0}).label == "ORG");
  CHECK(c.units.at({0, 0}).agreement == 5);

  // A later verdict of the same annotator replaces the earlier one.
  std::vector<Judgment> redo = Votes({"PER", "PER", "LOC"});
  redo.push_back({"ann2", 0, 0, "PER", {}, {}});
  CHECK(MergeJudgments(redo, OneUnit("O")).units.at({0, 0}).label == "PER");

  GroundTruth untouched = MergeJudgments({}, OneUnit("LOC"));
  CHECK(untouched.units.at({0, 0}).label == "LOC");
  CHECK(untouched.units.at({0, 0}).annotators == 0);

  std::vector<Judgment> stray{{"a", 9, 9, "PER", {}, {}}};
  CHECK_THROWS_AS(MergeJudgments(stray, OneUnit("O")), ValidationError);
  CHECK_THROWS_AS(MergeJudgments({}, OneUnit("O"), 0), ValidationError);
}

TEST_CASE("ranking merge") {
  V candidates{"/a/x", "/b/y", "/c/z"};
  CHECK(MergeRankings({{"/b/y", "/a/x"}, {"/b/y", "/c/z"}}, candidates) ==
        V{"/b/y", "/a/x", "/c/z"});
  // Equal mean rank keeps first-seen order.
  CHECK(MergeRankings({{"/a/x", "/b/y"}, {"/b/y", "/a/x"}}, candidates) ==
        V{"/a/x", "/b/y", "/c/z"});
  // Suggestions outside the candidate list take part.
  CHECK(MergeRankings({{"/new/t"}}, candidates, 2) == V{"/new/t", "/a/x"});
  CHECK(MergeRankings({}, candidates).size() == 3);
}

V RandomTags(std::mt19937_64 &rng, size_t n) {
  static const V labels{"O", "O", "B-PER", "I-PER", "B-LOC", "B-ORG", "B-MISC"};
  V out;
  for (size_t i = 0; i < n; ++i) out.push_back(labels[rng() % labels.size()]);
  return out;
}

TEST_CASE("coarse counts shard and permute") {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 50; ++round) {
    std::vector<std::pair<V, V>> sentences;
    for (size_t i = 0; i < 1 + rng() % 12; ++i) {
      size_t n = 1 + rng() % 8;
      sentences.emplace_back(RandomTags(rng, n), RandomTags(rng, n));
    }
    CoarseCounts whole;
    for (const auto &[p, g] : sentences) whole.Add(p, g);

    CoarseCounts left, right;
    size_t cut = sentences.size() / 2;
    for (size_t i = 0; i < sentences.size(); ++i) {
      (i < cut ? left : right).Add(sentences[i].first, sentences[i].second);
    }
    left += right;

    std::shuffle(sentences.begin(), sentences.end(), rng);
    CoarseCounts shuffled;
    for (const auto &[p, g] : sentences) shuffled.Add(p, g);

    for (Averaging avg : {Averaging::kMacro, Averaging::kMicro}) {
      CoarseScores a = ScoreCoarse(whole, avg);
      for (const CoarseCounts *other : {&left, &shuffled}) {
        CoarseScores b = ScoreCoarse(*other, avg);
        REQUIRE(a.labels.size() == b.labels.size());
        for (size_t i = 0; i < a.labels.size(); ++i) {
          CHECK(a.labels[i].correct == b.labels[i].correct);
          CHECK(a.labels[i].predicted == b.labels[i].predicted);
          CHECK(a.labels[i].gold == b.labels[i].gold);
        }
        CHECK(a.average.f1 == b.average.f1);
      }
    }
  }
}

TEST_CASE("report rendering") {
  EvalReport report;
  report.diff = DiffAnnotations(V{"B-PER", "O"}, V{"B-PER", "B-LOC"});
  report.topk = {{1, 0.5}, {3, 1.0}};
  nlohmann::json j = ToJson(report);
  CHECK(j["diff"]["same"] == 1);
  CHECK(j["diff"]["added"] == 1);
  CHECK(j["topk"]["3"] == 1.0);
  CHECK(FormatReport(report).find("added 1") != std::string::npos);
}

}  // namespace
}  // namespace kbner
