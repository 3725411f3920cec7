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

#ifndef KBNER_MATCHER_H_
#define KBNER_MATCHER_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kbner/type_path.h"

namespace kbner {

struct EntityRef {
  std::string mid;
  TypePath type;

  auto operator<=>(const EntityRef &) const = default;
  bool operator==(const EntityRef &) const = default;
};

struct SurfacePattern {
  std::vector<std::string> tokens;
  std::string mid;
  TypePath type;
};

struct Match {
  size_t start = 0;
  size_t length = 0;
  size_t pattern = 0;

  bool operator==(const Match &) const = default;
};

// Aho-Corasick automaton over whole tokens.
//
// Patterns with the same token sequence are merged into one pattern whose
// candidate list is sorted, and patterns are numbered in surface order, so
// every query result is independent of insertion order.
class MatchAutomaton {
 public:
  MatchAutomaton();

  // Throws ValidationError on an empty surface. With `fold_case`, patterns
  // and queries are compared after Turkish case folding.
  static MatchAutomaton Build(std::span<const SurfacePattern> patterns,
                              bool fold_case = false);

  // Length of the longest pattern starting at each position (0 = none).
  std::vector<size_t> LongestAt(std::span<const std::string> tokens) const;

  // Greedy, non-overlapping, leftmost-longest matches.
  std::vector<Match> FindLeftmostLongest(
      std::span<const std::string> tokens) const;

  size_t pattern_count() const { return patterns_.size(); }
  const std::vector<std::string> &surface(size_t pattern) const {
    return patterns_[pattern].surface;
  }
  const std::vector<EntityRef> &candidates(size_t pattern) const {
    return patterns_[pattern].candidates;
  }
  bool fold_case() const { return fold_case_; }

 private:
  static constexpr uint32_t kNoToken = UINT32_MAX;
  static constexpr int32_t kNoPattern = -1;

  struct State {
    std::vector<std::pair<uint32_t, uint32_t>> next;  // sorted by token id
    uint32_t fail = 0;
    uint32_t output = 0;  // nearest proper suffix state with a pattern; 0 = none
    uint32_t depth = 0;
    int32_t pattern = kNoPattern;
  };

  struct PatternInfo {
    std::vector<std::string> surface;
    std::vector<EntityRef> candidates;
  };

  uint32_t TokenId(const std::string &token) const;
  uint32_t Step(uint32_t state, uint32_t token) const;
  static uint32_t Child(const State &state, uint32_t token);

  std::unordered_map<std::string, uint32_t> vocab_;
  std::vector<State> states_;
  std::vector<PatternInfo> patterns_;
  bool fold_case_ = false;
};

// Greedy leftmost-longest selection over a precomputed LongestAt vector.
std::vector<std::pair<size_t, size_t>> SelectLeftmostLongest(
    std::span<const size_t> longest);

}  // namespace kbner

#endif  // KBNER_MATCHER_H_
