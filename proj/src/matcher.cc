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

#include "kbner/matcher.h"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "kbner/errors.h"
#include "kbner/text.h"

namespace kbner {

MatchAutomaton::MatchAutomaton() : states_(1) {}

MatchAutomaton MatchAutomaton::Build(std::span<const SurfacePattern> patterns,
                                     bool fold_case) {
  std::map<std::vector<std::string>, std::set<EntityRef>> grouped;
  for (const SurfacePattern &p : patterns) {
    if (p.tokens.empty()) {
      throw ValidationError("empty surface for " + p.mid);
    }
    std::vector<std::string> key;
    key.reserve(p.tokens.size());
    for (const std::string &t : p.tokens) {
      if (t.empty()) throw ValidationError("empty token in surface for " + p.mid);
      key.push_back(fold_case ? FoldTurkishCase(t) : t);
    }
    grouped[std::move(key)].insert(EntityRef{p.mid, p.type});
  }

  MatchAutomaton automaton;
  automaton.fold_case_ = fold_case;
  for (auto &[surface, refs] : grouped) {
    const int32_t pattern_id = static_cast<int32_t>(automaton.patterns_.size());
    uint32_t state = 0;
    for (const std::string &token : surface) {
      auto [it, inserted] = automaton.vocab_.emplace(
          token, static_cast<uint32_t>(automaton.vocab_.size()));
      uint32_t id = it->second;
      uint32_t child = Child(automaton.states_[state], id);
      if (child == 0) {
        child = static_cast<uint32_t>(automaton.states_.size());
        State next;
        next.depth = automaton.states_[state].depth + 1;
        automaton.states_.push_back(std::move(next));
        auto &edges = automaton.states_[state].next;
        edges.insert(std::lower_bound(edges.begin(), edges.end(),
                                      std::make_pair(id, 0u)),
                     {id, child});
      }
      state = child;
    }
    automaton.states_[state].pattern = pattern_id;
    automaton.patterns_.push_back(
        {surface, std::vector<EntityRef>(refs.begin(), refs.end())});
  }

  std::deque<uint32_t> queue;
  for (const auto &[token, child] : automaton.states_[0].next) {
    automaton.states_[child].fail = 0;
    queue.push_back(child);
  }
  while (!queue.empty()) {
    uint32_t s = queue.front();
    queue.pop_front();
    for (const auto &[token, child] : automaton.states_[s].next) {
      uint32_t f = automaton.states_[s].fail;
      while (f != 0 && Child(automaton.states_[f], token) == 0) {
        f = automaton.states_[f].fail;
      }
      uint32_t target = Child(automaton.states_[f], token);
      State &c = automaton.states_[child];
      c.fail = target == child ? 0 : target;
      const State &fs = automaton.states_[c.fail];
      c.output = fs.pattern != kNoPattern ? c.fail : fs.output;
      queue.push_back(child);
    }
  }
  return automaton;
}

uint32_t MatchAutomaton::Child(const State &state, uint32_t token) {
  auto it = std::lower_bound(state.next.begin(), state.next.end(),
                             std::make_pair(token, 0u));
  if (it == state.next.end() || it->first != token) return 0;
  return it->second;
}

uint32_t MatchAutomaton::TokenId(const std::string &token) const {
  auto it = vocab_.find(fold_case_ ? FoldTurkishCase(token) : token);
  return it == vocab_.end() ? kNoToken : it->second;
}

uint32_t MatchAutomaton::Step(uint32_t state, uint32_t token) const {
  if (token == kNoToken) return 0;
  while (true) {
    uint32_t child = Child(states_[state], token);
    if (child != 0) return child;
    if (state == 0) return 0;
    state = states_[state].fail;
  }
}

std::vector<size_t> MatchAutomaton::LongestAt(
    std::span<const std::string> tokens) const {
  std::vector<size_t> longest(tokens.size(), 0);
  uint32_t state = 0;
  for (size_t i = 0; i < tokens.size(); ++i) {
    state = Step(state, TokenId(tokens[i]));
    uint32_t s = states_[state].pattern != kNoPattern ? state
                                                      : states_[state].output;
    while (s != 0) {
      size_t depth = states_[s].depth;
      size_t start = i + 1 - depth;
      longest[start] = std::max(longest[start], depth);
      s = states_[s].output;
    }
  }
  return longest;
}

std::vector<Match> MatchAutomaton::FindLeftmostLongest(
    std::span<const std::string> tokens) const {
  std::vector<Match> matches;
  std::vector<size_t> longest = LongestAt(tokens);
  for (const auto &[start, length] : SelectLeftmostLongest(longest)) {
    std::vector<std::string> key;
    key.reserve(length);
    for (size_t i = start; i < start + length; ++i) {
      key.push_back(fold_case_ ? FoldTurkishCase(tokens[i]) : tokens[i]);
    }
    uint32_t state = 0;
    for (const std::string &t : key) state = Child(states_[state], vocab_.at(t));
    matches.push_back({start, length, static_cast<size_t>(states_[state].pattern)});
  }
  return matches;
}

std::vector<std::pair<size_t, size_t>> SelectLeftmostLongest(
    std::span<const size_t> longest) {
  std::vector<std::pair<size_t, size_t>> out;
  size_t i = 0;
  while (i < longest.size()) {
    if (longest[i] > 0) {
      out.emplace_back(i, longest[i]);
      i += longest[i];
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace kbner
