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

#ifndef KBNER_IOB_H_
#define KBNER_IOB_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kbner {

inline constexpr std::string_view kOutsideTag = "O";

struct Span {
  size_t begin = 0;
  size_t end = 0;  // exclusive
  std::string label;

  bool operator==(const Span &) const = default;
};

// Label of a tag without its B-/I- prefix; empty for "O".
std::string_view TagLabel(std::string_view tag);
bool IsBeginTag(std::string_view tag);
bool IsInsideTag(std::string_view tag);

// True for "O", "B-x" and "I-x" with non-empty x.
bool IsWellFormedTag(std::string_view tag);

// Every tag well formed and every I-x preceded by B-x or I-x.
bool IsValidIob(std::span<const std::string> tags);

// Maximal B-x (I-x)* runs. Assumes valid IOB.
std::vector<Span> ExtractSpans(std::span<const std::string> tags);

// Per-token labels with prefixes removed ("O" kept).
std::vector<std::string> StripIob(std::span<const std::string> tags);

// Writes B-label, I-label... over [begin, end).
void TagSpan(std::vector<std::string> &tags, size_t begin, size_t end,
             std::string_view label);

// Turns every orphan I-x into B-x.
void RepairIob(std::vector<std::string> &tags);

}  // namespace kbner

#endif  // KBNER_IOB_H_
