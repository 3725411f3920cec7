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

#include "kbner/iob.h"

namespace kbner {

std::string_view TagLabel(std::string_view tag) {
  if (tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-') {
    return tag.substr(2);
  }
  return {};
}

bool IsBeginTag(std::string_view tag) {
  return tag.size() > 2 && tag[0] == 'B' && tag[1] == '-';
}

bool IsInsideTag(std::string_view tag) {
  return tag.size() > 2 && tag[0] == 'I' && tag[1] == '-';
}

bool IsWellFormedTag(std::string_view tag) {
  return tag == kOutsideTag || IsBeginTag(tag) || IsInsideTag(tag);
}

bool IsValidIob(std::span<const std::string> tags) {
  for (size_t i = 0; i < tags.size(); ++i) {
    if (!IsWellFormedTag(tags[i])) return false;
    if (IsInsideTag(tags[i]) &&
        (i == 0 || TagLabel(tags[i - 1]) != TagLabel(tags[i]))) {
      return false;
    }
  }
  return true;
}

std::vector<Span> ExtractSpans(std::span<const std::string> tags) {
  std::vector<Span> spans;
  size_t i = 0;
  while (i < tags.size()) {
    if (!IsBeginTag(tags[i])) {
      ++i;
      continue;
    }
    std::string_view label = TagLabel(tags[i]);
    size_t j = i + 1;
    while (j < tags.size() && IsInsideTag(tags[j]) && TagLabel(tags[j]) == label) {
      ++j;
    }
    spans.push_back({i, j, std::string(label)});
    i = j;
  }
  return spans;
}

std::vector<std::string> StripIob(std::span<const std::string> tags) {
  std::vector<std::string> out;
  out.reserve(tags.size());
  for (const std::string &tag : tags) {
    std::string_view label = TagLabel(tag);
    out.emplace_back(label.empty() ? kOutsideTag : label);
  }
  return out;
}

void TagSpan(std::vector<std::string> &tags, size_t begin, size_t end,
             std::string_view label) {
  for (size_t i = begin; i < end; ++i) {
    tags[i] = (i == begin ? "B-" : "I-") + std::string(label);
  }
}

void RepairIob(std::vector<std::string> &tags) {
  for (size_t i = 0; i < tags.size(); ++i) {
    if (IsInsideTag(tags[i]) &&
        (i == 0 || TagLabel(tags[i - 1]) != TagLabel(tags[i]))) {
      tags[i][0] = 'B';
    }
  }
}

}  // namespace kbner
