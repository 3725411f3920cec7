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

#ifndef KBNER_UTF8_H_
#define KBNER_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kbner::utf8 {

struct CodePoint {
  char32_t value;
  size_t offset;  // byte offset of the first code unit
  size_t length;  // number of bytes
};

// Decodes UTF-8. Malformed bytes decode to U+FFFD one byte at a time.
std::vector<CodePoint> Decode(std::string_view text);

void Append(std::string &out, char32_t cp);

inline std::string Encode(char32_t cp) {
  std::string out;
  Append(out, cp);
  return out;
}

}  // namespace kbner::utf8

#endif  // KBNER_UTF8_H_
