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

#include "kbner/type_path.h"

#include <utility>
#include <vector>

#include "kbner/errors.h"

namespace kbner {

TypePath::TypePath(std::string domain, std::string type_name,
                   std::optional<std::string> property)
    : domain_(std::move(domain)),
      type_name_(std::move(type_name)),
      property_(std::move(property)) {
  if (!IsValidSegment(domain_) || !IsValidSegment(type_name_) ||
      (property_ && !IsValidSegment(*property_))) {
    throw FormatError("invalid type path " + ToString());
  }
}

bool TypePath::IsValidSegment(std::string_view segment) {
  if (segment.empty()) return false;
  for (char c : segment) {
    if (!((c >= 'a' && c <= 'z') || c == '_')) return false;
  }
  return true;
}

std::optional<TypePath> TypePath::TryParse(std::string_view text) {
  if (text.empty() || text.front() != '/') return std::nullopt;
  std::vector<std::string_view> segments;
  size_t pos = 1;
  while (true) {
    size_t slash = text.find('/', pos);
    std::string_view seg = text.substr(pos, slash == std::string_view::npos
                                                ? std::string_view::npos
                                                : slash - pos);
    if (!IsValidSegment(seg)) return std::nullopt;
    segments.push_back(seg);
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  if (segments.size() == 2) {
    return TypePath(std::string(segments[0]), std::string(segments[1]));
  }
  if (segments.size() == 3) {
    return TypePath(std::string(segments[0]), std::string(segments[1]),
                    std::string(segments[2]));
  }
  return std::nullopt;
}

TypePath TypePath::Parse(std::string_view text) {
  auto parsed = TryParse(text);
  if (!parsed) throw FormatError("invalid type path '" + std::string(text) + "'");
  return *std::move(parsed);
}

TypePath TypePath::WithDomain(std::string domain) const {
  return TypePath(std::move(domain), type_name_, property_);
}

std::string TypePath::ToString() const {
  std::string out = "/" + domain_ + "/" + type_name_;
  if (property_) out += "/" + *property_;
  return out;
}

std::string_view DomainOf(std::string_view serialized_type) {
  if (serialized_type.size() < 2 || serialized_type.front() != '/') return {};
  size_t slash = serialized_type.find('/', 1);
  if (slash == std::string_view::npos) return serialized_type.substr(1);
  return serialized_type.substr(1, slash - 1);
}

}  // namespace kbner
