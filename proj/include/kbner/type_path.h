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

#ifndef KBNER_TYPE_PATH_H_
#define KBNER_TYPE_PATH_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace kbner {

// A knowledge-base schema path: /domain/type or /domain/type/property.
// Segments are non-empty and consist of lowercase ASCII letters and '_'.
class TypePath {
 public:
  TypePath(std::string domain, std::string type_name,
           std::optional<std::string> property = std::nullopt);

  // Throws FormatError on malformed input.
  static TypePath Parse(std::string_view text);
  static std::optional<TypePath> TryParse(std::string_view text);

  static bool IsValidSegment(std::string_view segment);

  const std::string &domain() const { return domain_; }
  const std::string &type_name() const { return type_name_; }
  const std::optional<std::string> &property() const { return property_; }
  bool has_property() const { return property_.has_value(); }

  // The /domain/type prefix of this path.
  TypePath WithoutProperty() const { return TypePath(domain_, type_name_); }
  TypePath WithDomain(std::string domain) const;

  std::string ToString() const;

  // Field order matches the byte order of the serialized form because '/'
  // sorts before every legal segment character.
  auto operator<=>(const TypePath &) const = default;
  bool operator==(const TypePath &) const = default;

 private:
  std::string domain_;
  std::string type_name_;
  std::optional<std::string> property_;
};

// Domain segment of a serialized type string such as a tag label; empty when
// the string is not a path.
std::string_view DomainOf(std::string_view serialized_type);

}  // namespace kbner

#endif  // KBNER_TYPE_PATH_H_
