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

#ifndef KBNER_GAZETTEER_H_
#define KBNER_GAZETTEER_H_

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kbner/kb.h"
#include "kbner/text.h"
#include "kbner/type_path.h"

namespace kbner {

using Surface = std::vector<std::string>;

struct GazetteerEntry {
  std::string mid;
  TypePath resolved_type;
  std::vector<Surface> surfaces;  // canonical name first, then aliases
  std::string domain;
};

class Gazetteer {
 public:
  const std::map<std::string, GazetteerEntry, std::less<>> &entries() const {
    return entries_;
  }
  const std::map<Surface, std::vector<std::string>> &surface_index() const {
    return surface_index_;
  }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Entities left out because they had no declared type.
  size_t skipped() const { return skipped_; }

  const GazetteerEntry *Find(std::string_view mid) const;
  // Every mid sharing the surface, sorted. Empty when unknown.
  const std::vector<std::string> &Lookup(const Surface &surface) const;

 private:
  friend Gazetteer BuildGazetteer(const KnowledgeSnapshot &,
                                  const Tokenizer &);

  std::map<std::string, GazetteerEntry, std::less<>> entries_;
  std::map<Surface, std::vector<std::string>> surface_index_;
  size_t skipped_ = 0;
};

// Picks the declared type best supported by the entity's relations.
//
// An edge supports a domain when its predicate lives in that domain or when
// its mid target declares a type in that domain. Candidates are ranked by the
// number of supporting first-order edges, then by supporting edges one hop
// further out, then by the serialized path. Throws NotFoundError for an
// unknown mid and ValidationError for an entity without types.
TypePath ResolveEntityType(const KnowledgeSnapshot &snapshot,
                           std::string_view mid);

Gazetteer BuildGazetteer(const KnowledgeSnapshot &snapshot,
                         const Tokenizer &tokenizer = Tokenize);

// One line per entry: mid TAB type TAB surface [TAB surface...], surfaces
// space-joined. For inspection only.
void WriteGazetteer(const Gazetteer &gazetteer, std::ostream &out);

}  // namespace kbner

#endif  // KBNER_GAZETTEER_H_
