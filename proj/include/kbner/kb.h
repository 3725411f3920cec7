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

#ifndef KBNER_KB_H_
#define KBNER_KB_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kbner/type_path.h"

namespace kbner {

enum class TargetKind { kMid, kLiteral };

// A typed edge out of an entity. The predicate always carries a property
// segment; the target is either another entity's mid or a verbatim literal.
struct RelationEdge {
  TypePath predicate;
  TargetKind kind = TargetKind::kLiteral;
  std::string target;

  bool is_mid() const { return kind == TargetKind::kMid; }
  bool operator==(const RelationEdge &) const = default;
};

struct EntityRecord {
  std::string mid;
  std::string language;
  std::string canonical_name;
  std::vector<std::string> aliases;
  std::vector<TypePath> types;  // no property segment
  std::vector<RelationEdge> relations;
  std::optional<std::string> description;
  std::optional<std::string> article_key;

  bool operator==(const EntityRecord &) const = default;
};

// An immutable, mid-keyed view of a knowledge-base dump. Domain merges have
// already been applied to every type and predicate.
class KnowledgeSnapshot {
 public:
  KnowledgeSnapshot() = default;

  const std::map<std::string, EntityRecord> &entities() const {
    return entities_;
  }
  const std::map<std::string, std::string> &domain_merge_map() const {
    return merge_map_;
  }
  size_t size() const { return entities_.size(); }
  bool empty() const { return entities_.empty(); }

  // Number of mid-valued relation targets that do not resolve.
  size_t dangling_count() const { return dangling_; }

  // Fingerprint of the source bytes (FNV-1a, hex). Empty when built in
  // memory.
  const std::string &source_id() const { return source_id_; }

  const EntityRecord *Find(std::string_view mid) const;
  // Throws NotFoundError.
  const EntityRecord &Get(std::string_view mid) const;

  bool operator==(const KnowledgeSnapshot &other) const {
    return entities_ == other.entities_ && merge_map_ == other.merge_map_;
  }

  // Builds a snapshot from records. Validates the same invariants as the
  // parser (unique mids, acyclic merge map) and applies the merge map.
  static KnowledgeSnapshot FromRecords(
      std::vector<EntityRecord> records,
      std::map<std::string, std::string> merge_map = {});

 private:
  friend KnowledgeSnapshot ParseSnapshotText(std::string_view, std::string);
  friend void ApplyDomainMerge(KnowledgeSnapshot &);

  void RecountDangling();

  std::map<std::string, EntityRecord> entities_;
  std::map<std::string, std::string> merge_map_;
  size_t dangling_ = 0;
  std::string source_id_;
};

// Reads a "#kbsnap v1" file. Throws FormatError (with line number) on
// malformed records, duplicate mids or a cyclic merge map.
KnowledgeSnapshot ParseSnapshot(const std::filesystem::path &path);
KnowledgeSnapshot ParseSnapshotText(std::string_view text,
                                    std::string source_id = {});

void SerializeSnapshot(const KnowledgeSnapshot &snapshot, std::ostream &out);

// Rewrites every type and predicate domain through the merge map. Idempotent.
void ApplyDomainMerge(KnowledgeSnapshot &snapshot);

// Relations of `mid` in input order. Throws NotFoundError.
const std::vector<RelationEdge> &FirstOrderRelations(
    const KnowledgeSnapshot &snapshot, std::string_view mid);

// Mids of resolvable first-order targets, deduplicated, in first-seen order.
std::vector<std::string> FirstOrderEntities(const KnowledgeSnapshot &snapshot,
                                            std::string_view mid);

// Entities exactly two mid-hops away, excluding the start and every
// first-order target, sorted by mid and paired with their resolved type.
// Entities without any declared type are left out. Throws NotFoundError.
std::vector<std::pair<std::string, TypePath>> SecondOrderEntities(
    const KnowledgeSnapshot &snapshot, std::string_view mid);

}  // namespace kbner

#endif  // KBNER_KB_H_
