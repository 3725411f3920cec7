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

#include "kbner/kb.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kbner/errors.h"
#include "kbner/gazetteer.h"
#include "kbner/hash.h"

namespace kbner {
namespace {

using nlohmann::json;

constexpr std::string_view kSnapshotHeader = "#kbsnap v1";

std::string RequireString(const json &obj, const char *key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw FormatError(std::string("missing or non-string field '") + key + "'");
  }
  return it->get<std::string>();
}

std::vector<std::string> StringList(const json &obj, const char *key) {
  auto it = obj.find(key);
  if (it == obj.end()) return {};
  if (!it->is_array()) {
    throw FormatError(std::string("field '") + key + "' is not a list");
  }
  std::vector<std::string> out;
  for (const json &v : *it) {
    if (!v.is_string()) {
      throw FormatError(std::string("non-string item in '") + key + "'");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::optional<std::string> OptionalString(const json &obj, const char *key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw FormatError(std::string("field '") + key + "' is not a string");
  }
  return it->get<std::string>();
}

EntityRecord ParseRecord(const json &obj) {
  EntityRecord rec;
  rec.mid = RequireString(obj, "mid");
  if (rec.mid.empty()) throw FormatError("empty mid");
  rec.language = obj.contains("lang") ? RequireString(obj, "lang") : "";
  rec.canonical_name = RequireString(obj, "name");
  if (rec.canonical_name.empty()) {
    throw FormatError("empty name for " + rec.mid);
  }
  for (std::string &alias : StringList(obj, "aliases")) {
    if (alias.empty() || alias == rec.canonical_name) continue;
    if (std::find(rec.aliases.begin(), rec.aliases.end(), alias) !=
        rec.aliases.end()) {
      continue;
    }
    rec.aliases.push_back(std::move(alias));
  }
  for (const std::string &type : StringList(obj, "types")) {
    TypePath path = TypePath::Parse(type);
    if (path.has_property()) {
      throw FormatError("type " + type + " carries a property segment");
    }
    rec.types.push_back(std::move(path));
  }
  auto rels = obj.find("relations");
  if (rels != obj.end()) {
    if (!rels->is_array()) throw FormatError("field 'relations' is not a list");
    for (const json &r : *rels) {
      if (!r.is_object()) throw FormatError("relation is not an object");
      TypePath predicate = TypePath::Parse(RequireString(r, "predicate"));
      if (!predicate.has_property()) {
        throw FormatError("predicate " + predicate.ToString() +
                          " lacks a property segment");
      }
      bool has_mid = r.contains("target_mid");
      bool has_literal = r.contains("literal");
      if (has_mid == has_literal) {
        throw FormatError("relation needs exactly one of target_mid, literal");
      }
      RelationEdge edge{std::move(predicate),
                        has_mid ? TargetKind::kMid : TargetKind::kLiteral,
                        RequireString(r, has_mid ? "target_mid" : "literal")};
      rec.relations.push_back(std::move(edge));
    }
  }
  rec.description = OptionalString(obj, "description");
  rec.article_key = OptionalString(obj, "article_key");
  return rec;
}

void ValidateMergeMap(const std::map<std::string, std::string> &merge_map) {
  for (const auto &[from, into] : merge_map) {
    if (!TypePath::IsValidSegment(from) || !TypePath::IsValidSegment(into)) {
      throw FormatError("invalid domain in merge " + from + " -> " + into);
    }
    if (merge_map.count(into)) {
      throw FormatError("cyclic domain merge: " + from + " -> " + into +
                        " and " + into + " is itself merged");
    }
  }
}

std::string MergedDomain(const std::map<std::string, std::string> &merge_map,
                         const std::string &domain) {
  auto it = merge_map.find(domain);
  return it == merge_map.end() ? domain : it->second;
}

}  // namespace

const EntityRecord *KnowledgeSnapshot::Find(std::string_view mid) const {
  auto it = entities_.find(std::string(mid));
  return it == entities_.end() ? nullptr : &it->second;
}

const EntityRecord &KnowledgeSnapshot::Get(std::string_view mid) const {
  const EntityRecord *rec = Find(mid);
  if (rec == nullptr) throw NotFoundError("unknown mid " + std::string(mid));
  return *rec;
}

void KnowledgeSnapshot::RecountDangling() {
  dangling_ = 0;
  for (const auto &[mid, rec] : entities_) {
    for (const RelationEdge &edge : rec.relations) {
      if (edge.is_mid() && !entities_.count(edge.target)) ++dangling_;
    }
  }
}

KnowledgeSnapshot KnowledgeSnapshot::FromRecords(
    std::vector<EntityRecord> records,
    std::map<std::string, std::string> merge_map) {
  ValidateMergeMap(merge_map);
  KnowledgeSnapshot snapshot;
  snapshot.merge_map_ = std::move(merge_map);
  for (EntityRecord &rec : records) {
    std::string mid = rec.mid;
    if (!snapshot.entities_.emplace(mid, std::move(rec)).second) {
      throw FormatError("duplicate mid " + mid);
    }
  }
  ApplyDomainMerge(snapshot);
  return snapshot;
}

KnowledgeSnapshot ParseSnapshotText(std::string_view text,
                                    std::string source_id) {
  KnowledgeSnapshot snapshot;
  snapshot.source_id_ =
      source_id.empty() ? HexDigest(Fnv1a64(text)) : std::move(source_id);
  if (text.empty()) return snapshot;

  size_t line_no = 0;
  size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                       : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != kSnapshotHeader) {
        throw FormatError("expected '#kbsnap v1' header", line_no);
      }
      header_seen = true;
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      json obj = json::parse(line);
      if (!obj.is_object()) throw FormatError("record is not an object");
      if (obj.contains("merge_domain")) {
        std::string from = RequireString(obj, "merge_domain");
        std::string into = RequireString(obj, "into");
        auto [it, inserted] = snapshot.merge_map_.emplace(from, into);
        if (!inserted && it->second != into) {
          throw FormatError("conflicting merge for domain " + from);
        }
        continue;
      }
      EntityRecord rec = ParseRecord(obj);
      std::string mid = rec.mid;
      if (!snapshot.entities_.emplace(mid, std::move(rec)).second) {
        throw FormatError("duplicate mid " + mid);
      }
    } catch (const json::exception &e) {
      throw FormatError(std::string("malformed record: ") + e.what(), line_no);
    } catch (const FormatError &e) {
      if (e.line() != 0) throw;
      throw FormatError(e.what(), line_no);
    }
  }
  ValidateMergeMap(snapshot.merge_map_);
  ApplyDomainMerge(snapshot);
  return snapshot;
}

KnowledgeSnapshot ParseSnapshot(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open snapshot " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return ParseSnapshotText(text);
}

void SerializeSnapshot(const KnowledgeSnapshot &snapshot, std::ostream &out) {
  out << kSnapshotHeader << '\n';
  for (const auto &[from, into] : snapshot.domain_merge_map()) {
    nlohmann::ordered_json obj;
    obj["merge_domain"] = from;
    obj["into"] = into;
    out << obj.dump() << '\n';
  }
  for (const auto &[mid, rec] : snapshot.entities()) {
    nlohmann::ordered_json obj;
    obj["mid"] = rec.mid;
    obj["lang"] = rec.language;
    obj["name"] = rec.canonical_name;
    obj["aliases"] = rec.aliases;
    nlohmann::ordered_json types = nlohmann::ordered_json::array();
    for (const TypePath &t : rec.types) types.push_back(t.ToString());
    obj["types"] = std::move(types);
    nlohmann::ordered_json rels = nlohmann::ordered_json::array();
    for (const RelationEdge &edge : rec.relations) {
      nlohmann::ordered_json r;
      r["predicate"] = edge.predicate.ToString();
      r[edge.is_mid() ? "target_mid" : "literal"] = edge.target;
      rels.push_back(std::move(r));
    }
    obj["relations"] = std::move(rels);
    if (rec.description) obj["description"] = *rec.description;
    if (rec.article_key) obj["article_key"] = *rec.article_key;
    out << obj.dump() << '\n';
  }
}

void ApplyDomainMerge(KnowledgeSnapshot &snapshot) {
  const auto &merge_map = snapshot.merge_map_;
  for (auto &[mid, rec] : snapshot.entities_) {
    std::vector<TypePath> merged;
    for (const TypePath &t : rec.types) {
      TypePath m = t.WithDomain(MergedDomain(merge_map, t.domain()));
      if (std::find(merged.begin(), merged.end(), m) == merged.end()) {
        merged.push_back(std::move(m));
      }
    }
    rec.types = std::move(merged);
    for (RelationEdge &edge : rec.relations) {
      edge.predicate = edge.predicate.WithDomain(
          MergedDomain(merge_map, edge.predicate.domain()));
    }
  }
  snapshot.RecountDangling();
}

const std::vector<RelationEdge> &FirstOrderRelations(
    const KnowledgeSnapshot &snapshot, std::string_view mid) {
  return snapshot.Get(mid).relations;
}

std::vector<std::string> FirstOrderEntities(const KnowledgeSnapshot &snapshot,
                                            std::string_view mid) {
  std::vector<std::string> out;
  for (const RelationEdge &edge : snapshot.Get(mid).relations) {
    if (!edge.is_mid() || snapshot.Find(edge.target) == nullptr) continue;
    if (std::find(out.begin(), out.end(), edge.target) == out.end()) {
      out.push_back(edge.target);
    }
  }
  return out;
}

std::vector<std::pair<std::string, TypePath>> SecondOrderEntities(
    const KnowledgeSnapshot &snapshot, std::string_view mid) {
  std::vector<std::string> first = FirstOrderEntities(snapshot, mid);
  std::set<std::string> first_set(first.begin(), first.end());
  std::set<std::string> second;
  for (const std::string &f : first) {
    for (const RelationEdge &edge : snapshot.Get(f).relations) {
      if (!edge.is_mid() || edge.target == mid || first_set.count(edge.target)) {
        continue;
      }
      const EntityRecord *target = snapshot.Find(edge.target);
      if (target == nullptr || target->types.empty()) continue;
      second.insert(edge.target);
    }
  }
  std::vector<std::pair<std::string, TypePath>> out;
  for (const std::string &m : second) {
    out.emplace_back(m, ResolveEntityType(snapshot, m));
  }
  return out;
}

}  // namespace kbner
