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

#include "kbner/gazetteer.h"

#include <algorithm>
#include <tuple>

#include "kbner/errors.h"

namespace kbner {
namespace {

bool HasTypeInDomain(const EntityRecord &rec, const std::string &domain) {
  return std::any_of(rec.types.begin(), rec.types.end(),
                     [&](const TypePath &t) { return t.domain() == domain; });
}

bool Supports(const KnowledgeSnapshot &snapshot, const RelationEdge &edge,
              const std::string &domain) {
  if (edge.predicate.domain() == domain) return true;
  if (!edge.is_mid()) return false;
  const EntityRecord *target = snapshot.Find(edge.target);
  return target != nullptr && HasTypeInDomain(*target, domain);
}

size_t CountSupport(const KnowledgeSnapshot &snapshot,
                    const std::vector<RelationEdge> &edges,
                    const std::string &domain) {
  return static_cast<size_t>(
      std::count_if(edges.begin(), edges.end(), [&](const RelationEdge &e) {
        return Supports(snapshot, e, domain);
      }));
}

}  // namespace

TypePath ResolveEntityType(const KnowledgeSnapshot &snapshot,
                           std::string_view mid) {
  const EntityRecord &rec = snapshot.Get(mid);
  if (rec.types.empty()) {
    throw ValidationError("entity " + rec.mid + " has no declared type");
  }
  const TypePath *best = nullptr;
  std::tuple<size_t, size_t, std::string> best_key;
  for (const TypePath &type : rec.types) {
    const std::string &domain = type.domain();
    size_t first = CountSupport(snapshot, rec.relations, domain);
    size_t second = 0;
    for (const RelationEdge &edge : rec.relations) {
      if (!edge.is_mid()) continue;
      const EntityRecord *target = snapshot.Find(edge.target);
      if (target == nullptr) continue;
      second += CountSupport(snapshot, target->relations, domain);
    }
    std::string serialized = type.ToString();
    bool better = best == nullptr || first > std::get<0>(best_key) ||
                  (first == std::get<0>(best_key) &&
                   (second > std::get<1>(best_key) ||
                    (second == std::get<1>(best_key) &&
                     serialized < std::get<2>(best_key))));
    if (better) {
      best = &type;
      best_key = {first, second, std::move(serialized)};
    }
  }
  return *best;
}

const GazetteerEntry *Gazetteer::Find(std::string_view mid) const {
  auto it = entries_.find(mid);
  return it == entries_.end() ? nullptr : &it->second;
}

const std::vector<std::string> &Gazetteer::Lookup(
    const Surface &surface) const {
  static const std::vector<std::string> kEmpty;
  auto it = surface_index_.find(surface);
  return it == surface_index_.end() ? kEmpty : it->second;
}

Gazetteer BuildGazetteer(const KnowledgeSnapshot &snapshot,
                         const Tokenizer &tokenizer) {
  Gazetteer gazetteer;
  for (const auto &[mid, rec] : snapshot.entities()) {
    if (rec.types.empty()) {
      ++gazetteer.skipped_;
      continue;
    }
    GazetteerEntry entry{mid, ResolveEntityType(snapshot, mid), {}, {}};
    entry.domain = entry.resolved_type.domain();
    std::vector<const std::string *> names = {&rec.canonical_name};
    for (const std::string &alias : rec.aliases) names.push_back(&alias);
    for (const std::string *name : names) {
      Surface surface;
      for (const Token &token : tokenizer(*name)) surface.push_back(token.text);
      if (surface.empty()) continue;
      if (std::find(entry.surfaces.begin(), entry.surfaces.end(), surface) !=
          entry.surfaces.end()) {
        continue;
      }
      entry.surfaces.push_back(std::move(surface));
    }
    for (const Surface &surface : entry.surfaces) {
      gazetteer.surface_index_[surface].push_back(mid);
    }
    gazetteer.entries_.emplace(mid, std::move(entry));
  }
  return gazetteer;
}

void WriteGazetteer(const Gazetteer &gazetteer, std::ostream &out) {
  for (const auto &[mid, entry] : gazetteer.entries()) {
    out << mid << '\t' << entry.resolved_type.ToString();
    for (const Surface &surface : entry.surfaces) {
      out << '\t';
      for (size_t i = 0; i < surface.size(); ++i) {
        if (i > 0) out << ' ';
        out << surface[i];
      }
    }
    out << '\n';
  }
}

}  // namespace kbner
