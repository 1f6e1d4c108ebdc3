// Copyright 2026 The seqlab Authors.
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

#include "seqlab/oie.h"

#include <algorithm>
#include <optional>

#include "seqlab/errors.h"

namespace seqlab::oie {

using nlohmann::ordered_json;
using tagging::Span;

namespace {

using Indices = std::vector<std::size_t>;

bool IsImplicit(const TriplePart &part) {
  return std::holds_alternative<ImplicitPart>(part);
}

bool IsMissing(const TriplePart &part) {
  if (std::holds_alternative<std::monostate>(part)) return true;
  if (const auto *idx = std::get_if<Indices>(&part)) return idx->empty();
  return false;
}

Indices Normalized(const TriplePart &part) {
  Indices idx = std::get<Indices>(part);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

bool IsConsecutive(const TriplePart &part) {
  if (!std::holds_alternative<Indices>(part) || IsMissing(part)) return true;
  const Indices idx = Normalized(part);
  return idx.back() - idx.front() + 1 == idx.size();
}

void CheckBounds(const TriplePart &part, std::size_t n, std::size_t triple) {
  if (const auto *idx = std::get_if<Indices>(&part)) {
    for (std::size_t i : *idx) {
      if (i >= n) {
        throw IndexError("triple " + std::to_string(triple) +
                         " references token " + std::to_string(i) + " of a " +
                         std::to_string(n) + "-token sentence");
      }
    }
  }
}

// Half-open token interval of a consecutive, non-empty part.
Span Interval(const TriplePart &part) {
  const Indices idx = Normalized(part);
  return Span{std::string(kRelationLabel), idx.front(), idx.back() + 1};
}

}  // namespace

corpus::CorpusRecord RelationLabeling::ToRecord() const {
  return corpus::CorpusRecord(tokens,
                              tagging::EncodeTags(relations, tokens.size()));
}

RelationLabeling FilterAndMerge(std::span<const std::string> tokens,
                                std::span<const Triple> triples,
                                FilterStats *stats) {
  FilterStats local;
  FilterStats &st = stats != nullptr ? *stats : local;
  st = FilterStats{};

  const std::size_t n = tokens.size();
  for (std::size_t t = 0; t < triples.size(); ++t) {
    CheckBounds(triples[t].subject, n, t);
    CheckBounds(triples[t].relation, n, t);
    CheckBounds(triples[t].object, n, t);
  }

  std::vector<Span> candidates;
  for (const Triple &triple : triples) {
    const TriplePart *parts[] = {&triple.subject, &triple.relation,
                                 &triple.object};
    if (std::any_of(std::begin(parts), std::end(parts),
                    [](const TriplePart *p) { return IsImplicit(*p); })) {
      ++st.implicit;
      continue;
    }
    if (!std::all_of(std::begin(parts), std::end(parts),
                     [](const TriplePart *p) { return IsConsecutive(*p); })) {
      ++st.non_consecutive;
      continue;
    }
    if (std::any_of(std::begin(parts), std::end(parts),
                    [](const TriplePart *p) { return IsMissing(*p); })) {
      ++st.incomplete;
      continue;
    }
    const Span subject = Interval(triple.subject);
    const Span relation = Interval(triple.relation);
    const Span object = Interval(triple.object);
    if (relation.size() > kMaxRelationTokens) {
      ++st.long_relation;
      continue;
    }
    if (!(subject.end <= relation.start && relation.end <= object.start)) {
      ++st.out_of_order;
      continue;
    }
    candidates.push_back(relation);
  }

  // Largest first; earliest start breaks ties. Intervals with equal size
  // and start are identical, i.e. duplicates.
  std::sort(candidates.begin(), candidates.end(),
            [](const Span &a, const Span &b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a.start < b.start;
            });
  const auto last = std::unique(candidates.begin(), candidates.end());
  st.duplicates = static_cast<std::size_t>(candidates.end() - last);
  candidates.erase(last, candidates.end());

  RelationLabeling labeling;
  labeling.tokens.assign(tokens.begin(), tokens.end());
  std::vector<bool> claimed(n, false);
  for (const Span &rel : candidates) {
    bool free = true;
    for (std::size_t i = rel.start; i < rel.end && free; ++i) {
      free = !claimed[i];
    }
    if (!free) {
      ++st.merged_away;
      continue;
    }
    std::fill(claimed.begin() + static_cast<std::ptrdiff_t>(rel.start),
              claimed.begin() + static_cast<std::ptrdiff_t>(rel.end), true);
    labeling.relations.push_back(rel);
  }
  std::sort(labeling.relations.begin(), labeling.relations.end());
  st.kept = labeling.relations.size();
  return labeling;
}

RelationStats CountRelations(std::span<const RelationLabeling> labelings) {
  RelationStats stats;
  for (const RelationLabeling &l : labelings) {
    ++stats.sentences_total;
    if (!l.relations.empty()) ++stats.sentences_with_relations;
  }
  return stats;
}

namespace {

TriplePart PartFromJson(const ordered_json &json, const std::string &name) {
  auto it = json.find(name);
  if (it == json.end() || it->is_null()) return std::monostate{};
  if (it->is_array()) {
    Indices idx;
    for (const auto &v : *it) {
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ParseError(
            0, std::string(name) + " must hold non-negative token indices");
      }
      idx.push_back(v.get<std::size_t>());
    }
    return idx;
  }
  if (it->is_object() && it->contains("implicit") &&
      it->at("implicit").is_string()) {
    return ImplicitPart{it->at("implicit").get<std::string>()};
  }
  throw ParseError(
      0, std::string(name) + " must be an index array or {\"implicit\": text}");
}

ordered_json PartToJson(const TriplePart &part) {
  if (const auto *idx = std::get_if<Indices>(&part)) return *idx;
  if (const auto *imp = std::get_if<ImplicitPart>(&part)) {
    return {{"implicit", imp->text}};
  }
  return nullptr;
}

}  // namespace

TripleRecord TripleRecordFromJson(const ordered_json &json) {
  if (!json.is_object()) throw ParseError(0, "record is not a JSON object");
  TripleRecord record;
  try {
    record.tokens = json.at("tokens").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(0, std::string("bad tokens field: ") + e.what());
  }
  auto it = json.find("triples");
  if (it == json.end() || it->is_null()) return record;
  if (!it->is_array()) throw ParseError(0, "triples must be an array");
  for (const auto &t : *it) {
    if (!t.is_object()) throw ParseError(0, "each triple must be an object");
    record.triples.push_back(Triple{PartFromJson(t, "subject"),
                                    PartFromJson(t, "relation"),
                                    PartFromJson(t, "object")});
  }
  return record;
}

ordered_json TripleRecordToJson(const TripleRecord &record) {
  ordered_json triples = ordered_json::array();
  for (const Triple &t : record.triples) {
    triples.push_back({{"subject", PartToJson(t.subject)},
                       {"relation", PartToJson(t.relation)},
                       {"object", PartToJson(t.object)}});
  }
  return {{"tokens", record.tokens}, {"triples", std::move(triples)}};
}

}  // namespace seqlab::oie
