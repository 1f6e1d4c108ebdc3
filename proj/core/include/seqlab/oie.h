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

// Turns raw subject-relation-object extractions into silver relation labels.
//
// Filtering runs in a fixed order:
//   1. drop triples with an implicit part (text not in the sentence),
//   2. drop triples with a non-consecutive subject, relation or object,
//   3. drop incomplete triples,
//   4. drop relations longer than kMaxRelationTokens,
//   5. drop triples not in subject < relation < object order,
//   6. merge: relations that share tokens keep only the longest one,
//   7. keep relations only, without duplicates.
// A sentence that loses all relations is kept as an all-O example.

#ifndef SEQLAB_OIE_H_
#define SEQLAB_OIE_H_

#include <cstddef>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "seqlab/corpus.h"
#include "seqlab/tagging.h"

namespace seqlab::oie {

inline constexpr std::size_t kMaxRelationTokens = 5;
inline constexpr std::string_view kRelationLabel = "Relation";

// Text the extractor injected that is not present in the sentence.
struct ImplicitPart {
  std::string text;
  friend bool operator==(const ImplicitPart &, const ImplicitPart &) = default;
};

// Missing (monostate), token indices into the sentence, or implicit.
using TriplePart =
    std::variant<std::monostate, std::vector<std::size_t>, ImplicitPart>;

struct Triple {
  TriplePart subject;
  TriplePart relation;
  TriplePart object;
  friend bool operator==(const Triple &, const Triple &) = default;
};

struct RelationLabeling {
  std::vector<std::string> tokens;
  // Sorted, pairwise disjoint, labeled kRelationLabel.
  std::vector<tagging::Span> relations;

  // IOB2 over {B-Relation, I-Relation, O}.
  corpus::CorpusRecord ToRecord() const;
};

// Triples removed at each filtering stage; useful for corpus diagnostics.
struct FilterStats {
  std::size_t implicit = 0;
  std::size_t non_consecutive = 0;
  std::size_t incomplete = 0;
  std::size_t long_relation = 0;
  std::size_t out_of_order = 0;
  std::size_t merged_away = 0;
  std::size_t duplicates = 0;
  std::size_t kept = 0;
};

// Throws IndexError if any index is outside the sentence.
RelationLabeling FilterAndMerge(std::span<const std::string> tokens,
                                std::span<const Triple> triples,
                                FilterStats *stats = nullptr);

struct RelationStats {
  std::size_t sentences_total = 0;
  std::size_t sentences_with_relations = 0;
  friend bool operator==(const RelationStats &,
                         const RelationStats &) = default;
};

RelationStats CountRelations(std::span<const RelationLabeling> labelings);

// {"tokens":[...], "triples":[{"subject":[...]|{"implicit":"text"},
//  "relation":..., "object":...}]}. A missing or null part is incomplete.
struct TripleRecord {
  std::vector<std::string> tokens;
  std::vector<Triple> triples;
};

// Throws ParseError (line 0) on schema violations.
TripleRecord TripleRecordFromJson(const nlohmann::ordered_json &json);
nlohmann::ordered_json TripleRecordToJson(const TripleRecord &record);

}  // namespace seqlab::oie

#endif  // SEQLAB_OIE_H_
