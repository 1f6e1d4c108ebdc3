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

// Fine-tuning prompts with in-context demonstrations and the
// response-oriented loss objectives computed over them.
//
// Layout of a rendered prompt (blocks joined by '\n'):
//
//   ### Instruction:\n{instruction}\n### Options:\n{a, b, c}     (optional)
//   ### Sentence:\n{sentence}[\n### Verb:\n{verb}]\n### Response:\n{response}
//   ...one block per demonstration...
//   ### Sentence:\n{query}[\n### Verb:\n{verb}]\n### Response:\n{query
//   response}<eos>
//
// Evaluation prompts stop right after the last "### Response:\n".
//
// Objectives, as token masks over one prompt:
//   vanilla  every token,
//   SRC      only query-response tokens (QR, including <eos>),
//   MRC      QR plus every demonstration-response token (DR).

#ifndef SEQLAB_PROMPTS_H_
#define SEQLAB_PROMPTS_H_

#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqlab/corpus.h"

namespace seqlab::prompts {

inline constexpr std::string_view kInstructionHeader = "### Instruction:";
inline constexpr std::string_view kOptionsHeader = "### Options:";
inline constexpr std::string_view kSentenceHeader = "### Sentence:";
inline constexpr std::string_view kVerbHeader = "### Verb:";
inline constexpr std::string_view kResponseHeader = "### Response:";
inline constexpr std::string_view kDefaultEos = "<eos>";
inline constexpr std::string_view kNoSpans = "NA";

// Renders the gold response of a record: `span text:class` pairs joined by
// ';' in sentence order, or "NA" without spans. Throws ReservedCharError if
// a span's text contains ':', ';' or a newline.
std::string RenderResponse(const corpus::CorpusRecord &record);
std::string RenderResponse(std::span<const std::string> tokens,
                           std::span<const tagging::Span> spans);

struct PromptExample {
  std::string sentence;
  std::optional<std::string> verb;
  std::string response;
};

// Space-joined tokens, the verb at verb_index (if any) and the rendered
// response.
PromptExample ExampleFromRecord(const corpus::CorpusRecord &record);

struct PromptSpec {
  std::optional<std::string> instruction;
  std::vector<std::string> options;
  std::vector<PromptExample> demonstrations;
  PromptExample query;
  // Training prompts end with the query response and the eos marker.
  bool include_query_response = true;
  bool verb_field = false;
  std::string eos = std::string(kDefaultEos);
};

enum class RegionKind {
  kInstruction,
  kDemonstrationExample,
  kDemonstrationResponse,
  kQueryExample,
  kQueryResponse,
};

std::string_view RegionKindName(RegionKind kind);
RegionKind ParseRegionKind(std::string_view name);

// Byte interval [start, end) of layout.text.
struct Region {
  RegionKind kind;
  // Demonstration number for demonstration regions, otherwise -1.
  int index = -1;
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const Region &, const Region &) = default;
};

struct PromptLayout {
  std::string text;
  // Disjoint, ordered by start.
  std::vector<Region> regions;
  bool eos_included = false;

  const Region *query_response() const;
  friend bool operator==(const PromptLayout &, const PromptLayout &) = default;
};

// Throws SpecError on missing or reserved content: header markers or the
// eos marker inside user text, empty sentences or responses, a missing verb
// when verb_field is set, option names with ':' or ';'.
PromptLayout BuildPrompt(const PromptSpec &spec);

nlohmann::ordered_json LayoutToJson(const PromptLayout &layout);
PromptLayout LayoutFromJson(const nlohmann::ordered_json &json);

// Byte offsets [start, end) of each token of a tokenization of layout.text.
using TokenOffsets = std::vector<std::pair<std::size_t, std::size_t>>;

// Whitespace-delimited words plus each newline as its own token. Only a
// stand-in for a real subword tokenizer; enough to drive the CLI.
TokenOffsets SimpleTokenize(std::string_view text);

// Per-token membership, assigned by overlap with the character regions.
struct TokenRegions {
  std::vector<bool> query_response;
  std::vector<bool> demonstration_response;
  // Index into layout.regions for every region each token overlaps.
  std::vector<std::vector<std::size_t>> regions;

  std::size_t size() const { return query_response.size(); }
};

TokenRegions ProjectRegions(const PromptLayout &layout,
                            const TokenOffsets &offsets);

enum class Objective { kVanilla, kSrc, kMrc };
enum class Reduction { kSum, kMean };

std::string_view ObjectiveName(Objective objective);
Objective ParseObjective(std::string_view name);
Reduction ParseReduction(std::string_view name);

// Realized log-probabilities, possibly left-padded. Non-pad positions align
// one to one with the prompt tokens.
struct TokenLogProbs {
  std::vector<double> logprobs;
  // Empty means no padding.
  std::vector<bool> pad_mask;
};

struct LossResult {
  double value = 0.0;
  // Number of non-pad tokens selected by the objective.
  std::size_t selected = 0;
  // Set when the objective selected no token; value is then 0.
  bool empty_selection = false;
};

// Per-token selection flags of an objective.
std::vector<bool> ObjectiveMask(const TokenRegions &tokens,
                                Objective objective);

// -sum(delta_i * log P(t_i)) over non-pad tokens, divided by sum(delta_i)
// for mean reduction. Throws AlignmentError on length mismatches and
// positive log-probabilities.
LossResult ComputeLoss(const TokenRegions &tokens, const TokenLogProbs &lp,
                       Objective objective, Reduction reduction);

// Deterministic demonstration draw for one query: `shots` distinct indices
// from [0, pool_size) excluding the query itself, a pure function of
// (seed, query index, pool size). Returns fewer if the pool is too small.
std::vector<std::size_t> SampleDemonstrations(std::size_t pool_size,
                                              std::size_t query_index,
                                              std::size_t shots,
                                              std::uint64_t seed);

}  // namespace seqlab::prompts

#endif  // SEQLAB_PROMPTS_H_
