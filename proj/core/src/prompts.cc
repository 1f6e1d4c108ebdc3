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

#include "seqlab/prompts.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>

#include "seqlab/errors.h"
#include "seqlab/random.h"

namespace seqlab::prompts {

using nlohmann::ordered_json;
using tagging::Span;

namespace {

std::string Join(std::span<const std::string> parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string RenderResponse(std::span<const std::string> tokens,
                           std::span<const Span> spans) {
  if (spans.empty()) return std::string(kNoSpans);
  std::vector<Span> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const Span &span = sorted[k];
    if (span.end > tokens.size() || span.start >= span.end) {
      throw OutOfBounds("span exceeds the sentence");
    }
    const std::string text = Join(tokens.subspan(span.start, span.size()), " ");
    if (text.find_first_of(":;\n") != std::string::npos) {
      throw ReservedCharError("span text '" + text +
                              "' contains ':', ';' or a newline");
    }
    if (k > 0) out += ';';
    out += text;
    out += ':';
    out += span.label;
  }
  return out;
}

std::string RenderResponse(const corpus::CorpusRecord &record) {
  const auto spans =
      tagging::DecodeSpans(std::span<const tagging::Tag>(record.tags()));
  return RenderResponse(record.tokens(), spans);
}

PromptExample ExampleFromRecord(const corpus::CorpusRecord &record) {
  PromptExample example;
  example.sentence = Join(record.tokens(), " ");
  if (record.verb_index()) example.verb = record.tokens()[*record.verb_index()];
  example.response = RenderResponse(record);
  return example;
}

std::string_view RegionKindName(RegionKind kind) {
  switch (kind) {
    case RegionKind::kInstruction:
      return "instruction";
    case RegionKind::kDemonstrationExample:
      return "demonstration_example";
    case RegionKind::kDemonstrationResponse:
      return "demonstration_response";
    case RegionKind::kQueryExample:
      return "query_example";
    case RegionKind::kQueryResponse:
      return "query_response";
  }
  return "unknown";
}

RegionKind ParseRegionKind(std::string_view name) {
  for (RegionKind kind :
       {RegionKind::kInstruction, RegionKind::kDemonstrationExample,
        RegionKind::kDemonstrationResponse, RegionKind::kQueryExample,
        RegionKind::kQueryResponse}) {
    if (RegionKindName(kind) == name) return kind;
  }
  throw ParseError(0, "unknown region kind '" + std::string(name) + "'");
}

const Region *PromptLayout::query_response() const {
  for (const Region &r : regions) {
    if (r.kind == RegionKind::kQueryResponse) return &r;
  }
  return nullptr;
}

namespace {

class PromptWriter {
 public:
  explicit PromptWriter(const PromptSpec &spec) : spec_(spec) {}

  PromptLayout Build() {
    if (spec_.instruction) {
      CheckText(*spec_.instruction, "instruction");
      if (spec_.options.empty()) throw SpecError("instruction without options");
      for (const std::string &option : spec_.options) {
        CheckText(option, "option");
        if (option.find_first_of(":;") != std::string::npos) {
          throw SpecError("option '" + option + "' contains ':' or ';'");
        }
      }
      const std::size_t start = layout_.text.size();
      Line(kInstructionHeader);
      layout_.text += *spec_.instruction;
      layout_.text += '\n';
      Line(kOptionsHeader);
      layout_.text += Join(spec_.options, ", ");
      Mark(RegionKind::kInstruction, -1, start);
    }
    for (std::size_t i = 0; i < spec_.demonstrations.size(); ++i) {
      const int index = static_cast<int>(i);
      Separator();
      Example(spec_.demonstrations[i], RegionKind::kDemonstrationExample,
              index);
      Line(kResponseHeader);
      const std::string &response = spec_.demonstrations[i].response;
      CheckText(response, "demonstration response");
      const std::size_t start = layout_.text.size();
      layout_.text += response;
      Mark(RegionKind::kDemonstrationResponse, index, start);
    }
    Separator();
    Example(spec_.query, RegionKind::kQueryExample, -1);
    Line(kResponseHeader);
    if (spec_.include_query_response) {
      CheckText(spec_.query.response, "query response");
      const std::size_t start = layout_.text.size();
      layout_.text += spec_.query.response;
      layout_.text += spec_.eos;
      layout_.eos_included = !spec_.eos.empty();
      Mark(RegionKind::kQueryResponse, -1, start);
    }
    return std::move(layout_);
  }

 private:
  void CheckText(const std::string &text, std::string_view what) const {
    if (text.empty()) throw SpecError(std::string(what) + " is empty");
    static constexpr std::array<std::string_view, 5> kHeaders = {
        kInstructionHeader, kOptionsHeader, kSentenceHeader, kVerbHeader,
        kResponseHeader};
    for (std::string_view header : kHeaders) {
      if (text.find(header) != std::string::npos) {
        throw SpecError(std::string(what) + " contains the reserved marker '" +
                        std::string(header) + "'");
      }
    }
    if (!spec_.eos.empty() && text.find(spec_.eos) != std::string::npos) {
      throw SpecError(std::string(what) + " contains the eos marker");
    }
  }

  void Line(std::string_view header) {
    layout_.text += header;
    layout_.text += '\n';
  }

  void Separator() {
    if (!layout_.text.empty()) layout_.text += '\n';
  }

  void Example(const PromptExample &example, RegionKind kind, int index) {
    CheckText(example.sentence, "sentence");
    Line(kSentenceHeader);
    const std::size_t start = layout_.text.size();
    layout_.text += example.sentence;
    if (spec_.verb_field) {
      if (!example.verb)
        throw SpecError("verb_field set but example has no verb");
      CheckText(*example.verb, "verb");
      layout_.text += '\n';
      Line(kVerbHeader);
      layout_.text += *example.verb;
    }
    Mark(kind, index, start);
    layout_.text += '\n';
  }

  void Mark(RegionKind kind, int index, std::size_t start) {
    layout_.regions.push_back(Region{kind, index, start, layout_.text.size()});
  }

  const PromptSpec &spec_;
  PromptLayout layout_;
};

}  // namespace

PromptLayout BuildPrompt(const PromptSpec &spec) {
  return PromptWriter(spec).Build();
}

ordered_json LayoutToJson(const PromptLayout &layout) {
  ordered_json regions = ordered_json::array();
  for (const Region &r : layout.regions) {
    ordered_json entry = {{"kind", RegionKindName(r.kind)}};
    if (r.index >= 0) entry["index"] = r.index;
    entry["start"] = r.start;
    entry["end"] = r.end;
    regions.push_back(std::move(entry));
  }
  return {{"text", layout.text},
          {"regions", std::move(regions)},
          {"eos_included", layout.eos_included}};
}

PromptLayout LayoutFromJson(const ordered_json &json) {
  try {
    PromptLayout layout;
    layout.text = json.at("text").get<std::string>();
    layout.eos_included = json.value("eos_included", false);
    for (const auto &entry : json.at("regions")) {
      Region r{ParseRegionKind(entry.at("kind").get<std::string>()),
               entry.value("index", -1), entry.at("start").get<std::size_t>(),
               entry.at("end").get<std::size_t>()};
      if (r.start > r.end || r.end > layout.text.size()) {
        throw ParseError(0, "region outside the prompt text");
      }
      layout.regions.push_back(r);
    }
    return layout;
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(0, std::string("malformed prompt layout: ") + e.what());
  }
}

TokenOffsets SimpleTokenize(std::string_view text) {
  TokenOffsets offsets;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '\n') {
      offsets.emplace_back(i, i + 1);
      ++i;
    } else if (std::isspace(c)) {
      ++i;
    } else if (std::ispunct(c)) {
      offsets.emplace_back(i, i + 1);
      ++i;
    } else {
      const std::size_t start = i;
      while (i < text.size()) {
        const unsigned char d = static_cast<unsigned char>(text[i]);
        if (std::isspace(d) || std::ispunct(d)) break;
        ++i;
      }
      offsets.emplace_back(start, i);
    }
  }
  return offsets;
}

TokenRegions ProjectRegions(const PromptLayout &layout,
                            const TokenOffsets &offsets) {
  TokenRegions out;
  out.query_response.assign(offsets.size(), false);
  out.demonstration_response.assign(offsets.size(), false);
  out.regions.resize(offsets.size());
  for (std::size_t t = 0; t < offsets.size(); ++t) {
    const auto [start, end] = offsets[t];
    if (start > end || end > layout.text.size()) {
      throw AlignmentError("token " + std::to_string(t) +
                           " lies outside the prompt text");
    }
    for (std::size_t r = 0; r < layout.regions.size(); ++r) {
      const Region &region = layout.regions[r];
      if (!(start < region.end && region.start < end)) continue;
      out.regions[t].push_back(r);
      if (region.kind == RegionKind::kQueryResponse) {
        out.query_response[t] = true;
      } else if (region.kind == RegionKind::kDemonstrationResponse) {
        out.demonstration_response[t] = true;
      }
    }
  }
  return out;
}

std::string_view ObjectiveName(Objective objective) {
  switch (objective) {
    case Objective::kVanilla:
      return "vanilla";
    case Objective::kSrc:
      return "src";
    case Objective::kMrc:
      return "mrc";
  }
  return "unknown";
}

Objective ParseObjective(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "vanilla") return Objective::kVanilla;
  if (lower == "src") return Objective::kSrc;
  if (lower == "mrc") return Objective::kMrc;
  throw ConfigError("unknown objective '" + std::string(name) + "'");
}

Reduction ParseReduction(std::string_view name) {
  if (name == "sum") return Reduction::kSum;
  if (name == "mean") return Reduction::kMean;
  throw ConfigError("unknown reduction '" + std::string(name) + "'");
}

namespace {

bool Selected(const TokenRegions &tokens, std::size_t t, Objective objective) {
  switch (objective) {
    case Objective::kVanilla:
      return true;
    case Objective::kSrc:
      return tokens.query_response[t];
    case Objective::kMrc:
      return tokens.query_response[t] || tokens.demonstration_response[t];
  }
  return true;
}

}  // namespace

std::vector<bool> ObjectiveMask(const TokenRegions &tokens,
                                Objective objective) {
  std::vector<bool> mask(tokens.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    mask[t] = Selected(tokens, t, objective);
  }
  return mask;
}

LossResult ComputeLoss(const TokenRegions &tokens, const TokenLogProbs &lp,
                       Objective objective, Reduction reduction) {
  if (!lp.pad_mask.empty() && lp.pad_mask.size() != lp.logprobs.size()) {
    throw AlignmentError("pad mask and log-probabilities differ in length");
  }
  LossResult result;
  std::size_t t = 0;
  for (std::size_t i = 0; i < lp.logprobs.size(); ++i) {
    if (!lp.pad_mask.empty() && lp.pad_mask[i]) continue;
    if (t >= tokens.size()) {
      throw AlignmentError("more non-pad log-probabilities than tokens (" +
                           std::to_string(tokens.size()) + ")");
    }
    const double value = lp.logprobs[i];
    if (std::isnan(value) || value > 0.0) {
      throw AlignmentError("log-probability at position " + std::to_string(i) +
                           " is not <= 0");
    }
    if (Selected(tokens, t, objective)) {
      result.value += -value;
      ++result.selected;
    }
    ++t;
  }
  if (t != tokens.size()) {
    throw AlignmentError("got " + std::to_string(t) +
                         " non-pad log-probabilities for " +
                         std::to_string(tokens.size()) + " tokens");
  }
  if (result.selected == 0) {
    result.value = 0.0;
    result.empty_selection = true;
  } else if (reduction == Reduction::kMean) {
    result.value /= static_cast<double>(result.selected);
  }
  return result;
}

std::vector<std::size_t> SampleDemonstrations(std::size_t pool_size,
                                              std::size_t query_index,
                                              std::size_t shots,
                                              std::uint64_t seed) {
  std::vector<std::size_t> candidates;
  candidates.reserve(pool_size);
  for (std::size_t i = 0; i < pool_size; ++i) {
    if (i != query_index) candidates.push_back(i);
  }
  Rng rng({seed, static_cast<std::uint64_t>(query_index),
           static_cast<std::uint64_t>(pool_size)});
  const std::size_t take = std::min(shots, candidates.size());
  for (std::size_t j = 0; j < take; ++j) {
    std::swap(candidates[j], candidates[j + rng.Below(candidates.size() - j)]);
  }
  candidates.resize(take);
  return candidates;
}

}  // namespace seqlab::prompts
