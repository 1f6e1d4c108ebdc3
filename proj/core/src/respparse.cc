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

#include "seqlab/respparse.h"

#include <algorithm>

namespace seqlab::respparse {

using tagging::Tag;

ParsedResponse ParseResponse(std::string_view raw_output,
                             std::span<const std::string> options) {
  ParsedResponse parsed;
  const std::string_view line = raw_output.substr(0, raw_output.find('\n'));
  if (line == "NA") {
    parsed.is_na = true;
    parsed.valid = true;
    return parsed;
  }
  if (line.empty()) return parsed;

  std::size_t pos = 0;
  while (true) {
    const std::size_t semi = line.find(';', pos);
    const std::string_view group =
        line.substr(pos, semi == std::string_view::npos ? semi : semi - pos);
    const std::size_t colon = group.find(':');
    // Exactly one ':' with non-empty text on both sides.
    if (colon == std::string_view::npos || colon == 0 ||
        colon + 1 == group.size() ||
        group.find(':', colon + 1) != std::string_view::npos) {
      return ParsedResponse{};
    }
    const std::string_view cls = group.substr(colon + 1);
    if (std::find(options.begin(), options.end(), cls) == options.end()) {
      return ParsedResponse{};
    }
    parsed.extractions.push_back(
        Extraction{std::string(group.substr(0, colon)), std::string(cls)});
    if (semi == std::string_view::npos) break;
    pos = semi + 1;
  }
  parsed.valid = true;
  return parsed;
}

std::vector<std::string> NormalizeWords(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
           c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

std::vector<Tag> MapToTags(const ParsedResponse &parsed,
                           std::span<const std::string> tokens) {
  std::vector<Tag> tags(tokens.size());
  if (!parsed.valid || parsed.is_na) return tags;

  std::vector<bool> claimed(tokens.size(), false);
  for (const Extraction &extraction : parsed.extractions) {
    const auto words = NormalizeWords(extraction.span_text);
    const std::size_t k = words.size();
    if (k == 0 || k > tokens.size()) continue;
    for (std::size_t start = 0; start + k <= tokens.size(); ++start) {
      bool match = true;
      for (std::size_t j = 0; j < k && match; ++j) {
        match = !claimed[start + j] && tokens[start + j] == words[j];
      }
      if (!match) continue;
      try {
        tags[start] = Tag::Begin(extraction.class_name);
        for (std::size_t j = 1; j < k; ++j) {
          tags[start + j] = Tag::Inside(extraction.class_name);
        }
      } catch (...) {
        // A class name that cannot be a tag label counts as no prediction.
        return std::vector<Tag>(tokens.size());
      }
      std::fill_n(claimed.begin() + static_cast<std::ptrdiff_t>(start), k,
                  true);
      break;
    }
  }
  return tags;
}

}  // namespace seqlab::respparse
