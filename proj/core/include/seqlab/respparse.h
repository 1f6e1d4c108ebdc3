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

// Parsing of generated responses and their mapping back to IOB2 tags.
//
// Only the first line of a generation is considered. It must read
//
//   NA | span:class(;span:class)*
//
// where a span is one or more characters other than ':' and ';', and class
// is one of the task's options verbatim. Anything else is an invalid parse,
// which downstream behaves exactly like predicting O for every token.

#ifndef SEQLAB_RESPPARSE_H_
#define SEQLAB_RESPPARSE_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqlab/tagging.h"

namespace seqlab::respparse {

struct Extraction {
  std::string span_text;
  std::string class_name;
  friend bool operator==(const Extraction &, const Extraction &) = default;
};

struct ParsedResponse {
  std::vector<Extraction> extractions;
  bool is_na = false;
  bool valid = false;
};

// Never throws.
ParsedResponse ParseResponse(std::string_view raw_output,
                             std::span<const std::string> options);

// Greedy left-to-right matching: each extraction, in response order, claims
// the earliest run of unclaimed tokens equal to its whitespace-normalized
// text (case-sensitive). Unmatched extractions are dropped. Invalid or NA
// parses give all-O. The result is always strict IOB2. Never throws.
std::vector<tagging::Tag> MapToTags(const ParsedResponse &parsed,
                                    std::span<const std::string> tokens);

// Splits on ASCII whitespace.
std::vector<std::string> NormalizeWords(std::string_view text);

}  // namespace seqlab::respparse

#endif  // SEQLAB_RESPPARSE_H_
