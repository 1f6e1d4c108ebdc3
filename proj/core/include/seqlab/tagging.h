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

// Span annotations and their IOB2 / IOB1 tag encodings.
//
// A span is a half-open token interval [start, end) carrying a class label.
// Spans inside one sequence never overlap. Class labels are opaque UTF-8
// strings; `:` and `;` are reserved because the generated response format
// uses them as delimiters.

#ifndef SEQLAB_TAGGING_H_
#define SEQLAB_TAGGING_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seqlab::tagging {

enum class TagKind : std::uint8_t { kBegin, kInside, kOutside };

enum class Scheme { kIob2, kIob1 };

// What to do with an IOB2 I-X that does not continue an open X span:
// kStrict rejects it, kRepair promotes it to B-X, kDiscard reads it as O.
// The last two never fail. Under IOB1 an I-X always starts or continues a
// span, and kDiscard behaves like kRepair.
enum class DecodeMode { kStrict, kRepair, kDiscard };

std::string_view DecodeModeName(DecodeMode mode);
// Throws ConfigError on an unknown name.
DecodeMode ParseDecodeMode(std::string_view name);

// Throws TagFormatError if the label is empty or holds a reserved character.
void ValidateLabel(std::string_view label);

class Tag {
 public:
  // The outside tag.
  Tag() = default;

  static Tag Outside() { return Tag(); }
  static Tag Begin(std::string label);
  static Tag Inside(std::string label);

  // Parses "O", "B-X" or "I-X". The label is everything after the first
  // hyphen, so "B-ARGM-TMP" has label "ARGM-TMP".
  static Tag Parse(std::string_view text);

  TagKind kind() const { return kind_; }
  const std::string &label() const { return label_; }
  bool is_outside() const { return kind_ == TagKind::kOutside; }

  std::string ToString() const;

  friend bool operator==(const Tag &, const Tag &) = default;

 private:
  Tag(TagKind kind, std::string label);

  TagKind kind_ = TagKind::kOutside;
  std::string label_;
};

struct Span {
  std::string label;
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }

  friend bool operator==(const Span &, const Span &) = default;
  // Orders by position first so sorted span lists read left to right.
  friend std::strong_ordering operator<=>(const Span &a, const Span &b) {
    if (auto c = a.start <=> b.start; c != 0) return c;
    if (auto c = a.end <=> b.end; c != 0) return c;
    return a.label <=> b.label;
  }
};

// Tokens with one tag each. The constructor enforces equal lengths.
class LabeledSequence {
 public:
  LabeledSequence() = default;
  LabeledSequence(std::vector<std::string> tokens, std::vector<Tag> tags);

  // Convenience: parses tag strings.
  static LabeledSequence FromStrings(std::vector<std::string> tokens,
                                     const std::vector<std::string> &tags);

  const std::vector<std::string> &tokens() const { return tokens_; }
  const std::vector<Tag> &tags() const { return tags_; }
  std::size_t size() const { return tokens_.size(); }

  friend bool operator==(const LabeledSequence &,
                         const LabeledSequence &) = default;

 private:
  std::vector<std::string> tokens_;
  std::vector<Tag> tags_;
};

// Returns the maximal spans encoded by `tags`, sorted by start.
std::vector<Span> DecodeSpans(std::span<const Tag> tags,
                              Scheme scheme = Scheme::kIob2,
                              DecodeMode mode = DecodeMode::kRepair);

std::vector<Span> DecodeSpans(const LabeledSequence &sequence,
                              Scheme scheme = Scheme::kIob2,
                              DecodeMode mode = DecodeMode::kRepair);

// Encodes spans over a sequence of `length` tokens. Input order does not
// matter. Throws OutOfBounds for empty or out-of-range spans and
// OverlapError when two spans share a token.
std::vector<Tag> EncodeTags(std::span<const Span> spans, std::size_t length,
                            Scheme scheme = Scheme::kIob2);

// True iff DecodeSpans in strict mode would succeed.
bool IsWellFormed(std::span<const Tag> tags, Scheme scheme = Scheme::kIob2);

std::vector<Tag> ParseTags(const std::vector<std::string> &tags);
std::vector<std::string> TagStrings(std::span<const Tag> tags);

}  // namespace seqlab::tagging

#endif  // SEQLAB_TAGGING_H_
