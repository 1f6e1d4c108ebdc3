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

#include "seqlab/tagging.h"

#include <algorithm>
#include <optional>
#include <utility>

#include "seqlab/errors.h"

namespace seqlab::tagging {

void ValidateLabel(std::string_view label) {
  if (label.empty()) throw TagFormatError("empty class label");
  if (label.find_first_of(":;") != std::string_view::npos) {
    throw TagFormatError("class label '" + std::string(label) +
                         "' contains a reserved character (':' or ';')");
  }
}

Tag::Tag(TagKind kind, std::string label)
    : kind_(kind), label_(std::move(label)) {
  ValidateLabel(label_);
}

Tag Tag::Begin(std::string label) {
  return Tag(TagKind::kBegin, std::move(label));
}

Tag Tag::Inside(std::string label) {
  return Tag(TagKind::kInside, std::move(label));
}

Tag Tag::Parse(std::string_view text) {
  if (text == "O") return Tag();
  if (text.size() >= 2 && text[1] == '-') {
    if (text[0] == 'B') return Begin(std::string(text.substr(2)));
    if (text[0] == 'I') return Inside(std::string(text.substr(2)));
  }
  throw TagFormatError("malformed tag '" + std::string(text) + "'");
}

std::string Tag::ToString() const {
  switch (kind_) {
    case TagKind::kBegin:
      return "B-" + label_;
    case TagKind::kInside:
      return "I-" + label_;
    case TagKind::kOutside:
      break;
  }
  return "O";
}

LabeledSequence::LabeledSequence(std::vector<std::string> tokens,
                                 std::vector<Tag> tags)
    : tokens_(std::move(tokens)), tags_(std::move(tags)) {
  if (tokens_.size() != tags_.size()) {
    throw LengthMismatch("sequence has " + std::to_string(tokens_.size()) +
                         " tokens but " + std::to_string(tags_.size()) +
                         " tags");
  }
}

LabeledSequence LabeledSequence::FromStrings(
    std::vector<std::string> tokens, const std::vector<std::string> &tags) {
  return LabeledSequence(std::move(tokens), ParseTags(tags));
}

std::string_view DecodeModeName(DecodeMode mode) {
  switch (mode) {
    case DecodeMode::kStrict:
      return "strict";
    case DecodeMode::kRepair:
      return "repair";
    case DecodeMode::kDiscard:
      return "discard";
  }
  return "repair";
}

DecodeMode ParseDecodeMode(std::string_view name) {
  if (name == "strict") return DecodeMode::kStrict;
  if (name == "repair") return DecodeMode::kRepair;
  if (name == "discard") return DecodeMode::kDiscard;
  throw ConfigError("unknown decode mode '" + std::string(name) + "'");
}

std::vector<Span> DecodeSpans(std::span<const Tag> tags, Scheme scheme,
                              DecodeMode mode) {
  std::vector<Span> spans;
  std::optional<Span> open;
  auto close = [&](std::size_t at) {
    if (open) {
      open->end = at;
      spans.push_back(std::move(*open));
      open.reset();
    }
  };

  for (std::size_t i = 0; i < tags.size(); ++i) {
    const Tag &tag = tags[i];
    const bool continues = open && open->label == tag.label();
    switch (tag.kind()) {
      case TagKind::kOutside:
        close(i);
        break;
      case TagKind::kBegin:
        // IOB1 only uses B- to split two adjacent spans of one class.
        if (scheme == Scheme::kIob1 && !continues &&
            mode == DecodeMode::kStrict) {
          throw SchemeViolation(i, tag.ToString());
        }
        close(i);
        open = Span{tag.label(), i, i};
        break;
      case TagKind::kInside:
        if (continues) break;
        if (scheme == Scheme::kIob2 && mode == DecodeMode::kStrict) {
          throw SchemeViolation(i, tag.ToString());
        }
        close(i);
        if (scheme == Scheme::kIob2 && mode == DecodeMode::kDiscard) break;
        open = Span{tag.label(), i, i};
        break;
    }
  }
  close(tags.size());
  return spans;
}

std::vector<Span> DecodeSpans(const LabeledSequence &sequence, Scheme scheme,
                              DecodeMode mode) {
  return DecodeSpans(std::span<const Tag>(sequence.tags()), scheme, mode);
}

std::vector<Tag> EncodeTags(std::span<const Span> spans, std::size_t length,
                            Scheme scheme) {
  std::vector<Span> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<Tag> tags(length);
  const Span *previous = nullptr;
  for (const Span &span : sorted) {
    if (span.start >= span.end || span.end > length) {
      throw OutOfBounds("span [" + std::to_string(span.start) + ", " +
                        std::to_string(span.end) +
                        ") is empty or exceeds sequence length " +
                        std::to_string(length));
    }
    if (previous != nullptr && span.start < previous->end) {
      throw OverlapError("spans [" + std::to_string(previous->start) + ", " +
                         std::to_string(previous->end) + ") and [" +
                         std::to_string(span.start) + ", " +
                         std::to_string(span.end) + ") overlap");
    }
    bool begin = true;
    if (scheme == Scheme::kIob1) {
      begin = previous != nullptr && previous->end == span.start &&
              previous->label == span.label;
    }
    tags[span.start] = begin ? Tag::Begin(span.label) : Tag::Inside(span.label);
    for (std::size_t i = span.start + 1; i < span.end; ++i) {
      tags[i] = Tag::Inside(span.label);
    }
    previous = &span;
  }
  return tags;
}

bool IsWellFormed(std::span<const Tag> tags, Scheme scheme) {
  try {
    DecodeSpans(tags, scheme, DecodeMode::kStrict);
  } catch (const SchemeViolation &) {
    return false;
  }
  return true;
}

std::vector<Tag> ParseTags(const std::vector<std::string> &tags) {
  std::vector<Tag> parsed;
  parsed.reserve(tags.size());
  for (const std::string &tag : tags) parsed.push_back(Tag::Parse(tag));
  return parsed;
}

std::vector<std::string> TagStrings(std::span<const Tag> tags) {
  std::vector<std::string> out;
  out.reserve(tags.size());
  for (const Tag &tag : tags) out.push_back(tag.ToString());
  return out;
}

}  // namespace seqlab::tagging
