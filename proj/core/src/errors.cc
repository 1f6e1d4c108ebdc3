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

#include "seqlab/errors.h"

namespace seqlab {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kTagFormat:
      return "TagFormatError";
    case ErrorCode::kSchemeViolation:
      return "SchemeViolation";
    case ErrorCode::kLengthMismatch:
      return "LengthMismatch";
    case ErrorCode::kOverlap:
      return "OverlapError";
    case ErrorCode::kOutOfBounds:
      return "OutOfBounds";
    case ErrorCode::kParse:
      return "ParseError";
    case ErrorCode::kAlignment:
      return "AlignmentError";
    case ErrorCode::kNoArcs:
      return "NoArcsError";
    case ErrorCode::kConfig:
      return "ConfigError";
    case ErrorCode::kReservedChar:
      return "ReservedCharError";
    case ErrorCode::kSpec:
      return "SpecError";
    case ErrorCode::kGrammar:
      return "GrammarError";
    case ErrorCode::kShape:
      return "ShapeError";
    case ErrorCode::kIndex:
      return "IndexError";
    case ErrorCode::kIo:
      return "IoError";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(message), code_(code) {}

SchemeViolation::SchemeViolation(std::size_t index, const std::string &tag)
    : Error(ErrorCode::kSchemeViolation, "tag " + tag + " at index " +
                                             std::to_string(index) +
                                             " violates the tagging scheme"),
      index_(index),
      tag_(tag) {}

LengthMismatch::LengthMismatch(std::size_t index, const std::string &message)
    : Error(ErrorCode::kLengthMismatch,
            "item " + std::to_string(index) + ": " + message),
      index_(index) {}

ParseError::ParseError(std::size_t line, const std::string &reason)
    : Error(
          ErrorCode::kParse,
          line == 0 ? reason : "line " + std::to_string(line) + ": " + reason),
      line_(line),
      reason_(reason) {}

}  // namespace seqlab
