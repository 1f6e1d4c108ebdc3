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

#ifndef SEQLAB_ERRORS_H_
#define SEQLAB_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace seqlab {

// Stable identifiers for every data error the library raises. Bindings and
// the CLI surface these names verbatim.
enum class ErrorCode {
  kTagFormat,
  kSchemeViolation,
  kLengthMismatch,
  kOverlap,
  kOutOfBounds,
  kParse,
  kAlignment,
  kNoArcs,
  kConfig,
  kReservedChar,
  kSpec,
  kGrammar,
  kShape,
  kIndex,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Base class of all recoverable data errors. Anything else escaping the
// library is a bug.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class TagFormatError : public Error {
 public:
  explicit TagFormatError(const std::string &message)
      : Error(ErrorCode::kTagFormat, message) {}
};

// An I- tag (or misplaced IOB1 B- tag) that the scheme does not allow at
// this position.
class SchemeViolation : public Error {
 public:
  SchemeViolation(std::size_t index, const std::string &tag);
  std::size_t index() const { return index_; }
  const std::string &tag() const { return tag_; }

 private:
  std::size_t index_;
  std::string tag_;
};

class LengthMismatch : public Error {
 public:
  explicit LengthMismatch(const std::string &message)
      : Error(ErrorCode::kLengthMismatch, message) {}
  LengthMismatch(std::size_t index, const std::string &message);
  // Position of the offending item in its list, if known.
  std::size_t index() const { return index_; }

 private:
  std::size_t index_ = static_cast<std::size_t>(-1);
};

class OverlapError : public Error {
 public:
  explicit OverlapError(const std::string &message)
      : Error(ErrorCode::kOverlap, message) {}
};

class OutOfBounds : public Error {
 public:
  explicit OutOfBounds(const std::string &message)
      : Error(ErrorCode::kOutOfBounds, message) {}
};

// Malformed input at a 1-based line number (0 when not line oriented).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &reason);
  std::size_t line() const { return line_; }
  const std::string &reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string &message)
      : Error(ErrorCode::kAlignment, message) {}
};

class NoArcsError : public Error {
 public:
  explicit NoArcsError(const std::string &message)
      : Error(ErrorCode::kNoArcs, message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &message)
      : Error(ErrorCode::kConfig, message) {}
};

class ReservedCharError : public Error {
 public:
  explicit ReservedCharError(const std::string &message)
      : Error(ErrorCode::kReservedChar, message) {}
};

class SpecError : public Error {
 public:
  explicit SpecError(const std::string &message)
      : Error(ErrorCode::kSpec, message) {}
};

class GrammarError : public Error {
 public:
  explicit GrammarError(const std::string &message)
      : Error(ErrorCode::kGrammar, message) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string &message)
      : Error(ErrorCode::kShape, message) {}
};

class IndexError : public Error {
 public:
  explicit IndexError(const std::string &message)
      : Error(ErrorCode::kIndex, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &message)
      : Error(ErrorCode::kIo, message) {}
};

}  // namespace seqlab

#endif  // SEQLAB_ERRORS_H_
