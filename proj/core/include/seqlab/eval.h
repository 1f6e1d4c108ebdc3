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

// Strict span-based evaluation.
//
// A predicted span is a true positive only if a reference span has exactly
// the same boundaries (span detection, SD) and, in span classification (SC)
// mode, the same class. Correct O tokens never contribute. Scores follow the
// 0/0 -> 0 convention: precision is 0 with no predictions, recall is 0 with
// no references, F1 is 0 whenever P + R is 0.

#ifndef SEQLAB_EVAL_H_
#define SEQLAB_EVAL_H_

#include <cstddef>
#include <map>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqlab/tagging.h"

namespace seqlab::eval {

enum class Mode { kSpanDetection, kSpanClassification };

std::string_view ModeName(Mode mode);
// Accepts "sd" / "sc" (case-insensitive). Throws ConfigError otherwise.
Mode ParseMode(std::string_view text);

// In SD mode every span is relabeled to this single pseudo-class before
// counting.
inline constexpr std::string_view kDetectionClass = "<span>";

struct MatchCounts {
  std::size_t true_positive = 0;
  std::size_t predicted_total = 0;
  std::size_t reference_total = 0;

  MatchCounts &operator+=(const MatchCounts &other);
  friend bool operator==(const MatchCounts &, const MatchCounts &) = default;
};

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static Scores FromCounts(const MatchCounts &counts);
  friend bool operator==(const Scores &, const Scores &) = default;
};

struct ClassReport {
  Scores scores;
  MatchCounts counts;
  friend bool operator==(const ClassReport &, const ClassReport &) = default;
};

struct EvalReport {
  Mode mode = Mode::kSpanClassification;
  // Every class present in references or predictions.
  std::map<std::string, ClassReport> per_class;
  MatchCounts micro_counts;
  Scores micro;
  Scores macro;

  friend bool operator==(const EvalReport &, const EvalReport &) = default;
};

// Stray I- tags are dropped by default, so a B-ORG I-LOC prediction yields
// one ORG span and no LOC span.
struct EvalOptions {
  Mode mode = Mode::kSpanClassification;
  tagging::Scheme scheme = tagging::Scheme::kIob2;
  tagging::DecodeMode reference_decode = tagging::DecodeMode::kDiscard;
  tagging::DecodeMode prediction_decode = tagging::DecodeMode::kDiscard;
};

// Incremental evaluator; feed reference/prediction pairs one at a time.
// Counts are commutative, so the order of Add calls does not matter.
class SpanEvaluator {
 public:
  explicit SpanEvaluator(EvalOptions options = {});

  // Throws LengthMismatch (carrying the pair's position) if the two tag
  // lists differ in length.
  void Add(std::span<const tagging::Tag> reference,
           std::span<const tagging::Tag> prediction);
  void AddSpans(std::span<const tagging::Span> reference,
                std::span<const tagging::Span> prediction);

  std::size_t pairs_seen() const { return pairs_; }
  EvalReport Report() const;

 private:
  EvalOptions options_;
  std::map<std::string, MatchCounts> counts_;
  std::size_t pairs_ = 0;
};

EvalReport Evaluate(std::span<const tagging::LabeledSequence> references,
                    std::span<const tagging::LabeledSequence> predictions,
                    const EvalOptions &options = {});

EvalReport Evaluate(std::span<const tagging::LabeledSequence> references,
                    std::span<const tagging::LabeledSequence> predictions,
                    Mode mode);

// Word index -> subword indices for one sequence. The first subword of each
// word is its head.
using WordPieceMap = std::vector<std::vector<std::size_t>>;

// Projects subword-level predictions to words by reading the tag at each
// word's head subword, then evaluates. Throws AlignmentError when a word has
// no subwords or a head index is out of range.
EvalReport EvaluateHeadWord(
    std::span<const tagging::LabeledSequence> references,
    std::span<const std::vector<tagging::Tag>> subword_predictions,
    std::span<const WordPieceMap> word_pieces, const EvalOptions &options = {});

std::vector<tagging::Tag> ProjectToHeadWords(
    std::span<const tagging::Tag> subword_tags, const WordPieceMap &pieces);

nlohmann::ordered_json ReportToJson(const EvalReport &report);
EvalReport ReportFromJson(const nlohmann::ordered_json &json);

// Fixed-width table, one row per class followed by micro and macro rows.
std::string FormatTable(const EvalReport &report);

}  // namespace seqlab::eval

#endif  // SEQLAB_EVAL_H_
