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

#include "seqlab/eval.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <iterator>
#include <set>
#include <sstream>

#include "seqlab/errors.h"

namespace seqlab::eval {

using tagging::LabeledSequence;
using tagging::Span;
using tagging::Tag;

std::string_view ModeName(Mode mode) {
  return mode == Mode::kSpanDetection ? "sd" : "sc";
}

Mode ParseMode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "sd") return Mode::kSpanDetection;
  if (lower == "sc") return Mode::kSpanClassification;
  throw ConfigError("unknown evaluation mode '" + std::string(text) +
                    "' (expected sd or sc)");
}

MatchCounts &MatchCounts::operator+=(const MatchCounts &other) {
  true_positive += other.true_positive;
  predicted_total += other.predicted_total;
  reference_total += other.reference_total;
  return *this;
}

namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double HarmonicMean(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

Scores Scores::FromCounts(const MatchCounts &counts) {
  Scores s;
  s.precision = Ratio(counts.true_positive, counts.predicted_total);
  s.recall = Ratio(counts.true_positive, counts.reference_total);
  s.f1 = HarmonicMean(s.precision, s.recall);
  return s;
}

SpanEvaluator::SpanEvaluator(EvalOptions options) : options_(options) {}

void SpanEvaluator::Add(std::span<const Tag> reference,
                        std::span<const Tag> prediction) {
  if (reference.size() != prediction.size()) {
    throw LengthMismatch(pairs_, "reference has " +
                                     std::to_string(reference.size()) +
                                     " tags but prediction has " +
                                     std::to_string(prediction.size()));
  }
  const auto ref = tagging::DecodeSpans(reference, options_.scheme,
                                        options_.reference_decode);
  const auto pred = tagging::DecodeSpans(prediction, options_.scheme,
                                         options_.prediction_decode);
  AddSpans(ref, pred);
}

void SpanEvaluator::AddSpans(std::span<const Span> reference,
                             std::span<const Span> prediction) {
  auto normalize = [&](std::span<const Span> spans) {
    std::set<Span> out;
    for (Span s : spans) {
      if (options_.mode == Mode::kSpanDetection) {
        s.label = std::string(kDetectionClass);
      }
      out.insert(std::move(s));
    }
    return out;
  };
  const std::set<Span> ref = normalize(reference);
  const std::set<Span> pred = normalize(prediction);

  for (const Span &s : ref) ++counts_[s.label].reference_total;
  for (const Span &s : pred) {
    MatchCounts &c = counts_[s.label];
    ++c.predicted_total;
    if (ref.contains(s)) ++c.true_positive;
  }
  ++pairs_;
}

EvalReport SpanEvaluator::Report() const {
  EvalReport report;
  report.mode = options_.mode;
  double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
  for (const auto &[label, counts] : counts_) {
    ClassReport cls{Scores::FromCounts(counts), counts};
    p_sum += cls.scores.precision;
    r_sum += cls.scores.recall;
    f_sum += cls.scores.f1;
    report.micro_counts += counts;
    report.per_class.emplace(label, cls);
  }
  report.micro = Scores::FromCounts(report.micro_counts);
  if (!report.per_class.empty()) {
    const double n = static_cast<double>(report.per_class.size());
    report.macro = Scores{p_sum / n, r_sum / n, f_sum / n};
  }
  return report;
}

EvalReport Evaluate(std::span<const LabeledSequence> references,
                    std::span<const LabeledSequence> predictions,
                    const EvalOptions &options) {
  if (references.size() != predictions.size()) {
    throw LengthMismatch("got " + std::to_string(references.size()) +
                         " reference sequences but " +
                         std::to_string(predictions.size()) + " predictions");
  }
  SpanEvaluator evaluator(options);
  for (std::size_t i = 0; i < references.size(); ++i) {
    evaluator.Add(references[i].tags(), predictions[i].tags());
  }
  return evaluator.Report();
}

EvalReport Evaluate(std::span<const LabeledSequence> references,
                    std::span<const LabeledSequence> predictions, Mode mode) {
  EvalOptions options;
  options.mode = mode;
  return Evaluate(references, predictions, options);
}

std::vector<Tag> ProjectToHeadWords(std::span<const Tag> subword_tags,
                                    const WordPieceMap &pieces) {
  std::vector<Tag> words;
  words.reserve(pieces.size());
  for (std::size_t w = 0; w < pieces.size(); ++w) {
    if (pieces[w].empty()) {
      throw AlignmentError("word " + std::to_string(w) + " has no subwords");
    }
    const std::size_t head = pieces[w].front();
    if (head >= subword_tags.size()) {
      throw AlignmentError("head subword " + std::to_string(head) +
                           " of word " + std::to_string(w) +
                           " is out of range");
    }
    words.push_back(subword_tags[head]);
  }
  return words;
}

EvalReport EvaluateHeadWord(
    std::span<const LabeledSequence> references,
    std::span<const std::vector<Tag>> subword_predictions,
    std::span<const WordPieceMap> word_pieces, const EvalOptions &options) {
  if (references.size() != subword_predictions.size() ||
      references.size() != word_pieces.size()) {
    throw LengthMismatch(
        "references, subword predictions and word piece "
        "maps must have the same number of sequences");
  }
  SpanEvaluator evaluator(options);
  for (std::size_t i = 0; i < references.size(); ++i) {
    if (word_pieces[i].size() != references[i].size()) {
      throw AlignmentError(
          "sequence " + std::to_string(i) + " has " +
          std::to_string(references[i].size()) + " words but " +
          std::to_string(word_pieces[i].size()) + " word piece entries");
    }
    const auto projected =
        ProjectToHeadWords(subword_predictions[i], word_pieces[i]);
    evaluator.Add(references[i].tags(), projected);
  }
  return evaluator.Report();
}

namespace {

nlohmann::ordered_json ScoresJson(const Scores &s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

nlohmann::ordered_json CountsJson(const MatchCounts &c) {
  return {{"true_positive", c.true_positive},
          {"predicted_total", c.predicted_total},
          {"reference_total", c.reference_total}};
}

Scores ScoresFrom(const nlohmann::ordered_json &j) {
  return Scores{j.at("precision").get<double>(), j.at("recall").get<double>(),
                j.at("f1").get<double>()};
}

MatchCounts CountsFrom(const nlohmann::ordered_json &j) {
  return MatchCounts{j.at("true_positive").get<std::size_t>(),
                     j.at("predicted_total").get<std::size_t>(),
                     j.at("reference_total").get<std::size_t>()};
}

}  // namespace

nlohmann::ordered_json ReportToJson(const EvalReport &report) {
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  for (const auto &[label, cls] : report.per_class) {
    nlohmann::ordered_json entry = ScoresJson(cls.scores);
    entry["counts"] = CountsJson(cls.counts);
    per_class[label] = std::move(entry);
  }
  nlohmann::ordered_json micro = ScoresJson(report.micro);
  micro["counts"] = CountsJson(report.micro_counts);
  return {{"mode", ModeName(report.mode)},
          {"micro", std::move(micro)},
          {"macro", ScoresJson(report.macro)},
          {"per_class", std::move(per_class)}};
}

EvalReport ReportFromJson(const nlohmann::ordered_json &json) {
  try {
    EvalReport report;
    report.mode = ParseMode(json.at("mode").get<std::string>());
    report.micro = ScoresFrom(json.at("micro"));
    report.micro_counts = CountsFrom(json.at("micro").at("counts"));
    report.macro = ScoresFrom(json.at("macro"));
    for (const auto &[label, entry] : json.at("per_class").items()) {
      report.per_class.emplace(
          label,
          ClassReport{ScoresFrom(entry), CountsFrom(entry.at("counts"))});
    }
    return report;
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(0, std::string("malformed report: ") + e.what());
  }
}

std::string FormatTable(const EvalReport &report) {
  std::size_t width = 5;
  for (const auto &[label, cls] : report.per_class) {
    width = std::max(width, label.size());
  }
  std::ostringstream out;
  char line[512];
  auto row = [&](const std::string &name, const Scores &s,
                 const MatchCounts *c) {
    if (c != nullptr) {
      std::snprintf(
          line, sizeof(line), "%-*s  %9.4f  %9.4f  %9.4f  %8zu  %8zu  %8zu\n",
          static_cast<int>(width), name.c_str(), s.precision, s.recall, s.f1,
          c->true_positive, c->predicted_total, c->reference_total);
    } else {
      std::snprintf(line, sizeof(line), "%-*s  %9.4f  %9.4f  %9.4f\n",
                    static_cast<int>(width), name.c_str(), s.precision,
                    s.recall, s.f1);
    }
    out << line;
  };

  std::snprintf(line, sizeof(line), "%-*s  %9s  %9s  %9s  %8s  %8s  %8s\n",
                static_cast<int>(width), "class", "precision", "recall", "f1",
                "tp", "pred", "ref");
  out << "mode: " << ModeName(report.mode) << "\n" << line;
  for (const auto &[label, cls] : report.per_class) {
    row(label, cls.scores, &cls.counts);
  }
  row("micro", report.micro, &report.micro_counts);
  row("macro", report.macro, nullptr);
  return out.str();
}

}  // namespace seqlab::eval
