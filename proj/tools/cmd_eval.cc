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

// evaluate, rdrr

#include <cmath>
#include <memory>
#include <optional>

#include "cli_util.h"
#include "seqlab/corpus.h"
#include "seqlab/eval.h"

namespace seqlab::cli {

namespace {

// Record-at-a-time reader over JSONL or CoNLL columns. CoNLL files are
// parsed up front; JSONL streams.
class RecordSource {
 public:
  RecordSource(const std::string &path, const std::string &format,
               const corpus::ColumnMap &columns)
      : path_(path) {
    if (format == "conll") {
      conll_ = InFile(path, [&] { return corpus::ReadConll(path, columns); });
    } else {
      jsonl_ = std::make_unique<corpus::JsonlReader>(path);
    }
  }

  bool Next(corpus::CorpusRecord *record) {
    if (jsonl_) return InFile(path_, [&] { return jsonl_->Next(record); });
    if (index_ >= conll_.size()) return false;
    *record = std::move(conll_[index_++]);
    return true;
  }

  // 1-based record number of the last record returned.
  std::size_t position() const { return jsonl_ ? jsonl_->line_no() : index_; }

 private:
  std::string path_;
  std::unique_ptr<corpus::JsonlReader> jsonl_;
  std::vector<corpus::CorpusRecord> conll_;
  std::size_t index_ = 0;
};

struct FormatFlags {
  std::string format = "jsonl";
  std::size_t token_col = 0;
  std::size_t tag_col = 1;
  std::optional<std::size_t> head_col;
  std::optional<std::size_t> deprel_col;
  bool zero_based_heads = false;

  void Register(CLI::App *cmd) {
    cmd->add_option("--format", format, "Input format")
        ->check(CLI::IsMember({"jsonl", "conll"}))
        ->capture_default_str();
    cmd->add_option("--token-col", token_col, "CoNLL token column (0-based)")
        ->capture_default_str();
    cmd->add_option("--tag-col", tag_col, "CoNLL tag column (0-based)")
        ->capture_default_str();
    cmd->add_option("--head-col", head_col, "CoNLL head column (0-based)");
    cmd->add_option("--deprel-col", deprel_col,
                    "CoNLL dependency label column (0-based)");
    cmd->add_flag("--zero-based-heads", zero_based_heads,
                  "CoNLL heads are 0-based token indices, -1 for the root");
  }

  corpus::ColumnMap Columns() const {
    corpus::ColumnMap map;
    map.token = token_col;
    map.tag = tag_col;
    map.head = head_col;
    map.deprel = deprel_col;
    map.one_based_heads = !zero_based_heads;
    return map;
  }
};

constexpr const char *kRecordSchema =
    "JSONL records: {\"tokens\": [str], \"tags\": [\"O\"|\"B-X\"|\"I-X\"], "
    "\"heads\"?: [int, -1 = root], \"deprels\"?: [str], \"verb_index\"?: int}";

}  // namespace

void AddEvalCommands(CLI::App &app, int *exit_code) {
  {
    auto *cmd = app.add_subcommand(
        "evaluate", std::string("Strict span-level precision/recall/F1.\n") +
                        kRecordSchema +
                        "\nReferences and predictions pair up line by line.");
    struct Args {
      std::string refs, preds, out, mode = "sc", scheme = "iob2";
      std::string decode = "discard";
      bool json = false, table = false;
      FormatFlags fmt;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("refs", args->refs, "Reference records")->required();
    cmd->add_option("preds", args->preds, "Predicted records")->required();
    cmd->add_option("--mode", args->mode, "sd: spans only, sc: spans + class")
        ->check(CLI::IsMember({"sd", "sc"}))
        ->capture_default_str();
    cmd->add_option("--scheme", args->scheme, "Tagging scheme")
        ->check(CLI::IsMember({"iob2", "iob1"}))
        ->capture_default_str();
    auto *json =
        cmd->add_flag("--json", args->json, "Print the report as JSON");
    cmd->add_flag("--table", args->table, "Print a text table (default)")
        ->excludes(json);
    cmd->add_option("--decode", args->decode,
                    "Stray I- tags: discard (read as O), repair (read as "
                    "B-) or strict (reject the file)")
        ->check(CLI::IsMember({"discard", "repair", "strict"}))
        ->capture_default_str();
    cmd->add_option("-o,--out", args->out, "Output path (default stdout)");
    args->fmt.Register(cmd);
    cmd->callback([args, exit_code] {
      CheckInputs({args->refs, args->preds});
      eval::EvalOptions options;
      options.mode = eval::ParseMode(args->mode);
      options.scheme = args->scheme == "iob1" ? tagging::Scheme::kIob1
                                              : tagging::Scheme::kIob2;
      options.reference_decode = tagging::ParseDecodeMode(args->decode);
      options.prediction_decode = options.reference_decode;
      RecordSource refs(args->refs, args->fmt.format, args->fmt.Columns());
      RecordSource preds(args->preds, args->fmt.format, args->fmt.Columns());
      Output out(args->out);

      eval::SpanEvaluator evaluator(options);
      corpus::CorpusRecord ref, pred;
      std::size_t pairs = 0;
      while (true) {
        const bool has_ref = refs.Next(&ref);
        const bool has_pred = preds.Next(&pred);
        if (has_ref != has_pred) {
          throw LengthMismatch(
              pairs,
              "reference and prediction files hold different numbers "
              "of records (" +
                  std::string(has_ref ? "predictions" : "references") +
                  " end after " + std::to_string(pairs) + ")");
        }
        if (!has_ref) break;
        if (ref.tokens() != pred.tokens()) {
          throw AlignmentError(args->preds + ": record at line " +
                               std::to_string(preds.position()) +
                               " has different tokens than its reference");
        }
        InFile(args->preds + ":" + std::to_string(preds.position()),
               [&] { evaluator.Add(ref.tags(), pred.tags()); });
        ++pairs;
      }
      const eval::EvalReport report = evaluator.Report();
      for (const eval::Scores *s : {&report.micro, &report.macro}) {
        for (double v : {s->precision, s->recall, s->f1}) {
          if (!(v >= 0.0 && v <= 1.0)) {
            throw std::logic_error("score outside [0, 1]");
          }
        }
      }
      if (args->json) {
        out.stream() << eval::ReportToJson(report).dump(2) << "\n";
      } else {
        out.stream() << eval::FormatTable(report);
      }
      out.Close();
      *exit_code = kExitOk;
    });
  }

  {
    auto *cmd = app.add_subcommand(
        "rdrr", std::string("Share of dependency arcs inside spans that point "
                            "rightwards.\n") +
                    kRecordSchema);
    struct Args {
      std::string corpus, out;
      FormatFlags fmt;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("corpus", args->corpus, "Corpus with heads")->required();
    cmd->add_option("-o,--out", args->out, "Output path (default stdout)");
    args->fmt.Register(cmd);
    cmd->callback([args, exit_code] {
      CheckInputs({args->corpus});
      RecordSource source(args->corpus, args->fmt.format, args->fmt.Columns());
      Output out(args->out);
      corpus::ArcCounts total;
      std::size_t records = 0;
      corpus::CorpusRecord record;
      while (source.Next(&record)) {
        const corpus::ArcCounts counts =
            InFile(args->corpus + ":" + std::to_string(source.position()),
                   [&] { return corpus::CountSpanArcs({&record, 1}); });
        total.left += counts.left;
        total.right += counts.right;
        ++records;
      }
      nlohmann::ordered_json report;
      report["records"] = records;
      report["left"] = total.left;
      report["right"] = total.right;
      report["rdrr"] = InFile(args->corpus, [&] { return total.Ratio(); });
      out.stream() << report.dump() << "\n";
      out.Close();
      *exit_code = kExitOk;
    });
  }
}

}  // namespace seqlab::cli
