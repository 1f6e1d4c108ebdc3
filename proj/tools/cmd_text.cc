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

// oie-filter, build-prompts, parse-responses, loss

#include <memory>
#include <set>
#include <sstream>

#include "cli_util.h"
#include "seqlab/corpus.h"
#include "seqlab/oie.h"
#include "seqlab/prompts.h"
#include "seqlab/random.h"
#include "seqlab/respparse.h"

namespace seqlab::cli {

namespace {

using nlohmann::ordered_json;

std::string ReadWholeFile(const std::string &path) {
  CheckInputs({path});
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::string WithoutTrailingNewline(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
    text.pop_back();
  }
  return text;
}

void AddOieFilter(CLI::App &app, int *exit_code) {
  auto *cmd = app.add_subcommand(
      "oie-filter",
      "Turn OIE silver triples into relation-labeled records.\n"
      "Input JSONL: {\"tokens\": [str], \"triples\": [{\"subject\", "
      "\"relation\", \"object\"}]} where each part is a list of token "
      "indices, {\"implicit\": text} or null.\n"
      "Output JSONL: {\"tokens\", \"tags\"} with B-/I-Relation tags.");
  struct Args {
    std::string input, out;
    bool stats = false;
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("triples", args->input, "Triple records")->required();
  cmd->add_option("-o,--out", args->out, "Output path (default stdout)");
  cmd->add_flag("--stats", args->stats, "Print filter counters to stderr");
  cmd->callback([args, exit_code] {
    CheckInputs({args->input});
    corpus::JsonlReader reader(args->input);
    Output out(args->out);
    oie::FilterStats stats;
    oie::RelationStats relations;
    ordered_json object;
    while (InFile(args->input, [&] { return reader.NextObject(&object); })) {
      const std::string where =
          args->input + ":" + std::to_string(reader.line_no());
      const oie::RelationLabeling labeling = InFile(where, [&] {
        const oie::TripleRecord record = oie::TripleRecordFromJson(object);
        return oie::FilterAndMerge(record.tokens, record.triples, &stats);
      });
      ++relations.sentences_total;
      if (!labeling.relations.empty()) ++relations.sentences_with_relations;
      out.stream() << corpus::ToJsonLine(labeling.ToRecord()) << "\n";
    }
    out.Close();
    if (args->stats) {
      ordered_json s;
      s["sentences"] = relations.sentences_total;
      s["sentences_with_relations"] = relations.sentences_with_relations;
      s["implicit"] = stats.implicit;
      s["non_consecutive"] = stats.non_consecutive;
      s["incomplete"] = stats.incomplete;
      s["long_relation"] = stats.long_relation;
      s["out_of_order"] = stats.out_of_order;
      s["merged_away"] = stats.merged_away;
      s["duplicates"] = stats.duplicates;
      s["kept"] = stats.kept;
      std::cerr << s.dump() << "\n";
    }
    *exit_code = kExitOk;
  });
}

void AddBuildPrompts(CLI::App &app, int *exit_code) {
  auto *cmd = app.add_subcommand(
      "build-prompts",
      "Render one fine-tuning prompt per corpus record, with demonstrations "
      "drawn from the rest of the corpus.\n"
      "Output JSONL: {\"meta\": {seed, shots, query, demonstrations, "
      "objective, training}, \"layout\": {text, regions, eos_included}, "
      "\"token_offsets\": [[start, end]], \"loss_mask\": [bool]}.\n"
      "Tokens come from a whitespace/punctuation stand-in tokenizer.");
  struct Args {
    std::string corpus, out, instruction, instruction_file;
    std::string objective = "src", eos = std::string(prompts::kDefaultEos);
    std::vector<std::string> options;
    std::size_t shots = 0;
    std::uint64_t seed = kDefaultSeed;
    bool no_instruction = false, eval = false, verb_field = false;
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("corpus", args->corpus, "Corpus records (JSONL)")->required();
  cmd->add_option("-o,--out", args->out, "Output path (default stdout)");
  cmd->add_option("--shots", args->shots, "Demonstrations per prompt")
      ->capture_default_str();
  cmd->add_option("--seed", args->seed, "Demonstration sampling seed")
      ->capture_default_str();
  auto *instr =
      cmd->add_option("--instruction", args->instruction, "Instruction text");
  auto *instr_file =
      cmd->add_option("--instruction-file", args->instruction_file,
                      "Read the instruction from a file");
  auto *none = cmd->add_flag("--no-instruction", args->no_instruction,
                             "Omit the instruction and options block");
  instr->excludes(instr_file)->excludes(none);
  instr_file->excludes(none);
  cmd->add_option("--options", args->options,
                  "Class names (default: labels found in the corpus)");
  cmd->add_option("--objective", args->objective, "vanilla, src or mrc")
      ->check(CLI::IsMember({"vanilla", "src", "mrc"}))
      ->capture_default_str();
  cmd->add_flag("--eval", args->eval,
                "Evaluation prompts: stop before the query response");
  cmd->add_flag("--verb-field", args->verb_field,
                "Add a verb block taken from each record's verb_index");
  cmd->add_option("--eos", args->eos, "End-of-sequence marker")
      ->capture_default_str();
  cmd->callback([args, exit_code] {
    if (!args->no_instruction && args->instruction.empty() &&
        args->instruction_file.empty()) {
      throw CLI::ValidationError(
          "build-prompts",
          "give --instruction, --instruction-file or --no-instruction");
    }
    CheckInputs({args->corpus});
    std::optional<std::string> instruction;
    if (!args->instruction_file.empty()) {
      instruction =
          WithoutTrailingNewline(ReadWholeFile(args->instruction_file));
    } else if (!args->no_instruction) {
      instruction = args->instruction;
    }
    const prompts::Objective objective =
        prompts::ParseObjective(args->objective);

    // Demonstrations may come from anywhere in the corpus, so the records
    // are held in memory.
    const std::vector<corpus::CorpusRecord> records =
        InFile(args->corpus, [&] { return corpus::ReadJsonl(args->corpus); });
    std::vector<prompts::PromptExample> examples;
    examples.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      examples.push_back(
          InFile(args->corpus + ": record " + std::to_string(i + 1),
                 [&] { return prompts::ExampleFromRecord(records[i]); }));
    }
    std::vector<std::string> options = SplitOptions(args->options);
    if (options.empty()) {
      std::set<std::string> labels;
      for (const auto &record : records) {
        for (const auto &tag : record.tags()) {
          if (!tag.is_outside()) labels.insert(tag.label());
        }
      }
      options.assign(labels.begin(), labels.end());
    }

    Output out(args->out);
    for (std::size_t q = 0; q < records.size(); ++q) {
      const std::vector<std::size_t> demos = prompts::SampleDemonstrations(
          records.size(), q, args->shots, args->seed);
      prompts::PromptSpec spec;
      spec.instruction = instruction;
      if (instruction) spec.options = options;
      for (std::size_t d : demos) spec.demonstrations.push_back(examples[d]);
      spec.query = examples[q];
      spec.include_query_response = !args->eval;
      spec.verb_field = args->verb_field;
      spec.eos = args->eos;
      const prompts::PromptLayout layout =
          InFile(args->corpus + ": record " + std::to_string(q + 1),
                 [&] { return prompts::BuildPrompt(spec); });

      ordered_json line;
      ordered_json meta;
      meta["seed"] = args->seed;
      meta["shots"] = args->shots;
      meta["query"] = q;
      meta["demonstrations"] = demos;
      meta["objective"] = prompts::ObjectiveName(objective);
      meta["training"] = !args->eval;
      line["meta"] = std::move(meta);
      line["layout"] = prompts::LayoutToJson(layout);
      const prompts::TokenOffsets offsets =
          prompts::SimpleTokenize(layout.text);
      auto offsets_json = ordered_json::array();
      for (const auto &[start, end] : offsets) {
        offsets_json.push_back({start, end});
      }
      line["token_offsets"] = std::move(offsets_json);
      if (!args->eval) {
        line["loss_mask"] = prompts::ObjectiveMask(
            prompts::ProjectRegions(layout, offsets), objective);
      }
      out.stream() << line.dump() << "\n";
    }
    out.Close();
    *exit_code = kExitOk;
  });
}

void AddParseResponses(CLI::App &app, int *exit_code) {
  auto *cmd = app.add_subcommand(
      "parse-responses",
      "Map generated responses back to IOB2 tags.\n"
      "Input JSONL: {\"tokens\": [str], \"response\": str, \"options\"?: "
      "[str]}; only the first line of each response is read.\n"
      "Output JSONL: {\"tokens\", \"tags\", \"valid\", \"na\"}.");
  struct Args {
    std::string input, out;
    std::vector<std::string> options;
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("responses", args->input, "Response records")->required();
  cmd->add_option("-o,--out", args->out, "Output path (default stdout)");
  cmd->add_option("--options", args->options,
                  "Class names (overrides per-record options)");
  cmd->callback([args, exit_code] {
    CheckInputs({args->input});
    const std::vector<std::string> global = SplitOptions(args->options);
    corpus::JsonlReader reader(args->input);
    Output out(args->out);
    ordered_json object;
    while (InFile(args->input, [&] { return reader.NextObject(&object); })) {
      const std::string where =
          args->input + ":" + std::to_string(reader.line_no());
      std::vector<std::string> tokens;
      std::string response;
      std::vector<std::string> options = global;
      try {
        tokens = object.at("tokens").get<std::vector<std::string>>();
        response = object.at("response").get<std::string>();
        if (options.empty() && object.contains("options")) {
          options = object.at("options").get<std::vector<std::string>>();
        }
      } catch (const nlohmann::json::exception &e) {
        throw ParseError(reader.line_no(), where + ": " + e.what());
      }
      if (options.empty()) {
        throw ConfigError(where + ": no options given for this record");
      }
      const respparse::ParsedResponse parsed =
          respparse::ParseResponse(response, options);
      const std::vector<tagging::Tag> tags =
          respparse::MapToTags(parsed, tokens);
      ordered_json line;
      line["tokens"] = tokens;
      line["tags"] = tagging::TagStrings(tags);
      line["valid"] = parsed.valid;
      line["na"] = parsed.is_na;
      out.stream() << line.dump() << "\n";
    }
    out.Close();
    *exit_code = kExitOk;
  });
}

void AddLoss(CLI::App &app, int *exit_code) {
  auto *cmd = app.add_subcommand(
      "loss",
      "Response-oriented loss for prompts given per-token log-probabilities.\n"
      "Prompts: build-prompts output (or bare layouts), one per line.\n"
      "Log-probs JSONL: [float <= 0] or {\"logprobs\": [float <= 0], "
      "\"pad_mask\"?: [bool]} "
      "aligned with the stand-in tokenization of each prompt.\n"
      "Output JSONL: {\"loss\", \"selected\", \"empty_selection\"}.");
  struct Args {
    std::string prompts, logprobs, out;
    std::string objective = "src", reduction = "mean";
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("prompts", args->prompts, "Prompt layouts")->required();
  cmd->add_option("logprobs", args->logprobs, "Log-probabilities")->required();
  cmd->add_option("-o,--out", args->out, "Output path (default stdout)");
  cmd->add_option("--objective", args->objective, "vanilla, src or mrc")
      ->check(CLI::IsMember({"vanilla", "src", "mrc"}))
      ->capture_default_str();
  cmd->add_option("--reduction", args->reduction, "sum or mean")
      ->check(CLI::IsMember({"sum", "mean"}))
      ->capture_default_str();
  cmd->callback([args, exit_code] {
    CheckInputs({args->prompts, args->logprobs});
    const prompts::Objective objective =
        prompts::ParseObjective(args->objective);
    const prompts::Reduction reduction =
        prompts::ParseReduction(args->reduction);
    corpus::JsonlReader layouts(args->prompts);
    corpus::JsonlReader logprobs(args->logprobs);
    Output out(args->out);
    ordered_json layout_json, lp_json;
    std::size_t pairs = 0;
    while (true) {
      const bool has_layout = InFile(
          args->prompts, [&] { return layouts.NextObject(&layout_json); });
      const bool has_lp =
          InFile(args->logprobs, [&] { return logprobs.NextObject(&lp_json); });
      if (has_layout != has_lp) {
        throw LengthMismatch(pairs,
                             "prompt and log-probability files hold "
                             "different numbers of records");
      }
      if (!has_layout) break;
      const std::string where =
          args->logprobs + ":" + std::to_string(logprobs.line_no());
      const prompts::PromptLayout layout = InFile(args->prompts, [&] {
        return prompts::LayoutFromJson(layout_json.contains("layout")
                                           ? layout_json.at("layout")
                                           : layout_json);
      });
      prompts::TokenLogProbs lp;
      try {
        if (lp_json.is_array()) {
          lp.logprobs = lp_json.get<std::vector<double>>();
        } else {
          lp.logprobs = lp_json.at("logprobs").get<std::vector<double>>();
        }
        if (lp_json.is_object() && lp_json.contains("pad_mask")) {
          lp.pad_mask = lp_json.at("pad_mask").get<std::vector<bool>>();
        }
      } catch (const nlohmann::json::exception &e) {
        throw ParseError(logprobs.line_no(), where + ": " + e.what());
      }
      const prompts::TokenRegions regions =
          prompts::ProjectRegions(layout, prompts::SimpleTokenize(layout.text));
      const prompts::LossResult result = InFile(where, [&] {
        return prompts::ComputeLoss(regions, lp, objective, reduction);
      });
      ordered_json line;
      line["loss"] = result.value;
      line["selected"] = result.selected;
      line["empty_selection"] = result.empty_selection;
      out.stream() << line.dump() << "\n";
      ++pairs;
    }
    out.Close();
    *exit_code = kExitOk;
  });
}

}  // namespace

void AddTextCommands(CLI::App &app, int *exit_code) {
  AddOieFilter(app, exit_code);
  AddBuildPrompts(app, exit_code);
  AddParseResponses(app, exit_code);
  AddLoss(app, exit_code);
}

}  // namespace seqlab::cli
