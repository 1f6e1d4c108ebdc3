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

// compile-grammar, enum-configs, attend

#include <memory>

#include "cli_util.h"
#include "seqlab/attnmask.h"
#include "seqlab/genfsm.h"

namespace seqlab::cli {

namespace {

using nlohmann::ordered_json;

attn::Matrix LoadMatrix(const std::string &path, bool binary) {
  CheckInputs({path});
  return InFile(path, [&] {
    if (binary) {
      std::ifstream in(path, std::ios::binary);
      return attn::ReadMatrix(in);
    }
    std::ifstream in(path);
    ordered_json json;
    try {
      json = ordered_json::parse(in);
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(0, e.what());
    }
    return attn::MatrixFromJson(json);
  });
}

}  // namespace

void AddModelCommands(CLI::App &app, int *exit_code) {
  {
    auto *cmd = app.add_subcommand(
        "compile-grammar",
        "Compile the response grammar for a set of classes into a DFA.\n"
        "Output JSON: {\"grammar\": {options, allows_na}, \"dfa\": {states, "
        "start, dead, accepting, transitions: [[[lo, hi, to]] per state]}}.\n"
        "With --check, prints the automaton's verdict on each string "
        "instead.");
    struct Args {
      std::vector<std::string> options, check;
      std::string out;
      bool na = false;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("--options", args->options, "Class names")->required();
    cmd->add_flag("--na", args->na, "Accept the bare NA response");
    cmd->add_option("--check", args->check,
                    "Strings to classify as accepting, live or dead");
    cmd->add_option("-o,--out", args->out, "Output path (default stdout)");
    cmd->callback([args, exit_code] {
      genfsm::OutputGrammar grammar;
      grammar.options = SplitOptions(args->options);
      grammar.allows_na = args->na;
      const genfsm::Dfa dfa = genfsm::Compile(grammar);
      Output out(args->out);
      if (!args->check.empty()) {
        for (const std::string &text : args->check) {
          out.stream() << genfsm::WalkResultName(genfsm::Walk(dfa, text))
                       << "\t" << text << "\n";
        }
      } else {
        ordered_json json;
        json["grammar"] = {{"options", grammar.options},
                           {"allows_na", grammar.allows_na}};
        json["dfa"] = dfa.ToJson();
        out.stream() << json.dump() << "\n";
      }
      out.Close();
      *exit_code = kExitOk;
    });
  }

  {
    auto *cmd = app.add_subcommand(
        "enum-configs",
        "List layer-group unmasking codes, one per line. The first digit is "
        "the group nearest the input; 1 means causal masking is removed.");
    struct Args {
      std::size_t groups = attn::kDefaultGroups;
      std::size_t blocks = attn::kDefaultBlocksPerGroup;
      std::string order = "gray", out;
      bool layers = false;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("--groups", args->groups, "Number of layer groups")
        ->check(CLI::Range(1, 20))
        ->capture_default_str();
    cmd->add_option("--blocks-per-group", args->blocks, "Layers per group")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--order", args->order, "gray or binary")
        ->check(CLI::IsMember({"gray", "binary"}))
        ->capture_default_str();
    cmd->add_flag("--layers", args->layers,
                  "Append the per-layer mask kinds (c = causal, u = unmasked)");
    cmd->add_option("-o,--out", args->out, "Output path (default stdout)");
    cmd->callback([args, exit_code] {
      Output out(args->out);
      for (const attn::UnmaskConfig &config : attn::EnumerateConfigs(
               args->groups, attn::ParseConfigOrder(args->order),
               args->blocks)) {
        out.stream() << config.Code();
        if (args->layers) {
          out.stream() << "\t";
          for (std::size_t l = 0; l < config.num_layers(); ++l) {
            out.stream() << (config.LayerKind(l) == attn::MaskKind::kCausal
                                 ? 'c'
                                 : 'u');
          }
        }
        out.stream() << "\n";
      }
      out.Close();
      *exit_code = kExitOk;
    });
  }

  {
    auto *cmd = app.add_subcommand(
        "attend",
        "Reference single-head attention softmax((QK^T + M)/sqrt(d))V.\n"
        "Matrices are JSON arrays of rows, or with --binary a header of two "
        "little-endian uint64 (rows, cols) followed by row-major float64.");
    struct Args {
      std::string q, k, v, out, mask = "causal", config;
      std::size_t blocks = attn::kDefaultBlocksPerGroup;
      bool binary = false, binary_out = false, weights = false;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("q", args->q, "Queries")->required();
    cmd->add_option("k", args->k, "Keys")->required();
    cmd->add_option("v", args->v, "Values (ignored with --weights)")
        ->required();
    cmd->add_option("--mask", args->mask, "causal or unmasked")
        ->check(CLI::IsMember({"causal", "unmasked"}))
        ->capture_default_str();
    cmd->add_option("--stack", args->config,
                    "Run Q through a self-attention stack with this "
                    "unmasking code instead (K and V are ignored)");
    cmd->add_option("--blocks-per-group", args->blocks,
                    "Layers per group for --stack")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--binary", args->binary, "Read binary matrices");
    cmd->add_flag("--binary-out", args->binary_out, "Write a binary matrix");
    cmd->add_flag("--weights", args->weights,
                  "Print the attention weights instead of the output");
    cmd->add_option("-o,--out", args->out, "Output path (default stdout)");
    cmd->callback([args, exit_code] {
      const attn::Matrix q = LoadMatrix(args->q, args->binary);
      attn::Matrix result;
      if (!args->config.empty()) {
        result = attn::ForwardStack(
            q, attn::UnmaskConfig::Parse(args->config, args->blocks));
      } else {
        const attn::Matrix k = LoadMatrix(args->k, args->binary);
        const attn::Matrix mask =
            attn::MakeMask(args->mask == "causal" ? attn::MaskKind::kCausal
                                                  : attn::MaskKind::kUnmasked,
                           static_cast<std::size_t>(q.rows()));
        if (args->weights) {
          result = attn::AttentionWeights(q, k, mask);
        } else {
          result =
              attn::Attention(q, k, LoadMatrix(args->v, args->binary), mask);
        }
      }
      Output out(args->out);
      if (args->binary_out) {
        attn::WriteMatrix(out.stream(), result);
      } else {
        out.stream() << attn::MatrixToJson(result).dump() << "\n";
      }
      out.Close();
      *exit_code = kExitOk;
    });
  }
}

}  // namespace seqlab::cli
