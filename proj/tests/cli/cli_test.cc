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

// Runs the seqlab binary end to end and checks output and exit codes.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("seqlab_cli_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Write(const std::string &name, const std::string &content) {
    const fs::path path = dir_ / name;
    std::ofstream(path, std::ios::binary) << content;
    return path;
  }

  RunResult Run(const std::string &args) {
    const fs::path err = dir_ / "stderr.txt";
    const std::string command =
        std::string(SEQLAB_BIN) + " " + args + " 2>" + err.string();
    RunResult result;
    FILE *pipe = ::popen(command.c_str(), "r");
    if (pipe == nullptr) return result;
    char buffer[4096];
    std::size_t n;
    while ((n = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
      result.out.append(buffer, n);
    }
    const int status = ::pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.err = Slurp(err);
    return result;
  }

  static std::string Data(const std::string &name) {
    return std::string(SEQLAB_TEST_DATA) + "/cli/" + name;
  }

  fs::path dir_;
};

TEST_F(CliTest, WorkedExampleTable) {
  const RunResult r = Run("evaluate " + Data("worked_refs.jsonl") + " " +
                          Data("worked_preds.jsonl"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mode: sc"), std::string::npos);
  std::istringstream lines(r.out);
  std::string line;
  bool saw_micro = false;
  while (std::getline(lines, line)) {
    if (line.rfind("micro", 0) != 0) continue;
    saw_micro = true;
    std::istringstream fields(line);
    std::string name;
    double p, rc, f1;
    std::size_t tp, pred, ref;
    fields >> name >> p >> rc >> f1 >> tp >> pred >> ref;
    EXPECT_EQ(p, 0.25);
    EXPECT_EQ(rc, 0.3333);
    EXPECT_EQ(f1, 0.2857);
    EXPECT_EQ(tp, 1u);
    EXPECT_EQ(pred, 4u);
    EXPECT_EQ(ref, 3u);
  }
  EXPECT_TRUE(saw_micro) << r.out;
}

TEST_F(CliTest, WorkedExampleJson) {
  const RunResult r = Run("evaluate --json " + Data("worked_refs.jsonl") + " " +
                          Data("worked_preds.jsonl"));
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(r.out);
  EXPECT_NEAR(report["micro"]["f1"].get<double>(), 2.0 / 7.0, 1e-12);
  EXPECT_NEAR(report["macro"]["f1"].get<double>(), 1.0 / 3.0, 1e-12);
}

TEST_F(CliTest, RepairDecodeCountsStraySpan) {
  const RunResult r =
      Run("evaluate --json --decode repair " + Data("worked_refs.jsonl") + " " +
          Data("worked_preds.jsonl"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["micro"]["precision"].get<double>(), 0.2,
              1e-12);
}

TEST_F(CliTest, IdenticalFilesScorePerfect) {
  const RunResult r = Run("evaluate --json " + Data("worked_refs.jsonl") + " " +
                          Data("worked_refs.jsonl"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["micro"]["f1"].get<double>(), 1.0);
}

TEST_F(CliTest, SpanDetectionMode) {
  const RunResult r =
      Run("evaluate --json --mode sd " + Data("worked_refs.jsonl") + " " +
          Data("worked_preds.jsonl"));
  ASSERT_EQ(r.code, 0) << r.err;
  // Only the PER span has matching boundaries.
  EXPECT_NEAR(json::parse(r.out)["micro"]["precision"].get<double>(), 0.25,
              1e-12);
}

TEST_F(CliTest, MalformedPredictionsExitTwo) {
  const auto preds =
      Write("bad.jsonl", "{\"tokens\": [\"a\"], \"tags\": [\"X-Y\"]}\n");
  const auto refs =
      Write("ref.jsonl", "{\"tokens\": [\"a\"], \"tags\": [\"O\"]}\n");
  const RunResult r = Run("evaluate " + refs.string() + " " + preds.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.jsonl"), std::string::npos) << r.err;
  const auto broken = Write("broken.jsonl", "{not json\n");
  EXPECT_EQ(Run("evaluate " + refs.string() + " " + broken.string()).code, 2);
}

TEST_F(CliTest, RecordCountMismatchExitTwo) {
  const auto one =
      Write("one.jsonl", "{\"tokens\": [\"a\"], \"tags\": [\"O\"]}\n");
  const auto two = Write("two.jsonl",
                         "{\"tokens\": [\"a\"], \"tags\": [\"O\"]}\n"
                         "{\"tokens\": [\"b\"], \"tags\": [\"O\"]}\n");
  EXPECT_EQ(Run("evaluate " + one.string() + " " + two.string()).code, 2);
}

TEST_F(CliTest, MissingFileExitTwo) {
  const RunResult r = Run("evaluate " + (dir_ / "nope.jsonl").string() + " " +
                          Data("worked_refs.jsonl"));
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(Run("evaluate --bogus a b").code, 1);
  EXPECT_EQ(Run("").code, 1);
  EXPECT_EQ(Run("frobnicate").code, 1);
  EXPECT_EQ(Run("enum-configs --order sideways").code, 1);
}

TEST_F(CliTest, HelpAndVersionExitZero) {
  const RunResult help = Run("--help");
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("evaluate"), std::string::npos);
  EXPECT_EQ(Run("--version").code, 0);
  EXPECT_EQ(Run("evaluate --help").code, 0);
}

TEST_F(CliTest, EmptyInputsEvaluate) {
  const auto empty = Write("empty.jsonl", "");
  const RunResult r =
      Run("evaluate --json " + empty.string() + " " + empty.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["micro"]["f1"].get<double>(), 0.0);
}

TEST_F(CliTest, EnumConfigs) {
  const RunResult r = Run("enum-configs --groups 2");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "00\n01\n11\n10\n");
  const RunResult binary = Run("enum-configs --groups 2 --order binary");
  EXPECT_EQ(binary.out, "00\n01\n10\n11\n");
  const RunResult layers =
      Run("enum-configs --groups 2 --blocks-per-group 2 --layers");
  EXPECT_EQ(layers.out, "00\tcccc\n01\tccuu\n11\tuuuu\n10\tuucc\n");
  EXPECT_EQ(Run("enum-configs --groups 0").code, 1);
}

TEST_F(CliTest, OutputIsDeterministic) {
  const std::string corpus = Data("worked_refs.jsonl");
  const auto out1 = dir_ / "a.jsonl", out2 = dir_ / "b.jsonl";
  ASSERT_EQ(Run("build-prompts --no-instruction --shots 1 -o " + out1.string() +
                " " + corpus)
                .code,
            0);
  ASSERT_EQ(Run("build-prompts --no-instruction --shots 1 -o " + out2.string() +
                " " + corpus)
                .code,
            0);
  EXPECT_EQ(Slurp(out1), Slurp(out2));
  EXPECT_FALSE(Slurp(out1).empty());
}

TEST_F(CliTest, RdrrEmptyInputExitTwo) {
  const auto empty = Write("empty.jsonl", "");
  EXPECT_EQ(Run("rdrr " + empty.string()).code, 2);
}

TEST_F(CliTest, RdrrCounts) {
  // Span tokens point right (New -> York, York -> went) or left
  // (up -> went); the root arc of "went" is not counted.
  const auto corpus =
      Write("deps.jsonl",
            "{\"tokens\": [\"New\", \"York\", \"went\", \"up\"], "
            "\"tags\": [\"B-LOC\", \"I-LOC\", \"B-X\", \"I-X\"], "
            "\"heads\": [1, 2, -1, 2]}\n");
  const RunResult r = Run("rdrr " + corpus.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(r.out);
  EXPECT_EQ(report["records"], 1);
  EXPECT_EQ(report["left"], 1);
  EXPECT_EQ(report["right"], 2);
  EXPECT_NEAR(report["rdrr"].get<double>(), 2.0 / 3.0, 1e-15);
}

TEST_F(CliTest, CompileGrammarCheck) {
  const RunResult r =
      Run("compile-grammar --options class_1,class_2 --na --check NA "
          "'a:class_1;' 'a;;'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "accepting\tNA\nlive\ta:class_1;\ndead\ta;;\n");
  const RunResult table = Run("compile-grammar --options x");
  ASSERT_EQ(table.code, 0);
  const json dfa = json::parse(table.out);
  EXPECT_FALSE(dfa["grammar"]["allows_na"].get<bool>());
  EXPECT_GT(dfa["dfa"]["states"].get<int>(), 3);
  EXPECT_EQ(Run("compile-grammar --options a,a").code, 2);
}

TEST_F(CliTest, ParseResponses) {
  const auto input =
      Write("responses.jsonl",
            "{\"tokens\": [\"LOS\", \"ANGELES\", \"AT\", \"MONTREAL\"], "
            "\"response\": \"LOS ANGELES:organization;MONTREAL:location\"}\n"
            "{\"tokens\": [\"a\"], \"response\": \"a:bogus\"}\n");
  const RunResult r = Run(
      "parse-responses --options person,location,organization,miscellaneous " +
      input.string());
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_EQ(json::parse(first)["tags"],
            json::parse("[\"B-organization\", \"I-organization\", \"O\", "
                        "\"B-location\"]"));
  EXPECT_FALSE(json::parse(second)["valid"].get<bool>());
  EXPECT_EQ(json::parse(second)["tags"], json::parse("[\"O\"]"));
}

TEST_F(CliTest, PromptsThenLoss) {
  const auto prompts = dir_ / "prompts.jsonl";
  ASSERT_EQ(Run("build-prompts --no-instruction --objective src -o " +
                prompts.string() + " " + Data("worked_refs.jsonl"))
                .code,
            0);
  const json line = json::parse(Slurp(prompts));
  const std::size_t tokens = line["token_offsets"].size();
  ASSERT_GT(tokens, 0u);
  std::string lp = "[";
  for (std::size_t i = 0; i < tokens; ++i) lp += i ? ",-1" : "-1";
  lp += "]\n";
  const auto logprobs = Write("lp.jsonl", lp);
  const RunResult r = Run("loss --objective src --reduction sum " +
                          prompts.string() + " " + logprobs.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const json result = json::parse(r.out);
  std::size_t selected = 0;
  for (const auto &flag : line["loss_mask"]) selected += flag.get<bool>();
  EXPECT_EQ(result["selected"].get<std::size_t>(), selected);
  EXPECT_EQ(result["loss"].get<double>(), static_cast<double>(selected));
  const auto short_lp = Write("short.jsonl", "[-1]\n");
  EXPECT_EQ(Run("loss " + prompts.string() + " " + short_lp.string()).code, 2);
}

TEST_F(CliTest, AttendCausal) {
  const auto q = Write("q.json", "[[1,0],[0,1]]");
  const RunResult r =
      Run("attend " + q.string() + " " + q.string() + " " + q.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const json out = json::parse(r.out);
  EXPECT_EQ(out[0][0].get<double>(), 1.0);
  EXPECT_EQ(out[0][1].get<double>(), 0.0);
  const auto ragged = Write("r.json", "[[1,0],[0]]");
  EXPECT_EQ(
      Run("attend " + ragged.string() + " " + q.string() + " " + q.string())
          .code,
      2);
}

TEST_F(CliTest, OieFilterStats) {
  const auto input = Write(
      "triples.jsonl",
      "{\"tokens\": [\"The\", \"aircraft\", \"broke\", \"into\", \"two\", "
      "\"parts\"], \"triples\": [{\"subject\": [0, 1], \"relation\": [2, 3], "
      "\"object\": [4, 5]}]}\n");
  const RunResult r = Run("oie-filter --stats " + input.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["tags"],
            json::parse("[\"O\",\"O\",\"B-Relation\",\"I-Relation\",\"O\","
                        "\"O\"]"));
  EXPECT_EQ(json::parse(r.err)["kept"], 1);
}

}  // namespace
