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

#include "seqlab/prompts.h"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <set>

#include "seqlab/errors.h"
#include "support/fixtures.h"
#include "support/generators.h"
#include "support/oracles.h"

namespace seqlab::prompts {
namespace {

using tagging::Tag;

std::string RegionText(const PromptLayout &layout, const Region &r) {
  return layout.text.substr(r.start, r.end - r.start);
}

TEST(PromptsTest, OneShotNerTrainingPromptIsExact) {
  const PromptLayout layout = BuildPrompt(testing::NerOneShotSpec());
  EXPECT_EQ(layout.text, testing::kNerOneShot);
  EXPECT_TRUE(layout.eos_included);
  ASSERT_EQ(layout.regions.size(), 5u);
  EXPECT_EQ(layout.regions[0].kind, RegionKind::kInstruction);
  EXPECT_EQ(RegionText(layout, layout.regions[1]), "LOS ANGELES AT MONTREAL");
  EXPECT_EQ(RegionText(layout, layout.regions[2]),
            "LOS ANGELES:organization;MONTREAL:location");
  EXPECT_EQ(layout.regions[2].index, 0);
  EXPECT_EQ(RegionText(layout, *layout.query_response()),
            "EU:organization;German:miscellaneous;British:miscellaneous<eos>");
}

TEST(PromptsTest, EvaluationPromptDropsOnlyQueryResponse) {
  PromptSpec spec = testing::NerOneShotSpec();
  const PromptLayout train = BuildPrompt(spec);
  spec.include_query_response = false;
  const PromptLayout eval = BuildPrompt(spec);
  const Region *qr = train.query_response();
  ASSERT_NE(qr, nullptr);
  EXPECT_EQ(qr->end, train.text.size());
  EXPECT_EQ(eval.text, train.text.substr(0, qr->start));
  EXPECT_TRUE(eval.text.ends_with("### Response:\n"));
  EXPECT_EQ(eval.text.find("<eos>"), std::string::npos);
  EXPECT_EQ(eval.query_response(), nullptr);
  EXPECT_FALSE(eval.eos_included);
  std::vector<Region> kept(train.regions.begin(), train.regions.end() - 1);
  EXPECT_EQ(eval.regions, kept);
}

TEST(PromptsTest, ZeroShotIsStandardTemplate) {
  PromptSpec spec;
  spec.query = {"stock went up", std::nullopt, "NA"};
  EXPECT_EQ(BuildPrompt(spec).text,
            "### Sentence:\nstock went up\n### Response:\nNA<eos>");
}

TEST(PromptsTest, NoInstructionStartsAtFirstDemonstration) {
  PromptSpec spec = testing::NerOneShotSpec();
  spec.instruction.reset();
  const PromptLayout layout = BuildPrompt(spec);
  EXPECT_TRUE(layout.text.starts_with("### Sentence:\nLOS ANGELES"));
  for (const Region &r : layout.regions) {
    EXPECT_NE(r.kind, RegionKind::kInstruction);
  }
}

TEST(PromptsTest, VerbField) {
  PromptSpec spec;
  spec.verb_field = true;
  spec.query = {"prices went up", "went", "up:ArgM"};
  EXPECT_EQ(BuildPrompt(spec).text,
            "### Sentence:\nprices went up\n### Verb:\nwent\n"
            "### Response:\nup:ArgM<eos>");
  spec.query.verb.reset();
  EXPECT_THROW(BuildPrompt(spec), SpecError);
}

TEST(PromptsTest, ReservedMarkersRejected) {
  PromptSpec spec;
  spec.query = {"a ### Response: b", std::nullopt, "NA"};
  EXPECT_THROW(BuildPrompt(spec), SpecError);
  spec.query = {"a <eos> b", std::nullopt, "NA"};
  EXPECT_THROW(BuildPrompt(spec), SpecError);
  spec.query = {"ok", std::nullopt, "NA"};
  spec.instruction = "do it";
  EXPECT_THROW(BuildPrompt(spec), SpecError);  // no options
  spec.options = {"a:b"};
  EXPECT_THROW(BuildPrompt(spec), SpecError);
  spec.options = {"a"};
  EXPECT_NO_THROW(BuildPrompt(spec));
}

TEST(PromptsTest, RenderResponse) {
  const auto record = testing::RecordFromStrings(
      {"New", "York", "went", "up"}, {"B-LOC", "I-LOC", "O", "B-X"});
  EXPECT_EQ(RenderResponse(record), "New York:LOC;up:X");
  EXPECT_EQ(RenderResponse(testing::RecordFromStrings({"a"}, {"O"})), "NA");
  EXPECT_THROW(RenderResponse(testing::RecordFromStrings({"a;b"}, {"B-X"})),
               ReservedCharError);
}

TEST(PromptsTest, LayoutJsonRoundTrip) {
  const PromptLayout layout = BuildPrompt(testing::NerOneShotSpec());
  EXPECT_EQ(LayoutFromJson(LayoutToJson(layout)), layout);
  auto json = LayoutToJson(layout);
  json["regions"][0]["end"] = layout.text.size() + 1;
  EXPECT_THROW(LayoutFromJson(json), ParseError);
  json["regions"][0]["end"] = 1;
  json["regions"][0]["kind"] = "bogus";
  EXPECT_THROW(LayoutFromJson(json), ParseError);
}

// Hand-built token regions: six tokens, query response at 5,
// demonstration response at 2.
TokenRegions ToyRegions() {
  TokenRegions tr;
  tr.query_response = {false, false, false, false, false, true};
  tr.demonstration_response = {false, false, true, false, false, false};
  tr.regions.resize(6);
  return tr;
}

TEST(PromptsTest, ToyLossSum) {
  const TokenLogProbs lp{{-1, -1, -1, -1, -1, -2}, {}};
  const TokenRegions tr = ToyRegions();
  EXPECT_EQ(ComputeLoss(tr, lp, Objective::kSrc, Reduction::kSum).value, 2.0);
  EXPECT_EQ(ComputeLoss(tr, lp, Objective::kMrc, Reduction::kSum).value, 3.0);
  // 5 * 1 + 2
  EXPECT_EQ(ComputeLoss(tr, lp, Objective::kVanilla, Reduction::kSum).value,
            7.0);
}

TEST(PromptsTest, ToyLossMean) {
  const TokenLogProbs lp{{-1, -1, -1, -1, -1, -2}, {}};
  const TokenRegions tr = ToyRegions();
  EXPECT_EQ(ComputeLoss(tr, lp, Objective::kSrc, Reduction::kMean).value, 2.0);
  EXPECT_EQ(ComputeLoss(tr, lp, Objective::kMrc, Reduction::kMean).value, 1.5);
  EXPECT_DOUBLE_EQ(
      ComputeLoss(tr, lp, Objective::kVanilla, Reduction::kMean).value,
      7.0 / 6.0);
}

TEST(PromptsTest, PerfectPredictionHasZeroLoss) {
  const TokenLogProbs lp{std::vector<double>(6, 0.0), {}};
  for (Objective o : {Objective::kVanilla, Objective::kSrc, Objective::kMrc}) {
    for (Reduction r : {Reduction::kSum, Reduction::kMean}) {
      EXPECT_EQ(ComputeLoss(ToyRegions(), lp, o, r).value, 0.0);
    }
  }
}

TEST(PromptsTest, EmptySelectionFlagged) {
  TokenRegions tr = ToyRegions();
  tr.query_response.assign(6, false);
  const auto result = ComputeLoss(tr, {std::vector<double>(6, -1.0), {}},
                                  Objective::kSrc, Reduction::kMean);
  EXPECT_TRUE(result.empty_selection);
  EXPECT_EQ(result.value, 0.0);
  EXPECT_EQ(result.selected, 0u);
}

TEST(PromptsTest, LossAlignmentErrors) {
  const TokenRegions tr = ToyRegions();
  EXPECT_THROW(ComputeLoss(tr, {std::vector<double>(5, -1.0), {}},
                           Objective::kSrc, Reduction::kSum),
               AlignmentError);
  EXPECT_THROW(ComputeLoss(tr, {std::vector<double>(7, -1.0), {}},
                           Objective::kSrc, Reduction::kSum),
               AlignmentError);
  EXPECT_THROW(ComputeLoss(tr, {{-1, -1, -1, -1, -1, 0.5}, {}}, Objective::kSrc,
                           Reduction::kSum),
               AlignmentError);
  EXPECT_THROW(ComputeLoss(tr, {std::vector<double>(6, -1.0), {true}},
                           Objective::kSrc, Reduction::kSum),
               AlignmentError);
}

TEST(PromptsTest, ObjectiveParsing) {
  EXPECT_EQ(ParseObjective("MRC"), Objective::kMrc);
  EXPECT_EQ(ObjectiveName(Objective::kSrc), "src");
  EXPECT_THROW(ParseObjective("xyz"), ConfigError);
  EXPECT_THROW(ParseReduction("max"), ConfigError);
}

TEST(PromptsTest, ProjectionKeepsHeadersOutsideResponses) {
  const PromptLayout layout = BuildPrompt(testing::NerOneShotSpec());
  const TokenOffsets offsets = SimpleTokenize(layout.text);
  const TokenRegions tr = ProjectRegions(layout, offsets);
  for (std::size_t t = 0; t < offsets.size(); ++t) {
    const std::string tok = layout.text.substr(
        offsets[t].first, offsets[t].second - offsets[t].first);
    if (tok == "Response" || tok == "#") {
      EXPECT_FALSE(tr.query_response[t] || tr.demonstration_response[t]);
    }
  }
  // The last token is the tail of the eos marker and belongs to the query
  // response.
  EXPECT_TRUE(tr.query_response.back());
}

TEST(PromptsTest, SampleDemonstrations) {
  const auto a = SampleDemonstrations(50, 7, 5, 1337);
  EXPECT_EQ(a, SampleDemonstrations(50, 7, 5, 1337));
  EXPECT_EQ(a.size(), 5u);
  EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), 5u);
  for (std::size_t i : a) {
    EXPECT_NE(i, 7u);
    EXPECT_LT(i, 50u);
  }
  EXPECT_EQ(SampleDemonstrations(3, 1, 10, 1).size(), 2u);
  EXPECT_TRUE(SampleDemonstrations(1, 0, 3, 1).empty());
  // Query dependence: some query among the first ten gets a different set.
  bool differs = false;
  for (std::size_t q = 8; q < 18 && !differs; ++q) {
    auto b = SampleDemonstrations(50, q, 5, 1337);
    differs = b != a;
  }
  EXPECT_TRUE(differs);
}

TEST(PromptsPropertyTest, SumLossesNest) {
  Rng rng(2024);
  for (int iter = 0; iter < 300; ++iter) {
    const PromptLayout layout = BuildPrompt(testing::RandomPromptSpec(rng, 4));
    const TokenRegions tr = ProjectRegions(layout, SimpleTokenize(layout.text));
    const TokenLogProbs lp{testing::RandomLogProbs(rng, tr.size()), {}};
    const double src =
        ComputeLoss(tr, lp, Objective::kSrc, Reduction::kSum).value;
    const double mrc =
        ComputeLoss(tr, lp, Objective::kMrc, Reduction::kSum).value;
    const double van =
        ComputeLoss(tr, lp, Objective::kVanilla, Reduction::kSum).value;
    ASSERT_LE(0.0, src);
    ASSERT_LE(src, mrc) << "iteration " << iter;
    ASSERT_LE(mrc, van) << "iteration " << iter;
  }
}

TEST(PromptsPropertyTest, NoDemonstrationsMakesMrcEqualSrc) {
  Rng rng(99);
  for (int iter = 0; iter < 200; ++iter) {
    const PromptLayout layout = BuildPrompt(testing::RandomPromptSpec(rng, 0));
    const TokenRegions tr = ProjectRegions(layout, SimpleTokenize(layout.text));
    const TokenLogProbs lp{testing::RandomLogProbs(rng, tr.size()), {}};
    for (Reduction r : {Reduction::kSum, Reduction::kMean}) {
      const double src = ComputeLoss(tr, lp, Objective::kSrc, r).value;
      const double mrc = ComputeLoss(tr, lp, Objective::kMrc, r).value;
      ASSERT_EQ(std::bit_cast<std::uint64_t>(src),
                std::bit_cast<std::uint64_t>(mrc));
    }
  }
}

TEST(PromptsPropertyTest, LeftPaddingChangesNothing) {
  Rng rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    const PromptLayout layout = BuildPrompt(testing::RandomPromptSpec(rng, 3));
    const TokenRegions tr = ProjectRegions(layout, SimpleTokenize(layout.text));
    const TokenLogProbs plain{testing::RandomLogProbs(rng, tr.size()), {}};
    const std::size_t pad = testing::Uniform(rng, 1, 5);
    TokenLogProbs padded;
    padded.pad_mask.assign(pad, true);
    padded.pad_mask.resize(pad + tr.size(), false);
    padded.logprobs = testing::RandomLogProbs(rng, pad);
    padded.logprobs.insert(padded.logprobs.end(), plain.logprobs.begin(),
                           plain.logprobs.end());
    for (Objective o :
         {Objective::kVanilla, Objective::kSrc, Objective::kMrc}) {
      for (Reduction r : {Reduction::kSum, Reduction::kMean}) {
        const LossResult a = ComputeLoss(tr, plain, o, r);
        const LossResult b = ComputeLoss(tr, padded, o, r);
        ASSERT_EQ(a.value, b.value);
        ASSERT_EQ(a.selected, b.selected);
      }
    }
  }
}

bool IsScaffolding(std::string_view gap) {
  std::size_t pos = 0;
  while (pos <= gap.size()) {
    std::size_t nl = gap.find('\n', pos);
    if (nl == std::string_view::npos) nl = gap.size();
    const std::string_view line = gap.substr(pos, nl - pos);
    if (!line.empty() && line != kSentenceHeader && line != kResponseHeader &&
        line != kVerbHeader) {
      return false;
    }
    pos = nl + 1;
  }
  return true;
}

TEST(PromptsPropertyTest, RegionsPlusScaffoldingRebuildText) {
  Rng rng(31);
  for (int iter = 0; iter < 300; ++iter) {
    const PromptLayout layout = BuildPrompt(testing::RandomPromptSpec(rng, 4));
    std::string rebuilt;
    std::size_t cursor = 0;
    for (const Region &r : layout.regions) {
      ASSERT_LE(cursor, r.start);
      ASSERT_LE(r.start, r.end);
      const std::string gap = layout.text.substr(cursor, r.start - cursor);
      ASSERT_TRUE(IsScaffolding(gap)) << "gap '" << gap << "'";
      rebuilt += gap;
      rebuilt += RegionText(layout, r);
      cursor = r.end;
    }
    const std::string tail = layout.text.substr(cursor);
    ASSERT_TRUE(IsScaffolding(tail));
    rebuilt += tail;
    ASSERT_EQ(rebuilt, layout.text);
  }
}

}  // namespace
}  // namespace seqlab::prompts
