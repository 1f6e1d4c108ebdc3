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

#include "seqlab/respparse.h"

#include <gtest/gtest.h>

#include "seqlab/prompts.h"
#include "support/generators.h"

namespace seqlab::respparse {
namespace {

using tagging::Tag;

const std::vector<std::string> kNer = {"person", "location", "organization",
                                       "miscellaneous"};

std::vector<std::string> Strings(const std::vector<Tag> &tags) {
  return tagging::TagStrings(tags);
}

TEST(RespParseTest, NerExample) {
  const ParsedResponse parsed =
      ParseResponse("LOS ANGELES:organization;MONTREAL:location", kNer);
  EXPECT_TRUE(parsed.valid);
  EXPECT_FALSE(parsed.is_na);
  ASSERT_EQ(parsed.extractions.size(), 2u);
  EXPECT_EQ(parsed.extractions[0], (Extraction{"LOS ANGELES", "organization"}));
  EXPECT_EQ(parsed.extractions[1], (Extraction{"MONTREAL", "location"}));
  const std::vector<std::string> tokens = {"LOS", "ANGELES", "AT", "MONTREAL"};
  EXPECT_EQ(Strings(MapToTags(parsed, tokens)),
            (std::vector<std::string>{"B-organization", "I-organization", "O",
                                      "B-location"}));
}

TEST(RespParseTest, NotApplicable) {
  const ParsedResponse parsed = ParseResponse("NA", kNer);
  EXPECT_TRUE(parsed.valid);
  EXPECT_TRUE(parsed.is_na);
  EXPECT_TRUE(parsed.extractions.empty());
  EXPECT_EQ(MapToTags(parsed, std::vector<std::string>{"a", "b"}),
            std::vector<Tag>(2));
}

TEST(RespParseTest, OnlyFirstLineCounts) {
  const auto parsed =
      ParseResponse("EU:organization\nand then some chatter", kNer);
  EXPECT_TRUE(parsed.valid);
  ASSERT_EQ(parsed.extractions.size(), 1u);
  EXPECT_TRUE(ParseResponse("NA\nEU:organization", kNer).is_na);
}

TEST(RespParseTest, InvalidResponses) {
  for (const char *raw :
       {"foo:bogus_class", "", "foo", ":person", "foo:", "a:person;",
        "a:person;;b:location", "a:b:person", "NA;a:person", "na", "a:Person",
        "a:person ;b:location"}) {
    const ParsedResponse parsed = ParseResponse(raw, kNer);
    EXPECT_FALSE(parsed.valid) << raw;
    EXPECT_FALSE(parsed.is_na) << raw;
    EXPECT_TRUE(parsed.extractions.empty()) << raw;
    EXPECT_EQ(MapToTags(parsed, std::vector<std::string>{"a", "b"}),
              std::vector<Tag>(2));
  }
}

TEST(RespParseTest, UnmatchedExtractionDropped) {
  const auto parsed = ParseResponse("Paris:location;EU:organization", kNer);
  const std::vector<std::string> tokens = {"EU", "rejects", "it"};
  EXPECT_EQ(Strings(MapToTags(parsed, tokens)),
            (std::vector<std::string>{"B-organization", "O", "O"}));
  EXPECT_EQ(MapToTags(ParseResponse("Paris:location", kNer), tokens),
            std::vector<Tag>(3));
}

TEST(RespParseTest, EarliestUnclaimedOccurrence) {
  const std::vector<std::string> tokens = {"New", "York", "and", "New", "York"};
  EXPECT_EQ(
      Strings(MapToTags(ParseResponse("New York:location", kNer), tokens)),
      (std::vector<std::string>{"B-location", "I-location", "O", "O", "O"}));
  EXPECT_EQ(Strings(MapToTags(
                ParseResponse("New York:location;New York:organization", kNer),
                tokens)),
            (std::vector<std::string>{"B-location", "I-location", "O",
                                      "B-organization", "I-organization"}));
  // A claimed token blocks later overlapping matches.
  EXPECT_EQ(Strings(MapToTags(
                ParseResponse("York:person;New York:location", kNer), tokens)),
            (std::vector<std::string>{"O", "B-person", "O", "B-location",
                                      "I-location"}));
}

TEST(RespParseTest, WhitespaceNormalizedCaseSensitive) {
  const std::vector<std::string> tokens = {"New", "York"};
  EXPECT_EQ(
      Strings(MapToTags(ParseResponse("  New   York :location", kNer), tokens)),
      (std::vector<std::string>{"B-location", "I-location"}));
  EXPECT_EQ(MapToTags(ParseResponse("new york:location", kNer), tokens),
            std::vector<Tag>(2));
  EXPECT_EQ(NormalizeWords(" a\tb  c "),
            (std::vector<std::string>{"a", "b", "c"}));
}

// Property: render, parse and map back reproduce the record when span texts
// are unique in the sentence.
TEST(RespParsePropertyTest, RenderParseMapRoundTrip) {
  Rng rng(4242);
  const auto classes = testing::ClassNames(4);
  for (int iter = 0; iter < 500; ++iter) {
    const std::size_t n = testing::Uniform(rng, 1, 10);
    const auto tokens = testing::DistinctWords(rng, n);
    const auto spans = testing::RandomSpans(rng, n, classes, 4);
    const std::string rendered = prompts::RenderResponse(tokens, spans);
    const ParsedResponse parsed = ParseResponse(rendered, classes);
    ASSERT_TRUE(parsed.valid) << rendered;
    ASSERT_EQ(parsed.is_na, spans.empty());
    ASSERT_EQ(parsed.extractions.size(), spans.size());
    for (std::size_t k = 0; k < spans.size(); ++k) {
      ASSERT_EQ(parsed.extractions[k].class_name, spans[k].label);
    }
    ASSERT_EQ(MapToTags(parsed, tokens), tagging::EncodeTags(spans, n))
        << rendered;
  }
}

// Property: arbitrary responses over repeated words always map to strict
// IOB2 and every rendering parses.
TEST(RespParsePropertyTest, MappedTagsAreWellFormed) {
  Rng rng(17);
  const auto classes = testing::ClassNames(3);
  for (int iter = 0; iter < 1000; ++iter) {
    const std::size_t n = testing::Uniform(rng, 1, 10);
    const auto tokens = testing::RandomWords(rng, n, 4);
    std::string raw;
    const std::size_t k = testing::Uniform(rng, 1, 4);
    for (std::size_t j = 0; j < k; ++j) {
      if (j) raw += ';';
      const std::size_t start = rng.Below(n);
      const std::size_t len = testing::Uniform(rng, 1, n - start);
      for (std::size_t i = 0; i < len; ++i) {
        if (i) raw += ' ';
        raw += tokens[start + i];
      }
      raw += ':';
      raw += classes[rng.Below(classes.size())];
    }
    const ParsedResponse parsed = ParseResponse(raw, classes);
    ASSERT_TRUE(parsed.valid) << raw;
    const auto tags = MapToTags(parsed, tokens);
    ASSERT_EQ(tags.size(), n);
    ASSERT_TRUE(tagging::IsWellFormed(tags)) << raw;
    // The first extraction always matches somewhere.
    ASSERT_NE(tags, std::vector<Tag>(n)) << raw;
  }
}

}  // namespace
}  // namespace seqlab::respparse
