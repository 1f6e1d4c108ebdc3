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

// Fixed inputs with known answers.

#ifndef SEQLAB_TESTS_SUPPORT_FIXTURES_H_
#define SEQLAB_TESTS_SUPPORT_FIXTURES_H_

#include <string>
#include <vector>

#include "seqlab/corpus.h"
#include "seqlab/prompts.h"
#include "seqlab/tagging.h"

namespace seqlab::testing {

inline corpus::CorpusRecord RecordFromStrings(
    std::vector<std::string> tokens, const std::vector<std::string> &tags) {
  std::vector<tagging::Tag> parsed;
  for (const std::string &t : tags) parsed.push_back(tagging::Tag::Parse(t));
  return corpus::CorpusRecord(std::move(tokens), std::move(parsed));
}

// A single sentence: the prediction cuts the LOC span short, labels its
// second token ORG and ends the last entity on a stray I-LOC.
inline const std::vector<std::string> &WorkedTokens() {
  static const std::vector<std::string> tokens = {
      "Paul", "McCartney", "performed", "on",   "the", "rooftop",
      "in",   "United",    "Kingdom",   "with", "The", "Beatles"};
  return tokens;
}

inline tagging::LabeledSequence WorkedReference() {
  return tagging::LabeledSequence::FromStrings(
      WorkedTokens(), {"B-PER", "I-PER", "O", "O", "O", "O", "O", "B-LOC",
                       "I-LOC", "O", "B-ORG", "I-ORG"});
}

inline tagging::LabeledSequence WorkedPrediction() {
  return tagging::LabeledSequence::FromStrings(
      WorkedTokens(), {"B-PER", "I-PER", "O", "O", "O", "O", "O", "B-LOC",
                       "B-ORG", "O", "B-ORG", "I-LOC"});
}

inline constexpr char kNerInstruction[] =
    "extract named entities and their type from the input sentence, all "
    "entity types are in options\n"
    "if there are no named entities in the sentence the output should just "
    "be 'NA'\n"
    "if there are multiple extractions from the sentence, the extraction "
    "format should be "
    "entity_1_span:entity_1_class;entity_2_span:entity_2_class;...";

inline constexpr char kNerOneShot[] =
    "### Instruction:\n"
    "extract named entities and their type from the input sentence, all "
    "entity types are in options\n"
    "if there are no named entities in the sentence the output should just "
    "be 'NA'\n"
    "if there are multiple extractions from the sentence, the extraction "
    "format should be "
    "entity_1_span:entity_1_class;entity_2_span:entity_2_class;...\n"
    "### Options:\n"
    "person, location, organization, miscellaneous\n"
    "### Sentence:\n"
    "LOS ANGELES AT MONTREAL\n"
    "### Response:\n"
    "LOS ANGELES:organization;MONTREAL:location\n"
    "### Sentence:\n"
    "EU rejects German call to boycott British lamb .\n"
    "### Response:\n"
    "EU:organization;German:miscellaneous;British:miscellaneous<eos>";

inline prompts::PromptSpec NerOneShotSpec() {
  prompts::PromptSpec spec;
  spec.instruction = kNerInstruction;
  spec.options = {"person", "location", "organization", "miscellaneous"};
  spec.demonstrations.push_back(prompts::ExampleFromRecord(RecordFromStrings(
      {"LOS", "ANGELES", "AT", "MONTREAL"},
      {"B-organization", "I-organization", "O", "B-location"})));
  spec.query = prompts::ExampleFromRecord(
      RecordFromStrings({"EU", "rejects", "German", "call", "to", "boycott",
                         "British", "lamb", "."},
                        {"B-organization", "O", "B-miscellaneous", "O", "O",
                         "O", "B-miscellaneous", "O", "O"}));
  return spec;
}

}  // namespace seqlab::testing

#endif  // SEQLAB_TESTS_SUPPORT_FIXTURES_H_
