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

// Seeded random generators for property tests. Every generator takes the
// Rng explicitly so failures replay from the printed seed.

#ifndef SEQLAB_TESTS_SUPPORT_GENERATORS_H_
#define SEQLAB_TESTS_SUPPORT_GENERATORS_H_

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "seqlab/corpus.h"
#include "seqlab/random.h"
#include "seqlab/tagging.h"

namespace seqlab::testing {

inline std::size_t Uniform(Rng &rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.Below(hi - lo + 1));
}

inline bool Coin(Rng &rng, std::uint64_t num = 1, std::uint64_t den = 2) {
  return rng.Below(den) < num;
}

inline std::vector<std::string> ClassNames(std::size_t k) {
  static const char *kNames[] = {"PER", "LOC", "ORG", "MISC", "DATE", "EVT"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) {
    names.push_back(i < 6 ? kNames[i] : "C" + std::to_string(i));
  }
  return names;
}

// Sorted, pairwise disjoint spans over [0, length), each at most
// max_span tokens.
inline std::vector<tagging::Span> RandomSpans(
    Rng &rng, std::size_t length, const std::vector<std::string> &classes,
    std::size_t max_span = 3) {
  std::vector<tagging::Span> spans;
  std::size_t i = 0;
  while (i < length) {
    if (Coin(rng, 2, 5)) {
      const std::size_t len = Uniform(rng, 1, std::min(max_span, length - i));
      spans.push_back(
          tagging::Span{classes[rng.Below(classes.size())], i, i + len});
      i += len;
    } else {
      ++i;
    }
  }
  return spans;
}

// Any tag list, possibly ill-formed under IOB2.
inline std::vector<tagging::Tag> RandomTags(
    Rng &rng, std::size_t length, const std::vector<std::string> &classes) {
  std::vector<tagging::Tag> tags;
  for (std::size_t i = 0; i < length; ++i) {
    switch (rng.Below(3)) {
      case 0:
        tags.push_back(tagging::Tag::Outside());
        break;
      case 1:
        tags.push_back(tagging::Tag::Begin(classes[rng.Below(classes.size())]));
        break;
      default:
        tags.push_back(
            tagging::Tag::Inside(classes[rng.Below(classes.size())]));
        break;
    }
  }
  return tags;
}

// Words drawn from a small pool, so repeats happen.
inline std::vector<std::string> RandomWords(Rng &rng, std::size_t length,
                                            std::size_t pool = 8) {
  static const char *kWords[] = {"the",   "EU",    "rejects", "German",
                                 "call",  "to",    "boycott", "British",
                                 "lamb",  "Paris", "New",     "York",
                                 "river", "stock", "went",    "up"};
  std::vector<std::string> words;
  for (std::size_t i = 0; i < length; ++i) {
    words.emplace_back(kWords[rng.Below(std::min<std::size_t>(pool, 16))]);
  }
  return words;
}

// Words that never repeat within one sentence.
inline std::vector<std::string> DistinctWords(Rng &rng, std::size_t length) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < length; ++i) {
    words.push_back("w" + std::to_string(i) + "x" +
                    std::to_string(rng.Below(1000)));
  }
  return words;
}

// Random heads: -1 (root) or any other token.
inline std::vector<int> RandomHeads(Rng &rng, std::size_t length) {
  std::vector<int> heads(length, -1);
  for (std::size_t i = 0; i < length; ++i) {
    if (length == 1 || Coin(rng, 1, 6)) continue;
    std::size_t h = rng.Below(length - 1);
    if (h >= i) ++h;
    heads[i] = static_cast<int>(h);
  }
  return heads;
}

inline corpus::CorpusRecord RandomDependencyRecord(Rng &rng,
                                                   std::size_t max_len = 12) {
  const std::size_t n = Uniform(rng, 1, max_len);
  const auto classes = ClassNames(3);
  corpus::CorpusRecord record(
      RandomWords(rng, n, 16),
      tagging::EncodeTags(RandomSpans(rng, n, classes), n));
  record.set_heads(RandomHeads(rng, n));
  return record;
}

}  // namespace seqlab::testing

#endif  // SEQLAB_TESTS_SUPPORT_GENERATORS_H_
