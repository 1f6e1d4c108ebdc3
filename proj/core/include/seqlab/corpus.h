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

// Corpus records: JSONL and CoNLL ingestion, subword label alignment, the
// right-side dependency relations ratio (RDRR) and mixed source/target
// batch planning.

#ifndef SEQLAB_CORPUS_H_
#define SEQLAB_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqlab/tagging.h"

namespace seqlab::corpus {

// One corpus line. `heads` are 0-based token indices with -1 for the root.
class CorpusRecord {
 public:
  CorpusRecord() = default;
  CorpusRecord(std::vector<std::string> tokens, std::vector<tagging::Tag> tags);

  const std::vector<std::string> &tokens() const { return tokens_; }
  const std::vector<tagging::Tag> &tags() const { return tags_; }
  const std::optional<std::vector<int>> &heads() const { return heads_; }
  const std::optional<std::vector<std::string>> &deprels() const {
    return deprels_;
  }
  const std::optional<std::size_t> &verb_index() const { return verb_index_; }
  std::size_t size() const { return tokens_.size(); }

  void set_tags(std::vector<tagging::Tag> tags);
  void set_heads(std::vector<int> heads);
  void set_deprels(std::vector<std::string> deprels);
  void set_verb_index(std::size_t index);

  tagging::LabeledSequence ToSequence() const;

  // Fields this library does not interpret, in their original order.
  const nlohmann::ordered_json &extra() const { return extra_; }
  nlohmann::ordered_json &mutable_extra() { return extra_; }

  // Throws ParseError (line 0) describing the first violated invariant.
  static CorpusRecord FromJson(const nlohmann::ordered_json &json);
  nlohmann::ordered_json ToJson() const;

  // Compares content; the original key order is not part of identity.
  friend bool operator==(const CorpusRecord &a, const CorpusRecord &b);

 private:
  std::vector<std::string> tokens_;
  std::vector<tagging::Tag> tags_;
  std::optional<std::vector<int>> heads_;
  std::optional<std::vector<std::string>> deprels_;
  std::optional<std::size_t> verb_index_;
  nlohmann::ordered_json extra_ = nlohmann::ordered_json::object();
  // Key order of the source object, so writing reproduces it.
  std::vector<std::string> key_order_;
};

// Parses one JSONL line; `line_no` is used for diagnostics only.
CorpusRecord ParseJsonLine(const std::string &line, std::size_t line_no);
std::string ToJsonLine(const CorpusRecord &record);

// Reads one JSON object per non-blank line, without loading the whole file.
class JsonlReader {
 public:
  explicit JsonlReader(const std::filesystem::path &path);

  // Next non-blank line parsed as JSON; false at end of input.
  bool NextObject(nlohmann::ordered_json *object);
  bool Next(CorpusRecord *record);
  std::size_t line_no() const { return line_no_; }

 private:
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

std::vector<CorpusRecord> ReadJsonl(const std::filesystem::path &path);
void WriteJsonl(std::span<const CorpusRecord> records,
                const std::filesystem::path &path);

// Zero-based column positions for the CoNLL reader.
struct ColumnMap {
  std::size_t token = 0;
  std::size_t tag = 1;
  std::optional<std::size_t> head;
  std::optional<std::size_t> deprel;
  // CoNLL-X/U head columns are 1-based with 0 for the root.
  bool one_based_heads = true;
};

// Whitespace-separated columns, blank lines between sentences, -DOCSTART-
// lines skipped.
std::vector<CorpusRecord> ReadConll(const std::filesystem::path &path,
                                    const ColumnMap &columns = {});
std::vector<CorpusRecord> ParseConll(std::istream &in,
                                     const ColumnMap &columns = {});

enum class AlignMode {
  // Every subword is labeled; a B-X word continues as I-X.
  kDuplicate,
  // Only the head (first) subword is labeled and carries loss.
  kHeadOnly,
};

struct SubwordAlignment {
  std::vector<std::string> subword_tokens;
  std::vector<std::size_t> word_of_subword;
  std::vector<bool> head_flag;
};

struct AlignedSubwords {
  SubwordAlignment alignment;
  // nullopt marks a non-head subword in head-only mode.
  std::vector<std::optional<tagging::Tag>> subword_tags;
  std::vector<bool> loss_mask;
};

// `subword_counts[w]` is the number of subwords word w was split into.
// `subword_tokens` may be empty; otherwise its length must equal the sum of
// the counts. Throws AlignmentError on zero counts or size mismatches.
AlignedSubwords AlignSubwords(const CorpusRecord &record,
                              std::span<const std::size_t> subword_counts,
                              AlignMode mode,
                              std::span<const std::string> subword_tokens = {});

struct ArcCounts {
  std::size_t left = 0;
  std::size_t right = 0;

  std::size_t total() const { return left + right; }
  // right / (left + right); throws NoArcsError when there are no arcs.
  double Ratio() const;
  friend bool operator==(const ArcCounts &, const ArcCounts &) = default;
};

// Counts token->head arcs of every token inside a labeled span. Root arcs
// carry no direction and are skipped. Throws ParseError if a record has no
// heads.
ArcCounts CountSpanArcs(std::span<const CorpusRecord> records);

// Right-side dependency relations ratio of a training split.
double Rdrr(std::span<const CorpusRecord> records);

// Reverses tokens, tags (span-wise) and heads.
CorpusRecord MirrorRecord(const CorpusRecord &record);

using ExampleId = std::uint64_t;

// Mixed mini-batch layout: n source plus m target examples per batch.
class MixedBatchPlan {
 public:
  static constexpr std::size_t kDefaultBatchSize = 32;
  static constexpr std::size_t kDefaultSourcePerBatch = 27;
  static constexpr std::size_t kDefaultTargetPerBatch = 5;

  MixedBatchPlan() = default;
  // Throws ConfigError unless batch_size == source + target.
  MixedBatchPlan(std::size_t batch_size, std::size_t source_per_batch,
                 std::size_t target_per_batch, std::uint64_t seed);

  std::size_t batch_size() const { return batch_size_; }
  std::size_t source_per_batch() const { return source_; }
  std::size_t target_per_batch() const { return target_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::size_t batch_size_ = kDefaultBatchSize;
  std::size_t source_ = kDefaultSourcePerBatch;
  std::size_t target_ = kDefaultTargetPerBatch;
  std::uint64_t seed_ = 1337;
};

struct MixedBatch {
  std::size_t epoch = 0;
  std::vector<ExampleId> source;
  std::vector<ExampleId> target;

  friend bool operator==(const MixedBatch &, const MixedBatch &) = default;
};

// Each epoch shuffles the source pool and cuts it into runs of n; the last
// batch of an epoch holds the remainder when |source| is not a multiple of
// n. Every batch then draws m target ids from the few-shot pool: distinct
// ids when the pool has at least m, with replacement otherwise. With n == 0
// the plan has one batch per epoch. Throws ConfigError when n > 0 with an
// empty source pool or m > 0 with an empty target pool.
std::vector<MixedBatch> PlanMixedBatches(std::span<const ExampleId> source_ids,
                                         std::span<const ExampleId> target_ids,
                                         const MixedBatchPlan &plan,
                                         std::size_t epochs);

}  // namespace seqlab::corpus

#endif  // SEQLAB_CORPUS_H_
