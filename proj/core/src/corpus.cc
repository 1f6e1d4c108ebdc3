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

#include "seqlab/corpus.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <numeric>
#include <sstream>
#include <utility>

#include "seqlab/errors.h"
#include "seqlab/random.h"

namespace seqlab::corpus {

using nlohmann::ordered_json;
using tagging::Span;
using tagging::Tag;

namespace {

constexpr std::array<std::string_view, 5> kKnownKeys = {
    "tokens", "tags", "heads", "deprels", "verb_index"};

bool IsKnownKey(std::string_view key) {
  return std::find(kKnownKeys.begin(), kKnownKeys.end(), key) !=
         kKnownKeys.end();
}

void CheckHeads(const std::vector<int> &heads, std::size_t n) {
  if (heads.size() != n) {
    throw LengthMismatch("heads has " + std::to_string(heads.size()) +
                         " entries for " + std::to_string(n) + " tokens");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int h = heads[i];
    if (h < -1 || h >= static_cast<int>(n)) {
      throw OutOfBounds("head " + std::to_string(h) + " of token " +
                        std::to_string(i) + " is out of range");
    }
    if (h == static_cast<int>(i)) {
      throw OutOfBounds("token " + std::to_string(i) + " is its own head");
    }
  }
}

}  // namespace

CorpusRecord::CorpusRecord(std::vector<std::string> tokens,
                           std::vector<Tag> tags)
    : tokens_(std::move(tokens)) {
  set_tags(std::move(tags));
}

void CorpusRecord::set_tags(std::vector<Tag> tags) {
  if (tags.size() != tokens_.size()) {
    throw LengthMismatch("record has " + std::to_string(tokens_.size()) +
                         " tokens but " + std::to_string(tags.size()) +
                         " tags");
  }
  tags_ = std::move(tags);
}

void CorpusRecord::set_heads(std::vector<int> heads) {
  CheckHeads(heads, tokens_.size());
  heads_ = std::move(heads);
}

void CorpusRecord::set_deprels(std::vector<std::string> deprels) {
  if (deprels.size() != tokens_.size()) {
    throw LengthMismatch("deprels has " + std::to_string(deprels.size()) +
                         " entries for " + std::to_string(tokens_.size()) +
                         " tokens");
  }
  deprels_ = std::move(deprels);
}

void CorpusRecord::set_verb_index(std::size_t index) {
  if (index >= tokens_.size()) {
    throw OutOfBounds("verb_index " + std::to_string(index) +
                      " is out of range");
  }
  verb_index_ = index;
}

tagging::LabeledSequence CorpusRecord::ToSequence() const {
  return tagging::LabeledSequence(tokens_, tags_);
}

bool operator==(const CorpusRecord &a, const CorpusRecord &b) {
  return a.tokens_ == b.tokens_ && a.tags_ == b.tags_ && a.heads_ == b.heads_ &&
         a.deprels_ == b.deprels_ && a.verb_index_ == b.verb_index_ &&
         a.extra_ == b.extra_;
}

CorpusRecord CorpusRecord::FromJson(const ordered_json &json) {
  if (!json.is_object()) throw ParseError(0, "record is not a JSON object");
  CorpusRecord record;
  try {
    record.tokens_ = json.at("tokens").get<std::vector<std::string>>();
    record.set_tags(
        tagging::ParseTags(json.at("tags").get<std::vector<std::string>>()));
    if (auto it = json.find("heads"); it != json.end() && !it->is_null()) {
      record.set_heads(it->get<std::vector<int>>());
    }
    if (auto it = json.find("deprels"); it != json.end() && !it->is_null()) {
      record.set_deprels(it->get<std::vector<std::string>>());
    }
    if (auto it = json.find("verb_index"); it != json.end() && !it->is_null()) {
      const auto v = it->get<long long>();
      if (v < 0) throw OutOfBounds("verb_index is negative");
      record.set_verb_index(static_cast<std::size_t>(v));
    }
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(0, std::string("bad record field: ") + e.what());
  }
  for (const auto &[key, value] : json.items()) {
    record.key_order_.push_back(key);
    if (!IsKnownKey(key)) record.extra_[key] = value;
  }
  return record;
}

ordered_json CorpusRecord::ToJson() const {
  ordered_json out = ordered_json::object();
  auto emit_known = [&](std::string_view key) {
    if (key == "tokens") {
      out["tokens"] = tokens_;
    } else if (key == "tags") {
      out["tags"] = tagging::TagStrings(tags_);
    } else if (key == "heads") {
      if (heads_) out["heads"] = *heads_;
    } else if (key == "deprels") {
      if (deprels_) out["deprels"] = *deprels_;
    } else if (key == "verb_index") {
      if (verb_index_) out["verb_index"] = *verb_index_;
    }
  };
  for (const std::string &key : key_order_) {
    if (IsKnownKey(key)) {
      emit_known(key);
    } else if (auto it = extra_.find(key); it != extra_.end()) {
      out[key] = *it;
    }
  }
  for (std::string_view key : kKnownKeys) {
    if (!out.contains(std::string(key))) emit_known(key);
  }
  for (const auto &[key, value] : extra_.items()) {
    if (!out.contains(key)) out[key] = value;
  }
  return out;
}

CorpusRecord ParseJsonLine(const std::string &line, std::size_t line_no) {
  ordered_json json;
  try {
    json = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
  }
  try {
    return CorpusRecord::FromJson(json);
  } catch (const ParseError &e) {
    throw ParseError(line_no, e.reason());
  } catch (const LengthMismatch &e) {
    throw LengthMismatch("line " + std::to_string(line_no) + ": " + e.what());
  } catch (const Error &e) {
    throw ParseError(line_no, e.what());
  }
}

std::string ToJsonLine(const CorpusRecord &record) {
  return record.ToJson().dump();
}

JsonlReader::JsonlReader(const std::filesystem::path &path) : in_(path) {
  if (!in_) throw IoError("cannot open " + path.string());
}

bool JsonlReader::NextObject(ordered_json *object) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      *object = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw ParseError(line_no_, std::string("invalid JSON: ") + e.what());
    }
    return true;
  }
  return false;
}

bool JsonlReader::Next(CorpusRecord *record) {
  ordered_json json;
  if (!NextObject(&json)) return false;
  try {
    *record = CorpusRecord::FromJson(json);
  } catch (const ParseError &e) {
    throw ParseError(line_no_, e.reason());
  } catch (const LengthMismatch &e) {
    throw LengthMismatch("line " + std::to_string(line_no_) + ": " + e.what());
  } catch (const Error &e) {
    throw ParseError(line_no_, e.what());
  }
  return true;
}

std::vector<CorpusRecord> ReadJsonl(const std::filesystem::path &path) {
  JsonlReader reader(path);
  std::vector<CorpusRecord> records;
  CorpusRecord record;
  while (reader.Next(&record)) records.push_back(std::move(record));
  return records;
}

void WriteJsonl(std::span<const CorpusRecord> records,
                const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const CorpusRecord &record : records) out << ToJsonLine(record) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

std::vector<std::string> SplitColumns(const std::string &line) {
  std::istringstream in(line);
  std::vector<std::string> cols;
  std::string col;
  while (in >> col) cols.push_back(std::move(col));
  return cols;
}

int ParseInt(const std::string &text, std::size_t line_no) {
  int value = 0;
  const auto *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line_no, "expected an integer head, got '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<CorpusRecord> ParseConll(std::istream &in,
                                     const ColumnMap &columns) {
  std::size_t needed = std::max(columns.token, columns.tag);
  if (columns.head) needed = std::max(needed, *columns.head);
  if (columns.deprel) needed = std::max(needed, *columns.deprel);
  ++needed;

  std::vector<CorpusRecord> records;
  std::vector<std::string> tokens;
  std::vector<Tag> tags;
  std::vector<int> heads;
  std::vector<std::string> deprels;
  std::size_t sentence_line = 0;

  auto flush = [&]() {
    if (tokens.empty()) return;
    try {
      CorpusRecord record(std::move(tokens), std::move(tags));
      if (columns.head) record.set_heads(std::move(heads));
      if (columns.deprel) record.set_deprels(std::move(deprels));
      records.push_back(std::move(record));
    } catch (const Error &e) {
      throw ParseError(sentence_line, e.what());
    }
    tokens.clear();
    tags.clear();
    heads.clear();
    deprels.clear();
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cols = SplitColumns(line);
    if (cols.empty()) {
      flush();
      continue;
    }
    if (cols.front().starts_with("-DOCSTART-")) continue;
    if (cols.size() < needed) {
      throw ParseError(line_no, "expected at least " + std::to_string(needed) +
                                    " columns, got " +
                                    std::to_string(cols.size()));
    }
    if (tokens.empty()) sentence_line = line_no;
    tokens.push_back(cols[columns.token]);
    try {
      tags.push_back(Tag::Parse(cols[columns.tag]));
    } catch (const Error &e) {
      throw ParseError(line_no, e.what());
    }
    if (columns.head) {
      int head = ParseInt(cols[*columns.head], line_no);
      if (columns.one_based_heads) head -= 1;
      heads.push_back(head);
    }
    if (columns.deprel) deprels.push_back(cols[*columns.deprel]);
  }
  flush();
  return records;
}

std::vector<CorpusRecord> ReadConll(const std::filesystem::path &path,
                                    const ColumnMap &columns) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return ParseConll(in, columns);
}

AlignedSubwords AlignSubwords(const CorpusRecord &record,
                              std::span<const std::size_t> subword_counts,
                              AlignMode mode,
                              std::span<const std::string> subword_tokens) {
  if (subword_counts.size() != record.size()) {
    throw AlignmentError(
        "got subword counts for " + std::to_string(subword_counts.size()) +
        " words but the record has " + std::to_string(record.size()));
  }
  const std::size_t total = std::accumulate(
      subword_counts.begin(), subword_counts.end(), std::size_t{0});
  if (!subword_tokens.empty() && subword_tokens.size() != total) {
    throw AlignmentError("subword counts sum to " + std::to_string(total) +
                         " but " + std::to_string(subword_tokens.size()) +
                         " subword tokens were given");
  }

  AlignedSubwords out;
  out.alignment.subword_tokens.assign(subword_tokens.begin(),
                                      subword_tokens.end());
  out.alignment.word_of_subword.reserve(total);
  out.alignment.head_flag.reserve(total);
  out.subword_tags.reserve(total);
  out.loss_mask.reserve(total);

  for (std::size_t w = 0; w < record.size(); ++w) {
    const std::size_t count = subword_counts[w];
    if (count == 0) {
      throw AlignmentError("word " + std::to_string(w) + " ('" +
                           record.tokens()[w] + "') has zero subwords");
    }
    const Tag &tag = record.tags()[w];
    for (std::size_t k = 0; k < count; ++k) {
      const bool head = k == 0;
      out.alignment.word_of_subword.push_back(w);
      out.alignment.head_flag.push_back(head);
      if (head) {
        out.subword_tags.emplace_back(tag);
        out.loss_mask.push_back(true);
      } else if (mode == AlignMode::kHeadOnly) {
        out.subword_tags.emplace_back(std::nullopt);
        out.loss_mask.push_back(false);
      } else {
        out.subword_tags.emplace_back(tag.kind() == tagging::TagKind::kBegin
                                          ? Tag::Inside(tag.label())
                                          : tag);
        out.loss_mask.push_back(true);
      }
    }
  }
  return out;
}

double ArcCounts::Ratio() const {
  if (total() == 0) {
    throw NoArcsError("no labeled-span token has a non-root head");
  }
  return static_cast<double>(right) / static_cast<double>(total());
}

ArcCounts CountSpanArcs(std::span<const CorpusRecord> records) {
  ArcCounts counts;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const CorpusRecord &record = records[r];
    const auto spans =
        tagging::DecodeSpans(std::span<const Tag>(record.tags()));
    if (spans.empty()) continue;
    if (!record.heads()) {
      throw ParseError(0, "record " + std::to_string(r) +
                              " has labeled spans but no dependency heads");
    }
    const auto &heads = *record.heads();
    for (const Span &span : spans) {
      for (std::size_t i = span.start; i < span.end; ++i) {
        const int h = heads[i];
        if (h < 0) continue;
        if (static_cast<std::size_t>(h) > i) {
          ++counts.right;
        } else {
          ++counts.left;
        }
      }
    }
  }
  return counts;
}

double Rdrr(std::span<const CorpusRecord> records) {
  return CountSpanArcs(records).Ratio();
}

CorpusRecord MirrorRecord(const CorpusRecord &record) {
  const std::size_t n = record.size();
  std::vector<std::string> tokens(record.tokens().rbegin(),
                                  record.tokens().rend());
  std::vector<Span> spans =
      tagging::DecodeSpans(std::span<const Tag>(record.tags()));
  for (Span &s : spans) s = Span{s.label, n - s.end, n - s.start};

  CorpusRecord mirrored(std::move(tokens), tagging::EncodeTags(spans, n));
  if (record.heads()) {
    std::vector<int> heads(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int h = (*record.heads())[i];
      heads[n - 1 - i] = h < 0 ? -1 : static_cast<int>(n - 1) - h;
    }
    mirrored.set_heads(std::move(heads));
  }
  if (record.deprels()) {
    mirrored.set_deprels(std::vector<std::string>(record.deprels()->rbegin(),
                                                  record.deprels()->rend()));
  }
  if (record.verb_index())
    mirrored.set_verb_index(n - 1 - *record.verb_index());
  mirrored.mutable_extra() = record.extra();
  return mirrored;
}

MixedBatchPlan::MixedBatchPlan(std::size_t batch_size,
                               std::size_t source_per_batch,
                               std::size_t target_per_batch, std::uint64_t seed)
    : batch_size_(batch_size),
      source_(source_per_batch),
      target_(target_per_batch),
      seed_(seed) {
  if (batch_size != source_per_batch + target_per_batch) {
    throw ConfigError("batch size " + std::to_string(batch_size) +
                      " must equal source (" +
                      std::to_string(source_per_batch) + ") + target (" +
                      std::to_string(target_per_batch) + ")");
  }
  if (batch_size == 0) throw ConfigError("batch size must be positive");
}

std::vector<MixedBatch> PlanMixedBatches(std::span<const ExampleId> source_ids,
                                         std::span<const ExampleId> target_ids,
                                         const MixedBatchPlan &plan,
                                         std::size_t epochs) {
  const std::size_t n = plan.source_per_batch();
  const std::size_t m = plan.target_per_batch();
  if (n > 0 && source_ids.empty()) {
    throw ConfigError("source pool is empty but n = " + std::to_string(n));
  }
  if (m > 0 && target_ids.empty()) {
    throw ConfigError("few-shot target pool is empty but m = " +
                      std::to_string(m));
  }

  Rng rng(plan.seed());
  std::vector<ExampleId> pool(target_ids.begin(), target_ids.end());
  auto draw_targets = [&]() {
    std::vector<ExampleId> drawn;
    drawn.reserve(m);
    if (pool.size() >= m) {
      // Partial Fisher-Yates over a scratch copy keeps draws distinct.
      for (std::size_t j = 0; j < m; ++j) {
        std::swap(pool[j], pool[j + rng.Below(pool.size() - j)]);
        drawn.push_back(pool[j]);
      }
    } else {
      for (std::size_t j = 0; j < m; ++j) {
        drawn.push_back(pool[rng.Below(pool.size())]);
      }
    }
    return drawn;
  };

  std::vector<MixedBatch> batches;
  std::vector<ExampleId> order(source_ids.begin(), source_ids.end());
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    if (n == 0) {
      batches.push_back(MixedBatch{epoch, {}, draw_targets()});
      continue;
    }
    rng.Shuffle(std::span<ExampleId>(order));
    for (std::size_t begin = 0; begin < order.size(); begin += n) {
      const std::size_t end = std::min(order.size(), begin + n);
      MixedBatch batch;
      batch.epoch = epoch;
      batch.source.assign(order.begin() + static_cast<std::ptrdiff_t>(begin),
                          order.begin() + static_cast<std::ptrdiff_t>(end));
      batch.target = draw_targets();
      batches.push_back(std::move(batch));
    }
  }
  return batches;
}

}  // namespace seqlab::corpus
