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

// Attention masks for decoder layer groups and a single-head reference
// forward pass
//
//   out = softmax((Q K^T + M) / sqrt(d_k)) V
//
// where M is either the causal mask (kMaskedScore strictly above the
// diagonal) or all zeros. A model with m * b layers is split into m groups
// of b consecutive layers; an UnmaskConfig says for each group whether its
// causal mask is replaced by zeros. Code strings list the groups from the
// input side, so "0001" unmasks the b layers closest to the output.

#ifndef SEQLAB_ATTNMASK_H_
#define SEQLAB_ATTNMASK_H_

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seqlab::attn {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Stands in for minus infinity. Small enough that exp() of any masked,
// scaled and max-shifted score is exactly 0.0, large enough to stay finite
// after adding ordinary scores.
inline constexpr double kMaskedScore = -1e300;

inline constexpr std::size_t kDefaultGroups = 4;
inline constexpr std::size_t kDefaultBlocksPerGroup = 8;

enum class MaskKind { kCausal, kUnmasked };

std::string_view MaskKindName(MaskKind kind);

Matrix CausalMask(std::size_t n);
Matrix Unmasked(std::size_t n);
Matrix MakeMask(MaskKind kind, std::size_t n);

class UnmaskConfig {
 public:
  UnmaskConfig(std::vector<bool> flags,
               std::size_t blocks_per_group = kDefaultBlocksPerGroup);

  // Parses a digit string such as "0110". Throws ConfigError on anything
  // other than '0'/'1' or an empty code.
  static UnmaskConfig Parse(
      std::string_view code,
      std::size_t blocks_per_group = kDefaultBlocksPerGroup);

  std::string Code() const;
  const std::vector<bool> &flags() const { return flags_; }
  std::size_t groups() const { return flags_.size(); }
  std::size_t blocks_per_group() const { return blocks_per_group_; }
  std::size_t num_layers() const { return flags_.size() * blocks_per_group_; }

  // Throws IndexError when layer >= num_layers().
  MaskKind LayerKind(std::size_t layer) const;

  friend bool operator==(const UnmaskConfig &, const UnmaskConfig &) = default;

 private:
  std::vector<bool> flags_;
  std::size_t blocks_per_group_;
};

Matrix LayerMask(const UnmaskConfig &config, std::size_t layer, std::size_t n);

enum class ConfigOrder { kBinary, kGray };

ConfigOrder ParseConfigOrder(std::string_view name);

// All 2^m configs. Binary order is numeric with the first digit most
// significant; gray order is the reflected Gray code from all zeros.
// Throws ConfigError for m == 0 or m > 20.
std::vector<UnmaskConfig> EnumerateConfigs(
    std::size_t groups, ConfigOrder order,
    std::size_t blocks_per_group = kDefaultBlocksPerGroup);

// Row-wise softmax((Q K^T + mask) / sqrt(d_k)). Throws ShapeError when the
// inner dimensions disagree or the mask is not rows(Q) x rows(K).
Matrix AttentionWeights(const Matrix &q, const Matrix &k, const Matrix &mask);
Matrix Attention(const Matrix &q, const Matrix &k, const Matrix &v,
                 const Matrix &mask);

// Applies num_layers() self-attention layers (Q = K = V = previous output,
// no projections) with each layer's mask taken from the config.
Matrix ForwardStack(const Matrix &x, const UnmaskConfig &config);

nlohmann::ordered_json MatrixToJson(const Matrix &m);
// Throws ShapeError on ragged or empty rows, ParseError on non-numbers.
Matrix MatrixFromJson(const nlohmann::ordered_json &json);

// Binary layout: uint64 rows, uint64 cols (little-endian), then rows*cols
// row-major IEEE doubles. Throws IoError on truncated input.
void WriteMatrix(std::ostream &out, const Matrix &m);
Matrix ReadMatrix(std::istream &in);

}  // namespace seqlab::attn

#endif  // SEQLAB_ATTNMASK_H_
