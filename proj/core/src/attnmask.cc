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

#include "seqlab/attnmask.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "seqlab/errors.h"

namespace seqlab::attn {

std::string_view MaskKindName(MaskKind kind) {
  return kind == MaskKind::kCausal ? "causal" : "unmasked";
}

Matrix CausalMask(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  Matrix mask = Matrix::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = i + 1; j < size; ++j) mask(i, j) = kMaskedScore;
  }
  return mask;
}

Matrix Unmasked(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  return Matrix::Zero(size, size);
}

Matrix MakeMask(MaskKind kind, std::size_t n) {
  return kind == MaskKind::kCausal ? CausalMask(n) : Unmasked(n);
}

UnmaskConfig::UnmaskConfig(std::vector<bool> flags,
                           std::size_t blocks_per_group)
    : flags_(std::move(flags)), blocks_per_group_(blocks_per_group) {
  if (flags_.empty()) throw ConfigError("unmasking config has no groups");
  if (blocks_per_group_ == 0) {
    throw ConfigError("blocks per group must be positive");
  }
}

UnmaskConfig UnmaskConfig::Parse(std::string_view code,
                                 std::size_t blocks_per_group) {
  std::vector<bool> flags;
  for (char c : code) {
    if (c != '0' && c != '1') {
      throw ConfigError("bad unmasking code: " + std::string(code));
    }
    flags.push_back(c == '1');
  }
  return UnmaskConfig(std::move(flags), blocks_per_group);
}

std::string UnmaskConfig::Code() const {
  std::string code;
  for (bool f : flags_) code.push_back(f ? '1' : '0');
  return code;
}

MaskKind UnmaskConfig::LayerKind(std::size_t layer) const {
  if (layer >= num_layers()) {
    throw IndexError("layer " + std::to_string(layer) + " out of range for " +
                     std::to_string(num_layers()) + " layers");
  }
  return flags_[layer / blocks_per_group_] ? MaskKind::kUnmasked
                                           : MaskKind::kCausal;
}

Matrix LayerMask(const UnmaskConfig &config, std::size_t layer, std::size_t n) {
  return MakeMask(config.LayerKind(layer), n);
}

ConfigOrder ParseConfigOrder(std::string_view name) {
  if (name == "binary") return ConfigOrder::kBinary;
  if (name == "gray") return ConfigOrder::kGray;
  throw ConfigError("unknown config order: " + std::string(name));
}

std::vector<UnmaskConfig> EnumerateConfigs(std::size_t groups,
                                           ConfigOrder order,
                                           std::size_t blocks_per_group) {
  if (groups == 0 || groups > 20) {
    throw ConfigError("number of groups must be in [1, 20]");
  }
  const std::uint64_t count = std::uint64_t{1} << groups;
  std::vector<UnmaskConfig> configs;
  configs.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t value = order == ConfigOrder::kGray ? i ^ (i >> 1) : i;
    std::vector<bool> flags(groups);
    for (std::size_t g = 0; g < groups; ++g) {
      flags[g] = (value >> (groups - 1 - g)) & 1;
    }
    configs.emplace_back(std::move(flags), blocks_per_group);
  }
  return configs;
}

Matrix AttentionWeights(const Matrix &q, const Matrix &k, const Matrix &mask) {
  if (q.cols() != k.cols() || q.cols() == 0) {
    throw ShapeError("query and key widths differ or are zero");
  }
  if (mask.rows() != q.rows() || mask.cols() != k.rows()) {
    throw ShapeError("mask must be rows(Q) x rows(K)");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.cols()));
  Matrix scores = ((q * k.transpose()) + mask) * scale;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    auto row = scores.row(i);
    const double peak = row.maxCoeff();
    // Scalar exp: Eigen's packet exp clamps its argument and would leave a
    // tiny non-zero weight on masked positions.
    row = (row.array() - peak).unaryExpr([](double x) { return std::exp(x); });
    row /= row.sum();
  }
  return scores;
}

Matrix Attention(const Matrix &q, const Matrix &k, const Matrix &v,
                 const Matrix &mask) {
  if (v.rows() != k.rows()) throw ShapeError("keys and values differ in rows");
  return AttentionWeights(q, k, mask) * v;
}

Matrix ForwardStack(const Matrix &x, const UnmaskConfig &config) {
  const auto n = static_cast<std::size_t>(x.rows());
  const Matrix causal = CausalMask(n);
  const Matrix open = Unmasked(n);
  Matrix h = x;
  for (std::size_t layer = 0; layer < config.num_layers(); ++layer) {
    const Matrix &mask =
        config.LayerKind(layer) == MaskKind::kCausal ? causal : open;
    h = Attention(h, h, h, mask);
  }
  return h;
}

nlohmann::ordered_json MatrixToJson(const Matrix &m) {
  auto json = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    json.push_back(std::move(row));
  }
  return json;
}

Matrix MatrixFromJson(const nlohmann::ordered_json &json) {
  if (!json.is_array() || json.empty()) {
    throw ShapeError("matrix must be a non-empty array of rows");
  }
  const std::size_t cols = json[0].is_array() ? json[0].size() : 0;
  if (cols == 0) throw ShapeError("matrix rows must be non-empty arrays");
  Matrix m(static_cast<Eigen::Index>(json.size()),
           static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < json.size(); ++i) {
    const auto &row = json[i];
    if (!row.is_array() || row.size() != cols) {
      throw ShapeError("ragged matrix at row " + std::to_string(i));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (!row[j].is_number()) {
        throw ParseError(0, "matrix entry is not a number");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          row[j].get<double>();
    }
  }
  return m;
}

namespace {

void PutU64(std::ostream &out, std::uint64_t value) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = (value >> (8 * i)) & 0xff;
  out.write(reinterpret_cast<const char *>(bytes), 8);
}

std::uint64_t GetU64(std::istream &in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char *>(bytes), 8)) {
    throw IoError("truncated matrix header");
  }
  std::uint64_t value = 0;
  for (int i = 7; i >= 0; --i) value = (value << 8) | bytes[i];
  return value;
}

}  // namespace

void WriteMatrix(std::ostream &out, const Matrix &m) {
  PutU64(out, static_cast<std::uint64_t>(m.rows()));
  PutU64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    PutU64(out, std::bit_cast<std::uint64_t>(m.data()[i]));
  }
  if (!out) throw IoError("failed to write matrix");
}

Matrix ReadMatrix(std::istream &in) {
  const std::uint64_t rows = GetU64(in);
  const std::uint64_t cols = GetU64(in);
  if (rows > (1u << 24) || cols > (1u << 24)) {
    throw IoError("matrix dimensions too large");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = std::bit_cast<double>(GetU64(in));
  }
  return m;
}

}  // namespace seqlab::attn
