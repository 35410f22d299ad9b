// Copyright 2026 The ambr Authors. All Rights Reserved.
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

#include "ambr/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <memory>

namespace ambr {
namespace {

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts CountNgrams(const TokenSequence& tokens, std::size_t order) {
  NgramCounts counts;
  if (tokens.size() < order) return counts;
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i,
                                      tokens.begin() + i + order)];
  }
  return counts;
}

std::size_t ClippedOverlap(const NgramCounts& cand, const NgramCounts& ref) {
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

std::size_t LcsLength(const TokenSequence& a, const TokenSequence& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// 2PR / (P + R) with P = m / |a|, R = m / |b| reduces to 2m / (|a| + |b|).
double OverlapF1(std::size_t match, std::size_t len_a, std::size_t len_b) {
  if (match == 0 || len_a == 0 || len_b == 0) return 0.0;
  return 2.0 * static_cast<double>(match) /
         static_cast<double>(len_a + len_b);
}

std::vector<std::vector<double>> Normalized(
    const std::vector<std::vector<double>>& vectors) {
  std::vector<std::vector<double>> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      throw Error(ErrorCode::kZeroVector, "cosine utility on a zero vector");
    }
    std::vector<double> unit(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) unit[k] = v[k] / norm;
    out.push_back(std::move(unit));
  }
  return out;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

TokenSequence Tokenize(std::string_view text) {
  TokenSequence tokens;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double UnigramF1(const TokenSequence& a, const TokenSequence& b) {
  if (a.empty() || b.empty()) return 0.0;
  return OverlapF1(ClippedOverlap(CountNgrams(a, 1), CountNgrams(b, 1)),
                   a.size(), b.size());
}

double SentenceBleu(const TokenSequence& cand, const TokenSequence& ref) {
  if (cand.empty()) return 0.0;
  constexpr std::size_t kMaxOrder = 4;
  double log_sum = 0.0;
  for (std::size_t order = 1; order <= kMaxOrder; ++order) {
    const NgramCounts c = CountNgrams(cand, order);
    const NgramCounts r = CountNgrams(ref, order);
    const std::size_t total =
        cand.size() >= order ? cand.size() - order + 1 : 0;
    const double p = (static_cast<double>(ClippedOverlap(c, r)) + 1.0) /
                     (static_cast<double>(total) + 1.0);
    log_sum += std::log(p);
  }
  const double ratio =
      static_cast<double>(ref.size()) / static_cast<double>(cand.size());
  const double bp = std::exp(std::min(0.0, 1.0 - ratio));
  return bp * std::exp(log_sum / static_cast<double>(kMaxOrder));
}

double RougeLF1(const TokenSequence& cand, const TokenSequence& ref) {
  if (cand.empty() || ref.empty()) return 0.0;
  return OverlapF1(LcsLength(cand, ref), cand.size(), ref.size());
}

double VectorUtility(std::span<const double> a, std::span<const double> b,
                     VectorKind kind) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vectors of dimension " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  const double dot = Dot(a, b);
  if (kind == VectorKind::kDot) return dot;
  const double na = std::sqrt(Dot(a, a));
  const double nb = std::sqrt(Dot(b, b));
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kZeroVector, "cosine utility on a zero vector");
  }
  return dot / (na * nb);
}

UtilityOracle MatrixOracle(SquareMatrix matrix, std::uint64_t budget) {
  const std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && !std::isfinite(matrix.at(i, j))) {
        throw Error(ErrorCode::kMalformedMatrix,
                    "non-finite utility at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
    }
  }
  auto grid = std::make_shared<const SquareMatrix>(std::move(matrix));
  return UtilityOracle(
      n, [grid](std::size_t i, std::size_t j) { return grid->at(i, j); },
      budget);
}

UtilityOracle MatrixOracle(const Instance& instance, std::uint64_t budget) {
  if (!instance.utility_matrix) {
    throw Error(ErrorCode::kMissingMatrix,
                "instance '" + instance.id + "' has no utility_matrix");
  }
  if (instance.utility_matrix->size() != instance.size()) {
    throw Error(ErrorCode::kMalformedMatrix,
                "utility_matrix of instance '" + instance.id +
                    "' is not N x N");
  }
  return MatrixOracle(*instance.utility_matrix, budget);
}

UtilityOracle LexicalOracle(const Instance& instance, LexicalMetric metric,
                            std::uint64_t budget) {
  auto tokens = std::make_shared<std::vector<TokenSequence>>();
  tokens->reserve(instance.size());
  for (const auto& text : instance.candidates) {
    tokens->push_back(Tokenize(text));
  }
  PairScorer scorer;
  switch (metric) {
    case LexicalMetric::kUnigramF1:
      scorer = [tokens](std::size_t i, std::size_t j) {
        return UnigramF1((*tokens)[i], (*tokens)[j]);
      };
      break;
    case LexicalMetric::kBleu:
      scorer = [tokens](std::size_t i, std::size_t j) {
        return SentenceBleu((*tokens)[i], (*tokens)[j]);
      };
      break;
    case LexicalMetric::kRougeL:
      scorer = [tokens](std::size_t i, std::size_t j) {
        return RougeLF1((*tokens)[i], (*tokens)[j]);
      };
      break;
  }
  return UtilityOracle(instance.size(), std::move(scorer), budget);
}

UtilityOracle VectorOracle(const Instance& instance, VectorKind kind,
                           std::uint64_t budget) {
  if (!instance.embeddings) {
    throw Error(ErrorCode::kMissingEmbeddings,
                "instance '" + instance.id + "' has no embeddings");
  }
  auto vectors = std::make_shared<const std::vector<std::vector<double>>>(
      kind == VectorKind::kCosine ? Normalized(*instance.embeddings)
                                  : *instance.embeddings);
  for (const auto& v : *vectors) {
    if (v.size() != vectors->front().size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embeddings of instance '" + instance.id +
                      "' differ in dimension");
    }
  }
  return UtilityOracle(
      instance.size(),
      [vectors](std::size_t i, std::size_t j) {
        return Dot((*vectors)[i], (*vectors)[j]);
      },
      budget);
}

bool IsKnownUtility(std::string_view name) {
  return name == "matrix" || name == "unigram_f1" || name == "bleu" ||
         name == "rouge_l" || name == "cosine" || name == "dot";
}

UtilityOracle MakeOracle(const Instance& instance, std::string_view name,
                         std::uint64_t budget) {
  if (name == "matrix") return MatrixOracle(instance, budget);
  if (name == "unigram_f1") {
    return LexicalOracle(instance, LexicalMetric::kUnigramF1, budget);
  }
  if (name == "bleu") return LexicalOracle(instance, LexicalMetric::kBleu, budget);
  if (name == "rouge_l") {
    return LexicalOracle(instance, LexicalMetric::kRougeL, budget);
  }
  if (name == "cosine") return VectorOracle(instance, VectorKind::kCosine, budget);
  if (name == "dot") return VectorOracle(instance, VectorKind::kDot, budget);
  throw Error(ErrorCode::kConfigError,
              "unknown utility '" + std::string(name) + "'");
}

}  // namespace ambr
