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

#ifndef AMBR_METRICS_H_
#define AMBR_METRICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ambr/core.h"

namespace ambr {

using TokenSequence = std::vector<std::string>;

// Lowercases ASCII letters and splits on runs of whitespace.
TokenSequence Tokenize(std::string_view text);

// Clipped unigram overlap F1. Zero when either side is empty.
double UnigramF1(const TokenSequence& a, const TokenSequence& b);

// Sentence BLEU with add-one smoothing on every order n = 1..4 and the
// brevity penalty exp(min(0, 1 - |ref| / |cand|)). Zero for an empty
// candidate.
double SentenceBleu(const TokenSequence& cand, const TokenSequence& ref);

// Longest-common-subsequence F1.
double RougeLF1(const TokenSequence& cand, const TokenSequence& ref);

enum class VectorKind { kCosine, kDot };

// Throws kDimensionMismatch, or kZeroVector for cosine on a zero vector.
double VectorUtility(std::span<const double> a, std::span<const double> b,
                     VectorKind kind);

enum class LexicalMetric { kUnigramF1, kBleu, kRougeL };

// Replays instance.utility_matrix. Throws kMissingMatrix or kMalformedMatrix.
UtilityOracle MatrixOracle(const Instance& instance, std::uint64_t budget);
UtilityOracle MatrixOracle(SquareMatrix matrix, std::uint64_t budget);

// Scores the whitespace-tokenized candidate texts.
UtilityOracle LexicalOracle(const Instance& instance, LexicalMetric metric,
                            std::uint64_t budget);

// Scores instance.embeddings. Cosine oracles normalize each vector once and
// take dot products. Throws kMissingEmbeddings, kZeroVector.
UtilityOracle VectorOracle(const Instance& instance, VectorKind kind,
                           std::uint64_t budget);

// Oracle selection by name: "matrix", "unigram_f1", "bleu", "rouge_l",
// "cosine", "dot".
bool IsKnownUtility(std::string_view name);
UtilityOracle MakeOracle(const Instance& instance, std::string_view name,
                         std::uint64_t budget);

}  // namespace ambr

#endif  // AMBR_METRICS_H_
