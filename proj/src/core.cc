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

#include "ambr/core.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ambr {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBudgetExhausted: return "BudgetExhausted";
    case ErrorCode::kBudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kSelfPair: return "SelfPair";
    case ErrorCode::kEmptyReferenceSet: return "EmptyReferenceSet";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kMissingMatrix: return "MissingMatrix";
    case ErrorCode::kMalformedMatrix: return "MalformedMatrix";
    case ErrorCode::kMissingEmbeddings: return "MissingEmbeddings";
    case ErrorCode::kMissingRewards: return "MissingRewards";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

void Instance::Validate() const {
  const std::size_t n = candidates.size();
  auto fail = [this](const std::string& field, const std::string& why) {
    throw Error(ErrorCode::kSchemaError,
                "instance '" + id + "': field '" + field + "' " + why);
  };
  if (n == 0) fail("candidates", "must hold at least one candidate");
  if (embeddings) {
    if (embeddings->size() != n) fail("embeddings", "length differs from N");
    const std::size_t dim = embeddings->front().size();
    if (dim == 0) fail("embeddings", "has zero dimension");
    for (const auto& e : *embeddings) {
      if (e.size() != dim) fail("embeddings", "vectors differ in dimension");
      for (double v : e) {
        if (!std::isfinite(v)) fail("embeddings", "holds a non-finite value");
      }
    }
  }
  if (rewards) {
    if (rewards->size() != n) fail("rewards", "length differs from N");
    for (double r : *rewards) {
      if (!std::isfinite(r)) fail("rewards", "holds a non-finite value");
    }
  }
  if (utility_matrix) {
    if (utility_matrix->size() != n) fail("utility_matrix", "is not N x N");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && !std::isfinite(utility_matrix->at(i, j))) {
          fail("utility_matrix", "holds a non-finite off-diagonal entry");
        }
      }
    }
  }
}

UtilityOracle::UtilityOracle(std::size_t n, PairScorer scorer,
                             std::uint64_t budget, CacheMode mode)
    : n_(n),
      scorer_(std::move(scorer)),
      mode_(mode),
      ledger_{budget, 0},
      values_(n * n, 0.0),
      present_(n * n, 0) {}

void UtilityOracle::CheckPair(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "pair (" + std::to_string(i) + ", " + std::to_string(j) +
                    ") outside pool of size " + std::to_string(n_));
  }
  if (i == j) {
    throw Error(ErrorCode::kSelfPair,
                "self-pair (" + std::to_string(i) + ", " + std::to_string(i) +
                    ") is never scored");
  }
}

std::optional<double> UtilityOracle::TryScore(std::size_t i, std::size_t j) {
  CheckPair(i, j);
  const std::size_t k = i * n_ + j;
  if (present_[k]) return values_[k];
  if (ledger_.exhausted()) return std::nullopt;
  const double v = scorer_(i, j);
  values_[k] = v;
  present_[k] = 1;
  if (mode_ == CacheMode::kMirrored) {
    values_[j * n_ + i] = v;
    present_[j * n_ + i] = 1;
  }
  ++ledger_.used;
  return v;
}

double UtilityOracle::Score(std::size_t i, std::size_t j) {
  if (auto v = TryScore(i, j)) return *v;
  throw Error(ErrorCode::kBudgetExhausted,
              "budget of " + std::to_string(ledger_.budget) +
                  " evaluations exhausted");
}

std::optional<double> UtilityOracle::Lookup(std::size_t i,
                                            std::size_t j) const {
  CheckPair(i, j);
  const std::size_t k = i * n_ + j;
  if (!present_[k]) return std::nullopt;
  return values_[k];
}

bool UtilityOracle::IsCached(std::size_t i, std::size_t j) const {
  return i < n_ && j < n_ && present_[i * n_ + j] != 0;
}

std::uint64_t UtilityOracle::UncachedCount(
    std::span<const std::size_t> candidates,
    std::span<const std::size_t> refs) const {
  // Mirrored caching can make (h, y) and (y, h) share one evaluation, so
  // walk a scratch copy of the occupancy mask.
  std::vector<std::uint8_t> seen = present_;
  std::uint64_t count = 0;
  for (std::size_t h : candidates) {
    for (std::size_t y : refs) {
      if (h == y) continue;
      CheckPair(h, y);
      if (seen[h * n_ + y]) continue;
      seen[h * n_ + y] = 1;
      if (mode_ == CacheMode::kMirrored) seen[y * n_ + h] = 1;
      ++count;
    }
  }
  return count;
}

BudgetScope::BudgetScope(UtilityOracle& oracle, std::uint64_t limit)
    : oracle_(oracle),
      outer_budget_(oracle.ledger().budget),
      start_(oracle.ledger().used) {
  const std::uint64_t cap =
      limit > std::numeric_limits<std::uint64_t>::max() - start_
          ? std::numeric_limits<std::uint64_t>::max()
          : start_ + limit;
  oracle_.set_budget(std::min(outer_budget_, cap));
}

BudgetScope::~BudgetScope() { oracle_.set_budget(outer_budget_); }

double MeanUtility(UtilityOracle& oracle, std::size_t h,
                   std::span<const std::size_t> refs) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t y : refs) {
    if (y == h) continue;
    sum += oracle.Score(h, y);
    ++count;
  }
  if (count == 0) {
    throw Error(ErrorCode::kEmptyReferenceSet,
                "no reference other than candidate " + std::to_string(h));
  }
  return sum / static_cast<double>(count);
}

double PartialMean::value() const {
  if (count == 0) return -std::numeric_limits<double>::infinity();
  return sum / static_cast<double>(count);
}

PartialMean CachedMean(const UtilityOracle& oracle, std::size_t h,
                       std::span<const std::size_t> refs) {
  PartialMean m;
  for (std::size_t y : refs) {
    if (y == h) continue;
    if (auto v = oracle.Lookup(h, y)) {
      m.sum += *v;
      ++m.count;
    }
  }
  return m;
}

std::size_t ArgMax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

std::uint64_t Mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t HashCombine(std::uint64_t seed, std::uint64_t value) {
  return Mix64(seed ^ (Mix64(value) + 0x9e3779b97f4a7c15ULL + (seed << 6) +
                       (seed >> 2)));
}

std::uint64_t HashString(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t RngStream::Next() { return engine_(); }

std::uint64_t RngStream::Below(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("RngStream::Below requires a positive bound");
  }
  // Reject the low tail so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

double RngStream::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

RngStream RngStream::Fork(std::uint64_t tag) const {
  return RngStream(HashCombine(seed_, tag));
}

}  // namespace ambr
