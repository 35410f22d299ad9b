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

#ifndef AMBR_CORE_H_
#define AMBR_CORE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ambr {

enum class ErrorCode {
  kBudgetExhausted,
  kBudgetTooSmall,
  kIndexOutOfRange,
  kSelfPair,
  kEmptyReferenceSet,
  kDimensionMismatch,
  kZeroVector,
  kMissingMatrix,
  kMalformedMatrix,
  kMissingEmbeddings,
  kMissingRewards,
  kParseError,
  kSchemaError,
  kLengthMismatch,
  kConfigError,
  kIoError,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Dense row-major square grid of scalars.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// One decoding problem. The candidate pool doubles as the reference pool.
struct Instance {
  std::string id;
  std::vector<std::string> candidates;
  std::optional<std::vector<std::vector<double>>> embeddings;
  std::optional<std::vector<double>> rewards;
  std::optional<SquareMatrix> utility_matrix;

  std::size_t size() const { return candidates.size(); }

  // Throws Error(kSchemaError) naming the offending field.
  void Validate() const;
};

struct EvalLedger {
  std::uint64_t budget = 0;
  std::uint64_t used = 0;

  std::uint64_t remaining() const { return used >= budget ? 0 : budget - used; }
  bool exhausted() const { return used >= budget; }
};

enum class CacheMode {
  kOrdered,   // (i, j) and (j, i) are distinct evaluations
  kMirrored,  // symmetric scorer; one evaluation fills both orientations
};

using PairScorer = std::function<double(std::size_t, std::size_t)>;

// Pairwise utility u(candidate, reference) with a mandatory cache and an
// evaluation ledger. Only uncached off-diagonal pairs cost budget.
class UtilityOracle {
 public:
  UtilityOracle(std::size_t n, PairScorer scorer, std::uint64_t budget,
                CacheMode mode = CacheMode::kOrdered);

  std::size_t size() const { return n_; }
  CacheMode cache_mode() const { return mode_; }

  // Scores and caches the pair. Throws kBudgetExhausted, kIndexOutOfRange,
  // kSelfPair.
  double Score(std::size_t i, std::size_t j);

  // Like Score, but returns nullopt instead of throwing when the pair is
  // uncached and the ledger is full.
  std::optional<double> TryScore(std::size_t i, std::size_t j);

  // Cached value only; never scores.
  std::optional<double> Lookup(std::size_t i, std::size_t j) const;
  bool IsCached(std::size_t i, std::size_t j) const;

  // Number of scored pairs needed to cover every (h, y) with y != h.
  std::uint64_t UncachedCount(std::span<const std::size_t> candidates,
                              std::span<const std::size_t> refs) const;

  const EvalLedger& ledger() const { return ledger_; }
  void set_budget(std::uint64_t budget) { ledger_.budget = budget; }

 private:
  void CheckPair(std::size_t i, std::size_t j) const;

  std::size_t n_;
  PairScorer scorer_;
  CacheMode mode_;
  EvalLedger ledger_;
  std::vector<double> values_;
  std::vector<std::uint8_t> present_;
};

// Narrows the oracle's ledger so that at most `limit` new evaluations happen
// while the scope is alive. Restores the outer budget on destruction.
class BudgetScope {
 public:
  BudgetScope(UtilityOracle& oracle, std::uint64_t limit);
  ~BudgetScope();
  BudgetScope(const BudgetScope&) = delete;
  BudgetScope& operator=(const BudgetScope&) = delete;

  std::uint64_t start() const { return start_; }
  std::uint64_t spent() const { return oracle_.ledger().used - start_; }

 private:
  UtilityOracle& oracle_;
  std::uint64_t outer_budget_;
  std::uint64_t start_;
};

// Arithmetic mean of u(h, y) over y in refs \ {h}. Scores uncached pairs.
double MeanUtility(UtilityOracle& oracle, std::size_t h,
                   std::span<const std::size_t> refs);

// Sum and count of the cached u(h, y), y in refs \ {h}. Used to build
// estimates from whatever a truncated run managed to evaluate.
struct PartialMean {
  double sum = 0.0;
  std::size_t count = 0;

  // -inf when no reference has been scored.
  double value() const;
};
PartialMean CachedMean(const UtilityOracle& oracle, std::size_t h,
                       std::span<const std::size_t> refs);

// Index into `scores` of the largest value; ties go to the lowest position.
std::size_t ArgMax(std::span<const double> scores);

// Deterministic 64-bit stream. Bounded draws use rejection sampling on top of
// mt19937_64 so traces are identical across standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t Next();
  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t Below(std::uint64_t bound);
  // Uniform double in [0, 1).
  double Uniform();
  // Independent substream keyed by `tag`.
  RngStream Fork(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t Mix64(std::uint64_t x);
std::uint64_t HashCombine(std::uint64_t seed, std::uint64_t value);
std::uint64_t HashString(std::string_view s);

// One round of an iterative selection procedure.
struct IterationRecord {
  std::size_t round = 0;
  std::vector<std::size_t> candidates;  // surviving set entering the round
  std::vector<std::size_t> added_refs;  // references revealed this round
  std::size_t target = 0;               // t_i for halving, r_i for CBP
  std::size_t ref_count = 0;            // references behind the estimates
  std::vector<double> estimates;        // aligned with candidates
  std::optional<std::size_t> incumbent;
  std::vector<double> win_ratios;       // CBP only, aligned with candidates
  std::vector<std::size_t> survivors;
  std::uint64_t budget = 0;             // doubling runs only
  bool truncated = false;
};

struct Selection {
  std::size_t chosen = 0;
  std::uint64_t evals_used = 0;
  std::uint64_t coarse_evals = 0;
  bool converged = true;
  std::vector<IterationRecord> trace;
};

}  // namespace ambr

#endif  // AMBR_CORE_H_
