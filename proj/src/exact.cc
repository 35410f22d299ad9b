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

#include <cmath>

#include "ambr/algorithms.h"
#include "selection_util.h"

namespace ambr {

using internal::Iota;

std::vector<double> FullPoolMeans(UtilityOracle& oracle) {
  const std::size_t n = oracle.size();
  if (n <= 1) return std::vector<double>(n, 0.0);
  const std::vector<std::size_t> pool = Iota(n);
  const std::uint64_t needed = oracle.UncachedCount(pool, pool);
  if (needed > oracle.ledger().remaining()) {
    throw Error(ErrorCode::kBudgetExhausted,
                "full-pool MBR needs " + std::to_string(needed) +
                    " evaluations, " +
                    std::to_string(oracle.ledger().remaining()) + " remain");
  }
  std::vector<double> means(n);
  for (std::size_t h = 0; h < n; ++h) means[h] = MeanUtility(oracle, h, pool);
  return means;
}

Selection ExactMbr(UtilityOracle& oracle) {
  const std::uint64_t start = oracle.ledger().used;
  Selection sel;
  IterationRecord rec;
  rec.candidates = Iota(oracle.size());
  rec.target = oracle.size();
  rec.ref_count = oracle.size();
  rec.estimates = FullPoolMeans(oracle);
  sel.chosen = ArgMax(rec.estimates);
  rec.incumbent = sel.chosen;
  rec.survivors = {sel.chosen};
  sel.trace.push_back(std::move(rec));
  sel.evals_used = oracle.ledger().used - start;
  return sel;
}

Selection RewardMbr(UtilityOracle& oracle, std::span<const double> rewards,
                    std::uint64_t budget) {
  const std::size_t n = oracle.size();
  if (rewards.empty()) {
    throw Error(ErrorCode::kMissingRewards, "reward-weighted MBR needs rewards");
  }
  if (rewards.size() != n) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(rewards.size()) + " rewards for " +
                    std::to_string(n) + " candidates");
  }
  Selection sel;
  if (n == 1) return sel;

  BudgetScope scope(oracle, budget);
  const std::vector<std::size_t> pool = Iota(n);
  const std::uint64_t needed = oracle.UncachedCount(pool, pool);
  if (needed > oracle.ledger().remaining()) {
    throw Error(ErrorCode::kBudgetExhausted,
                "reward-weighted MBR needs " + std::to_string(needed) +
                    " evaluations within a budget of " +
                    std::to_string(budget));
  }
  IterationRecord rec;
  rec.candidates = pool;
  rec.target = n;
  rec.ref_count = n;
  rec.estimates.resize(n);
  for (std::size_t h = 0; h < n; ++h) {
    double sum = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      if (y != h) sum += oracle.Score(h, y) * rewards[y];
    }
    rec.estimates[h] = sum / static_cast<double>(n - 1);
  }
  sel.chosen = ArgMax(rec.estimates);
  rec.incumbent = sel.chosen;
  rec.survivors = {sel.chosen};
  sel.trace.push_back(std::move(rec));
  sel.evals_used = scope.spent();
  return sel;
}

Selection ReferenceAggregation(const Instance& instance) {
  if (!instance.embeddings || instance.embeddings->empty()) {
    throw Error(ErrorCode::kMissingEmbeddings,
                "instance '" + instance.id + "' has no embeddings");
  }
  const auto& vectors = *instance.embeddings;
  const std::size_t n = vectors.size();
  const std::size_t dim = vectors.front().size();

  std::vector<std::vector<double>> units(n, std::vector<double>(dim));
  std::vector<double> total(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embeddings of instance '" + instance.id +
                      "' differ in dimension");
    }
    double norm = 0.0;
    for (double x : vectors[i]) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      throw Error(ErrorCode::kZeroVector,
                  "embedding " + std::to_string(i) + " is the zero vector");
    }
    for (std::size_t k = 0; k < dim; ++k) {
      units[i][k] = vectors[i][k] / norm;
      total[k] += units[i][k];
    }
  }

  Selection sel;
  sel.evals_used = n;
  if (n == 1) return sel;

  IterationRecord rec;
  rec.candidates = Iota(n);
  rec.target = n;
  rec.ref_count = n - 1;
  rec.estimates.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Leave-one-out aggregate: drop the candidate's own contribution.
    double score = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      score += units[i][k] * (total[k] - units[i][k]);
    }
    rec.estimates[i] = score / static_cast<double>(n - 1);
  }
  sel.chosen = ArgMax(rec.estimates);
  rec.incumbent = sel.chosen;
  rec.survivors = {sel.chosen};
  sel.trace.push_back(std::move(rec));
  return sel;
}

}  // namespace ambr
