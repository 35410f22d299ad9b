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

#ifndef AMBR_ALGORITHMS_H_
#define AMBR_ALGORITHMS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ambr/core.h"

namespace ambr {

// Full-pool MBR: every candidate against every other pool member. Throws
// kBudgetExhausted up front if the ledger cannot cover the uncached pairs.
// trace[0].estimates holds the per-candidate means.
Selection ExactMbr(UtilityOracle& oracle);

// Per-candidate diagonal-free mean over the full pool (0 for a single
// candidate). Same budget contract as ExactMbr.
std::vector<double> FullPoolMeans(UtilityOracle& oracle);

// N-by-S: all candidates against S' = ceil(T / (N - 1)) sampled references.
// Throws kBudgetTooSmall if T < N - 1.
Selection NByS(UtilityOracle& oracle, std::uint64_t budget, RngStream& rng);

// Coarse-to-fine: rank by coarse mean over the whole pool, keep the top
// N' = ceil(T / (N - 1)) and pick by fine mean over the whole pool. Only the
// fine oracle is charged against T; coarse evaluations land in
// Selection::coarse_evals.
Selection CoarseToFine(UtilityOracle& coarse, UtilityOracle& fine,
                       std::uint64_t budget);

struct CbpConfig {
  std::size_t r0 = 1;
  double alpha = 0.99;
  std::size_t bootstrap = 500;

  void Validate() const;
};

// Confidence-based pruning with the doubling reference schedule
// r_i = 2^i * r0 and bootstrap win ratios against the incumbent.
Selection ConfidenceBasedPruning(UtilityOracle& oracle, std::uint64_t budget,
                                 const CbpConfig& cfg, RngStream& rng);

struct HalvingRound {
  std::size_t round = 0;
  std::size_t candidates = 0;  // |H_i|
  std::size_t target = 0;      // t_i
};

// Planned (untruncated) halving schedule for a pool of n and budget T.
std::vector<HalvingRound> PlanHalving(std::size_t n, std::uint64_t budget);

// ceil(log2 n), 0 for n <= 1.
std::size_t CeilLog2(std::size_t n);

// Correlated sequential halving over the MBR objective. References
// accumulate across rounds.
Selection Ambr(UtilityOracle& oracle, std::uint64_t budget, RngStream& rng);

// Variant that draws a fresh size-t_i reference set every round and discards
// the previous one.
Selection AmbrReplace(UtilityOracle& oracle, std::uint64_t budget,
                      RngStream& rng);

// Scores every candidate against the mean of the other unit-normalized
// embeddings. evals_used is N. Throws kMissingEmbeddings, kZeroVector.
Selection ReferenceAggregation(const Instance& instance);

// argmax_h mean_{y != h} u(h, y) * reward(y). Throws kMissingRewards,
// kBudgetExhausted.
Selection RewardMbr(UtilityOracle& oracle, std::span<const double> rewards,
                    std::uint64_t budget);

// Medoid of a distance grid via Ambr on u = -d. Throws kMalformedMatrix.
std::size_t Medoid(const SquareMatrix& distances, std::uint64_t budget,
                   RngStream& rng);

// Reruns Ambr at budgets T0, 2 T0, ... (clamped to cap) until two consecutive
// runs agree. Selection::converged is false when cap is reached first.
Selection DoublingTrick(UtilityOracle& oracle, std::uint64_t initial_budget,
                        std::uint64_t cap, RngStream& rng);

}  // namespace ambr

#endif  // AMBR_ALGORITHMS_H_
