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

#include <algorithm>

#include "ambr/algorithms.h"
#include "ambr/metrics.h"
#include "selection_util.h"

namespace ambr {

using internal::Iota;

std::size_t CeilLog2(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

namespace {

std::size_t RoundTarget(std::uint64_t budget, std::size_t candidates,
                        std::size_t rounds, std::size_t n) {
  const std::uint64_t per = budget / (static_cast<std::uint64_t>(candidates) *
                                      static_cast<std::uint64_t>(rounds));
  return static_cast<std::size_t>(
      std::min<std::uint64_t>(std::max<std::uint64_t>(per, 1), n));
}

enum class ReferencePolicy { kAccumulate, kReplace };

Selection SequentialHalving(UtilityOracle& oracle, std::uint64_t budget,
                            RngStream& rng, ReferencePolicy policy) {
  const std::size_t n = oracle.size();
  Selection sel;
  if (n == 1) return sel;

  BudgetScope scope(oracle, budget);
  const std::size_t rounds = CeilLog2(n);
  internal::PoolSampler sampler(n);
  std::vector<std::size_t> candidates = Iota(n);
  std::vector<std::size_t> refs;

  for (std::size_t round = 0; round < rounds; ++round) {
    IterationRecord rec;
    rec.round = round;
    rec.candidates = candidates;
    rec.target = RoundTarget(budget, candidates.size(), rounds, n);
    if (policy == ReferencePolicy::kAccumulate) {
      // Empty when t_i <= |R_i|; the round then reuses cached estimates.
      const std::size_t extra =
          rec.target > refs.size() ? rec.target - refs.size() : 0;
      rec.added_refs = sampler.Draw(extra, rng);
      refs.insert(refs.end(), rec.added_refs.begin(), rec.added_refs.end());
    } else {
      internal::PoolSampler fresh(n);
      rec.added_refs = fresh.Draw(rec.target, rng);
      refs = rec.added_refs;
    }
    rec.ref_count = refs.size();

    const bool complete =
        internal::EvaluateCandidateMajor(oracle, candidates, refs);
    rec.truncated = !complete;
    rec.estimates = internal::CachedEstimates(oracle, candidates, refs);
    const std::size_t best = ArgMax(rec.estimates);
    sel.chosen = candidates[best];
    rec.incumbent = sel.chosen;

    if (!complete || rec.target == n) {
      rec.survivors = {sel.chosen};
      sel.trace.push_back(std::move(rec));
      break;
    }
    rec.survivors = internal::TopK(candidates, rec.estimates,
                                   (candidates.size() + 1) / 2);
    candidates = rec.survivors;
    sel.trace.push_back(std::move(rec));
  }
  sel.evals_used = scope.spent();
  return sel;
}

}  // namespace

std::vector<HalvingRound> PlanHalving(std::size_t n, std::uint64_t budget) {
  std::vector<HalvingRound> plan;
  if (n <= 1) return plan;
  const std::size_t rounds = CeilLog2(n);
  std::size_t candidates = n;
  for (std::size_t round = 0; round < rounds; ++round) {
    const std::size_t target = RoundTarget(budget, candidates, rounds, n);
    plan.push_back({round, candidates, target});
    if (target == n) break;
    candidates = (candidates + 1) / 2;
  }
  return plan;
}

Selection Ambr(UtilityOracle& oracle, std::uint64_t budget, RngStream& rng) {
  return SequentialHalving(oracle, budget, rng, ReferencePolicy::kAccumulate);
}

Selection AmbrReplace(UtilityOracle& oracle, std::uint64_t budget,
                      RngStream& rng) {
  return SequentialHalving(oracle, budget, rng, ReferencePolicy::kReplace);
}

std::size_t Medoid(const SquareMatrix& distances, std::uint64_t budget,
                   RngStream& rng) {
  const std::size_t n = distances.size();
  if (n == 0) {
    throw Error(ErrorCode::kMalformedMatrix, "empty distance grid");
  }
  SquareMatrix utility(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) utility.at(i, j) = -distances.at(i, j);
    }
  }
  UtilityOracle oracle = MatrixOracle(std::move(utility), budget);
  return Ambr(oracle, budget, rng).chosen;
}

Selection DoublingTrick(UtilityOracle& oracle, std::uint64_t initial_budget,
                        std::uint64_t cap, RngStream& rng) {
  if (initial_budget < 1 || initial_budget > cap) {
    throw Error(ErrorCode::kConfigError,
                "doubling trick needs 1 <= T0 <= cap");
  }
  Selection sel;
  if (oracle.size() == 1) return sel;

  const std::uint64_t start = oracle.ledger().used;
  std::uint64_t budget = initial_budget;
  std::optional<std::size_t> previous;
  for (std::uint64_t run = 0;; ++run) {
    RngStream sub = rng.Fork(run);
    const Selection result = Ambr(oracle, budget, sub);

    IterationRecord rec;
    rec.round = static_cast<std::size_t>(run);
    rec.budget = budget;
    rec.incumbent = result.chosen;
    rec.truncated = !result.trace.empty() && result.trace.back().truncated;
    sel.trace.push_back(std::move(rec));
    sel.chosen = result.chosen;

    if (previous && *previous == result.chosen) {
      sel.converged = true;
      break;
    }
    if (budget == cap) {
      sel.converged = false;
      break;
    }
    previous = result.chosen;
    budget = budget > cap / 2 ? cap : budget * 2;
  }
  sel.evals_used = oracle.ledger().used - start;
  return sel;
}

}  // namespace ambr
