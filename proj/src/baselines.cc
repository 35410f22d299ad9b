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
#include "selection_util.h"

namespace ambr {

using internal::CachedEstimates;
using internal::CeilDiv;
using internal::Iota;

namespace {

void RequireRowBudget(std::size_t n, std::uint64_t budget, const char* who) {
  if (budget < n - 1) {
    throw Error(ErrorCode::kBudgetTooSmall,
                std::string(who) + " needs a budget of at least N - 1 = " +
                    std::to_string(n - 1) + ", got " + std::to_string(budget));
  }
}

}  // namespace

Selection NByS(UtilityOracle& oracle, std::uint64_t budget, RngStream& rng) {
  const std::size_t n = oracle.size();
  Selection sel;
  if (n == 1) return sel;
  RequireRowBudget(n, budget, "N-by-S");

  BudgetScope scope(oracle, budget);
  const std::size_t sample =
      static_cast<std::size_t>(std::min<std::uint64_t>(CeilDiv(budget, n - 1), n));
  internal::PoolSampler sampler(n);
  IterationRecord rec;
  rec.candidates = Iota(n);
  rec.added_refs = sampler.Draw(sample, rng);
  rec.target = sample;
  rec.ref_count = sample;
  // S' (N - 1) can overshoot T by up to N - 2 pairs; the last reference is
  // then only partially scored.
  rec.truncated =
      !internal::EvaluateReferenceMajor(oracle, rec.candidates, rec.added_refs);
  rec.estimates = CachedEstimates(oracle, rec.candidates, rec.added_refs);
  sel.chosen = ArgMax(rec.estimates);
  rec.incumbent = sel.chosen;
  rec.survivors = {sel.chosen};
  sel.trace.push_back(std::move(rec));
  sel.evals_used = scope.spent();
  return sel;
}

Selection CoarseToFine(UtilityOracle& coarse, UtilityOracle& fine,
                       std::uint64_t budget) {
  const std::size_t n = fine.size();
  if (coarse.size() != n) {
    throw Error(ErrorCode::kLengthMismatch,
                "coarse and fine oracles cover different pools");
  }
  Selection sel;
  if (n == 1) return sel;
  RequireRowBudget(n, budget, "coarse-to-fine");

  const std::vector<std::size_t> pool = Iota(n);
  const std::uint64_t coarse_start = coarse.ledger().used;
  IterationRecord coarse_rec;
  coarse_rec.candidates = pool;
  coarse_rec.target = n;
  coarse_rec.ref_count = n;
  coarse_rec.estimates = FullPoolMeans(coarse);
  const std::size_t keep =
      static_cast<std::size_t>(std::min<std::uint64_t>(CeilDiv(budget, n - 1), n));
  coarse_rec.survivors = internal::TopK(pool, coarse_rec.estimates, keep);
  sel.coarse_evals = coarse.ledger().used - coarse_start;

  BudgetScope scope(fine, budget);
  IterationRecord fine_rec;
  fine_rec.round = 1;
  fine_rec.candidates = coarse_rec.survivors;
  fine_rec.target = keep;
  fine_rec.ref_count = n;
  fine_rec.truncated =
      !internal::EvaluateReferenceMajor(fine, fine_rec.candidates, pool);
  fine_rec.estimates = CachedEstimates(fine, fine_rec.candidates, pool);
  sel.chosen = fine_rec.candidates[ArgMax(fine_rec.estimates)];
  fine_rec.incumbent = sel.chosen;
  fine_rec.survivors = {sel.chosen};
  sel.evals_used = scope.spent();
  sel.trace.push_back(std::move(coarse_rec));
  sel.trace.push_back(std::move(fine_rec));
  return sel;
}

}  // namespace ambr
