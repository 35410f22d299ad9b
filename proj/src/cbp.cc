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
#include <limits>

#include "ambr/algorithms.h"
#include "selection_util.h"

namespace ambr {

using internal::Iota;

void CbpConfig::Validate() const {
  if (r0 < 1) throw Error(ErrorCode::kConfigError, "CBP r0 must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kConfigError, "CBP alpha must lie in (0, 1]");
  }
  if (bootstrap < 1) {
    throw Error(ErrorCode::kConfigError, "CBP bootstrap count must be >= 1");
  }
}

namespace {

// Fraction of bootstrap resamples in which each candidate's diagonal-free
// mean is at least the incumbent's. A side with no usable reference in a
// resample cannot be ranked; that resample counts as a win.
std::vector<double> BootstrapWinRatios(const UtilityOracle& oracle,
                                       std::span<const std::size_t> candidates,
                                       std::span<const std::size_t> refs,
                                       std::size_t incumbent_pos,
                                       std::size_t resample_size,
                                       std::size_t rounds, RngStream& rng) {
  const std::size_t h_count = candidates.size();
  const std::size_t r_count = refs.size();
  // Scores of candidate k against refs[m]; valid[k][m] is 0 on the diagonal.
  std::vector<double> scores(h_count * r_count, 0.0);
  std::vector<std::uint8_t> valid(h_count * r_count, 0);
  for (std::size_t k = 0; k < h_count; ++k) {
    for (std::size_t m = 0; m < r_count; ++m) {
      if (candidates[k] == refs[m]) continue;
      if (auto v = oracle.Lookup(candidates[k], refs[m])) {
        scores[k * r_count + m] = *v;
        valid[k * r_count + m] = 1;
      }
    }
  }

  std::vector<std::size_t> wins(h_count, 0);
  std::vector<std::size_t> multiplicity(r_count);
  std::vector<double> sums(h_count);
  std::vector<std::size_t> counts(h_count);
  for (std::size_t b = 0; b < rounds; ++b) {
    std::fill(multiplicity.begin(), multiplicity.end(), 0);
    for (std::size_t s = 0; s < resample_size; ++s) {
      ++multiplicity[rng.Below(r_count)];
    }
    for (std::size_t k = 0; k < h_count; ++k) {
      double sum = 0.0;
      std::size_t count = 0;
      const double* row = scores.data() + k * r_count;
      const std::uint8_t* ok = valid.data() + k * r_count;
      for (std::size_t m = 0; m < r_count; ++m) {
        if (ok[m] && multiplicity[m] != 0) {
          sum += static_cast<double>(multiplicity[m]) * row[m];
          count += multiplicity[m];
        }
      }
      sums[k] = sum;
      counts[k] = count;
    }
    const bool inc_defined = counts[incumbent_pos] != 0;
    const double inc_mean =
        inc_defined ? sums[incumbent_pos] /
                          static_cast<double>(counts[incumbent_pos])
                    : 0.0;
    for (std::size_t k = 0; k < h_count; ++k) {
      if (k == incumbent_pos || counts[k] == 0 || !inc_defined ||
          sums[k] / static_cast<double>(counts[k]) >= inc_mean) {
        ++wins[k];
      }
    }
  }

  std::vector<double> ratios(h_count);
  for (std::size_t k = 0; k < h_count; ++k) {
    ratios[k] = static_cast<double>(wins[k]) / static_cast<double>(rounds);
  }
  return ratios;
}

}  // namespace

Selection ConfidenceBasedPruning(UtilityOracle& oracle, std::uint64_t budget,
                                 const CbpConfig& cfg, RngStream& rng) {
  cfg.Validate();
  const std::size_t n = oracle.size();
  Selection sel;
  if (n == 1) return sel;

  BudgetScope scope(oracle, budget);
  internal::PoolSampler sampler(n);
  std::vector<std::size_t> candidates = Iota(n);
  std::vector<std::size_t> refs;
  const double threshold = 1.0 - cfg.alpha;

  for (std::size_t round = 0;; ++round) {
    std::size_t target = n;
    if (round < std::numeric_limits<std::size_t>::digits &&
        cfg.r0 <= (n >> round)) {
      target = std::min(cfg.r0 << round, n);
    }

    IterationRecord rec;
    rec.round = round;
    rec.candidates = candidates;
    rec.target = target;
    rec.added_refs = sampler.Draw(target - refs.size(), rng);
    refs.insert(refs.end(), rec.added_refs.begin(), rec.added_refs.end());
    rec.ref_count = refs.size();

    const bool complete =
        internal::EvaluateReferenceMajor(oracle, candidates, rec.added_refs);
    rec.truncated = !complete;
    rec.estimates = internal::CachedEstimates(oracle, candidates, refs);
    const std::size_t inc_pos = ArgMax(rec.estimates);
    rec.incumbent = candidates[inc_pos];
    sel.chosen = candidates[inc_pos];

    if (!complete || target >= n || candidates.size() == 1) {
      rec.survivors = {sel.chosen};
      sel.trace.push_back(std::move(rec));
      break;
    }

    rec.win_ratios = BootstrapWinRatios(oracle, candidates, refs, inc_pos, n,
                                        cfg.bootstrap, rng);
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (rec.win_ratios[k] >= threshold) rec.survivors.push_back(candidates[k]);
    }
    candidates = rec.survivors;
    sel.trace.push_back(std::move(rec));
    if (candidates.size() == 1) break;
  }
  sel.evals_used = scope.spent();
  return sel;
}

}  // namespace ambr
