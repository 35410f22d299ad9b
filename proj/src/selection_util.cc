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

#include "selection_util.h"

#include <algorithm>
#include <numeric>

namespace ambr::internal {

std::vector<std::size_t> Iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

std::vector<std::size_t> PoolSampler::Draw(std::size_t k, RngStream& rng) {
  k = std::min(k, remaining());
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t pick = drawn_ + rng.Below(order_.size() - drawn_);
    std::swap(order_[drawn_], order_[pick]);
    out.push_back(order_[drawn_]);
    ++drawn_;
  }
  return out;
}

bool EvaluateCandidateMajor(UtilityOracle& oracle,
                            std::span<const std::size_t> candidates,
                            std::span<const std::size_t> refs) {
  for (std::size_t h : candidates) {
    for (std::size_t y : refs) {
      if (h != y && !oracle.TryScore(h, y)) return false;
    }
  }
  return true;
}

bool EvaluateReferenceMajor(UtilityOracle& oracle,
                            std::span<const std::size_t> candidates,
                            std::span<const std::size_t> refs) {
  for (std::size_t y : refs) {
    for (std::size_t h : candidates) {
      if (h != y && !oracle.TryScore(h, y)) return false;
    }
  }
  return true;
}

std::vector<double> CachedEstimates(const UtilityOracle& oracle,
                                    std::span<const std::size_t> candidates,
                                    std::span<const std::size_t> refs) {
  std::vector<double> est;
  est.reserve(candidates.size());
  for (std::size_t h : candidates) {
    est.push_back(CachedMean(oracle, h, refs).value());
  }
  return est;
}

std::vector<std::size_t> TopK(std::span<const std::size_t> candidates,
                              std::span<const double> scores, std::size_t k) {
  std::vector<std::size_t> pos = Iota(candidates.size());
  std::stable_sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  pos.resize(std::min(k, pos.size()));
  std::sort(pos.begin(), pos.end());
  std::vector<std::size_t> out;
  out.reserve(pos.size());
  for (std::size_t p : pos) out.push_back(candidates[p]);
  return out;
}

std::uint64_t CeilDiv(std::uint64_t a, std::uint64_t b) {
  return a / b + (a % b != 0 ? 1 : 0);
}

}  // namespace ambr::internal
