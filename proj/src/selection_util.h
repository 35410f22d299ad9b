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

// Helpers shared by the selection procedures. Not part of the public API.

#ifndef AMBR_SRC_SELECTION_UTIL_H_
#define AMBR_SRC_SELECTION_UTIL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "ambr/core.h"

namespace ambr::internal {

std::vector<std::size_t> Iota(std::size_t n);

// Draws pool members uniformly without replacement, one incremental
// Fisher-Yates step per draw.
class PoolSampler {
 public:
  explicit PoolSampler(std::size_t n) : order_(Iota(n)) {}

  std::size_t drawn() const { return drawn_; }
  std::size_t remaining() const { return order_.size() - drawn_; }
  std::vector<std::size_t> Draw(std::size_t k, RngStream& rng);

 private:
  std::vector<std::size_t> order_;
  std::size_t drawn_ = 0;
};

// Scores every (h, y), y != h, stopping when the ledger is full. Returns
// false if any pair was left unscored.
bool EvaluateCandidateMajor(UtilityOracle& oracle,
                            std::span<const std::size_t> candidates,
                            std::span<const std::size_t> refs);
bool EvaluateReferenceMajor(UtilityOracle& oracle,
                            std::span<const std::size_t> candidates,
                            std::span<const std::size_t> refs);

std::vector<double> CachedEstimates(const UtilityOracle& oracle,
                                    std::span<const std::size_t> candidates,
                                    std::span<const std::size_t> refs);

// The k candidates with the largest scores (ties to the lower index),
// returned in ascending index order. `candidates` must be ascending.
std::vector<std::size_t> TopK(std::span<const std::size_t> candidates,
                              std::span<const double> scores, std::size_t k);

std::uint64_t CeilDiv(std::uint64_t a, std::uint64_t b);

}  // namespace ambr::internal

#endif  // AMBR_SRC_SELECTION_UTIL_H_
