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

#ifndef AMBR_SYNTH_H_
#define AMBR_SYNTH_H_

#include <cstddef>
#include <cstdint>

#include "ambr/core.h"

namespace ambr {

// u(i, j) = base + gap * [i == m or j == m] + noise, noise uniform on
// [-noise_sigma, noise_sigma], planted index m drawn from the seed.
struct PlantedSpec {
  std::size_t n = 16;
  double gap = 0.1;
  double noise_sigma = 0.0;
  double base = 0.5;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct PlantedInstance {
  Instance instance;
  std::size_t planted = 0;
  // argmax of the diagonal-free row means of the generated matrix.
  std::size_t true_best = 0;
};

PlantedInstance MakePlantedInstance(const PlantedSpec& spec,
                                    const std::string& id = "planted");

// I.i.d. uniform(0, 1) off-diagonal utilities.
Instance MakeRandomInstance(std::size_t n, std::uint64_t seed,
                            const std::string& id = "random");

// Candidates named "h0", "h1", ... for matrix-only instances.
std::vector<std::string> PlaceholderCandidates(std::size_t n);

}  // namespace ambr

#endif  // AMBR_SYNTH_H_
