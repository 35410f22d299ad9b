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

#include "ambr/synth.h"

#include <cmath>

namespace ambr {

void PlantedSpec::Validate() const {
  if (n < 2) throw Error(ErrorCode::kConfigError, "planted n must be >= 2");
  if (!(gap >= 0.0) || !std::isfinite(gap)) {
    throw Error(ErrorCode::kConfigError, "planted gap must be finite and >= 0");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw Error(ErrorCode::kConfigError,
                "planted noise must be finite and >= 0");
  }
  if (!std::isfinite(base)) {
    throw Error(ErrorCode::kConfigError, "planted base must be finite");
  }
}

std::vector<std::string> PlaceholderCandidates(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back("h" + std::to_string(i));
  return names;
}

PlantedInstance MakePlantedInstance(const PlantedSpec& spec,
                                    const std::string& id) {
  spec.Validate();
  RngStream rng(spec.seed);
  PlantedInstance out;
  out.planted = static_cast<std::size_t>(rng.Below(spec.n));

  SquareMatrix u(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < spec.n; ++j) {
      if (i == j) continue;
      const double bonus =
          (i == out.planted || j == out.planted) ? spec.gap : 0.0;
      const double noise = spec.noise_sigma * (2.0 * rng.Uniform() - 1.0);
      u.at(i, j) = spec.base + bonus + noise;
    }
  }

  // Label from the generated grid, not from the plant.
  double best_mean = 0.0;
  for (std::size_t i = 0; i < spec.n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < spec.n; ++j) {
      if (j != i) sum += u.at(i, j);
    }
    const double mean = sum / static_cast<double>(spec.n - 1);
    if (i == 0 || mean > best_mean) {
      best_mean = mean;
      out.true_best = i;
    }
  }

  out.instance.id = id;
  out.instance.candidates = PlaceholderCandidates(spec.n);
  out.instance.utility_matrix = std::move(u);
  return out;
}

Instance MakeRandomInstance(std::size_t n, std::uint64_t seed,
                            const std::string& id) {
  if (n < 1) throw Error(ErrorCode::kConfigError, "random n must be >= 1");
  RngStream rng(seed);
  SquareMatrix u(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) u.at(i, j) = rng.Uniform();
    }
  }
  Instance inst;
  inst.id = id;
  inst.candidates = PlaceholderCandidates(n);
  inst.utility_matrix = std::move(u);
  return inst;
}

}  // namespace ambr
