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
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <thread>

#include "ambr/harness.h"
#include "ambr/metrics.h"

namespace ambr {

using nlohmann::json;

namespace {

[[noreturn]] void ConfigFail(const std::string& what) {
  throw Error(ErrorCode::kConfigError, what);
}

bool IsKnownAlgorithm(std::string_view name) {
  return name == "exact" || name == "nbys" || name == "c2f" || name == "cbp" ||
         name == "ambr" || name == "ambr_replace" || name == "ra" ||
         name == "reward" || name == "doubling";
}

double ParseDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  ConfigFail("algorithm setting '" + key + "' expects a number, got '" +
             value + "'");
}

std::size_t ParseCount(const std::string& key, const std::string& value) {
  const double v = ParseDouble(key, value);
  if (v < 0 || v != std::floor(v)) {
    ConfigFail("algorithm setting '" + key + "' expects a whole number");
  }
  return static_cast<std::size_t>(v);
}

void ApplySetting(AlgorithmSpec& spec, const std::string& key,
                  const std::string& value) {
  if (spec.name == "cbp" && key == "r0") {
    spec.cbp.r0 = ParseCount(key, value);
  } else if (spec.name == "cbp" && key == "alpha") {
    spec.cbp.alpha = ParseDouble(key, value);
  } else if (spec.name == "cbp" && (key == "b" || key == "bootstrap")) {
    spec.cbp.bootstrap = ParseCount(key, value);
  } else if (spec.name == "doubling" && key == "start") {
    spec.doubling_start = ParseDouble(key, value);
  } else {
    ConfigFail("algorithm '" + spec.name + "' has no setting '" + key + "'");
  }
}

void CheckSpec(const AlgorithmSpec& spec) {
  if (spec.name == "cbp") spec.cbp.Validate();
  if (spec.name == "doubling" &&
      !(spec.doubling_start > 0.0 && spec.doubling_start <= 1.0)) {
    ConfigFail("doubling start must lie in (0, 1]");
  }
}

AlgorithmSpec SpecFromJson(const json& j) {
  if (j.is_string()) return AlgorithmSpec::Parse(j.get<std::string>());
  if (!j.is_object() || !j.contains("name") || !j.at("name").is_string()) {
    ConfigFail("field 'algorithms' entries must be strings or objects with "
               "a 'name'");
  }
  std::string label = j.at("name").get<std::string>();
  for (const auto& [key, value] : j.items()) {
    if (key == "name") continue;
    label += ":" + key + "=" +
             (value.is_string() ? value.get<std::string>() : value.dump());
  }
  return AlgorithmSpec::Parse(label);
}

}  // namespace

AlgorithmSpec AlgorithmSpec::Parse(std::string_view text) {
  AlgorithmSpec spec;
  spec.label = std::string(text);
  std::size_t colon = text.find(':');
  spec.name = std::string(text.substr(0, colon));
  if (!IsKnownAlgorithm(spec.name)) {
    ConfigFail("unknown algorithm '" + spec.name + "'");
  }
  while (colon != std::string_view::npos) {
    const std::size_t next = text.find(':', colon + 1);
    const std::string_view item = text.substr(colon + 1, next - colon - 1);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      ConfigFail("algorithm setting '" + std::string(item) +
                 "' must look like key=value");
    }
    ApplySetting(spec, std::string(item.substr(0, eq)),
                 std::string(item.substr(eq + 1)));
    colon = next;
  }
  CheckSpec(spec);
  return spec;
}

std::uint64_t BudgetForFraction(double fraction, std::size_t n) {
  const double pairs = static_cast<double>(n) * static_cast<double>(n - (n > 0));
  return static_cast<std::uint64_t>(std::floor(fraction * pairs));
}

Selection RunAlgorithm(const AlgorithmSpec& algorithm, const Instance& instance,
                       const OracleChoice& oracles, std::uint64_t budget,
                       RngStream& rng) {
  const std::string& name = algorithm.name;
  if (name == "ra") return ReferenceAggregation(instance);

  UtilityOracle oracle = MakeOracle(instance, oracles.utility, budget);
  if (name == "exact") return ExactMbr(oracle);
  if (name == "nbys") return NByS(oracle, budget, rng);
  if (name == "ambr") return Ambr(oracle, budget, rng);
  if (name == "ambr_replace") return AmbrReplace(oracle, budget, rng);
  if (name == "cbp") {
    return ConfidenceBasedPruning(oracle, budget, algorithm.cbp, rng);
  }
  if (name == "c2f") {
    const std::size_t n = instance.size();
    UtilityOracle coarse = MakeOracle(
        instance, oracles.coarse_utility.value_or(oracles.utility),
        static_cast<std::uint64_t>(n) * (n - 1));
    return CoarseToFine(coarse, oracle, budget);
  }
  if (name == "reward") {
    if (!instance.rewards) {
      throw Error(ErrorCode::kMissingRewards,
                  "instance '" + instance.id + "' has no rewards");
    }
    return RewardMbr(oracle, *instance.rewards, budget);
  }
  if (name == "doubling") {
    if (budget == 0) return ExactMbr(oracle);  // only reachable for N = 1
    const auto start = static_cast<std::uint64_t>(
        std::floor(algorithm.doubling_start * static_cast<double>(budget)));
    return DoublingTrick(oracle, std::max<std::uint64_t>(start, 1), budget,
                         rng);
  }
  ConfigFail("unknown algorithm '" + name + "'");
}

double ErrorRate(std::span<const std::size_t> chosen,
                 std::span<const std::size_t> exact) {
  if (chosen.size() != exact.size() || chosen.empty()) {
    throw Error(ErrorCode::kLengthMismatch,
                "error rate needs equal, nonempty index lists");
  }
  std::size_t wrong = 0;
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    if (chosen[k] != exact[k]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(chosen.size());
}

double Regret(std::span<const double> exact_scores, std::size_t chosen) {
  const double best = exact_scores[ArgMax(exact_scores)];
  return std::max(0.0, best - exact_scores[chosen]);
}

void ExperimentConfig::Validate() const {
  if (algorithms.empty()) ConfigFail("field 'algorithms' must not be empty");
  for (const auto& a : algorithms) CheckSpec(a);
  if (budget_fractions.empty()) {
    ConfigFail("field 'budget_fractions' must not be empty");
  }
  for (double f : budget_fractions) {
    if (!(f > 0.0 && f <= 1.0)) {
      ConfigFail("field 'budget_fractions' entries must lie in (0, 1]");
    }
  }
  if (seeds.empty()) ConfigFail("field 'seeds' must not be empty");
  if (!IsKnownUtility(oracles.utility)) {
    ConfigFail("field 'utility': unknown utility '" + oracles.utility + "'");
  }
  if (oracles.coarse_utility && !IsKnownUtility(*oracles.coarse_utility)) {
    ConfigFail("field 'coarse_utility': unknown utility '" +
               *oracles.coarse_utility + "'");
  }
}

ReportFormat FormatForPath(const std::string& path) {
  const std::string ext = ".json";
  return path.size() >= ext.size() &&
                 path.compare(path.size() - ext.size(), ext.size(), ext) == 0
             ? ReportFormat::kJson
             : ReportFormat::kCsv;
}

ExperimentConfig ExperimentConfig::FromJson(const json& j) {
  if (!j.is_object()) ConfigFail("config must be a JSON object");
  ExperimentConfig cfg;
  bool format_given = false;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "algorithms") {
        if (!value.is_array()) ConfigFail("field 'algorithms' must be an array");
        for (const auto& a : value) cfg.algorithms.push_back(SpecFromJson(a));
      } else if (key == "budget_fractions") {
        cfg.budget_fractions = value.get<std::vector<double>>();
      } else if (key == "seeds") {
        cfg.seeds = value.get<std::vector<std::uint64_t>>();
      } else if (key == "utility") {
        cfg.oracles.utility = value.get<std::string>();
      } else if (key == "coarse_utility") {
        if (!value.is_null()) cfg.oracles.coarse_utility = value.get<std::string>();
      } else if (key == "input") {
        cfg.input_path = value.get<std::string>();
      } else if (key == "output") {
        cfg.output_path = value.get<std::string>();
      } else if (key == "format") {
        const auto f = value.get<std::string>();
        if (f != "csv" && f != "json") ConfigFail("field 'format' must be csv or json");
        cfg.format = f == "json" ? ReportFormat::kJson : ReportFormat::kCsv;
        format_given = true;
      } else if (key == "threads") {
        cfg.threads = value.get<std::size_t>();
      } else {
        ConfigFail("unknown config field '" + key + "'");
      }
    } catch (const json::exception& e) {
      ConfigFail("field '" + key + "' has the wrong type: " + e.what());
    }
  }
  if (!format_given) cfg.format = FormatForPath(cfg.output_path);
  cfg.Validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    ConfigFail("config '" + path + "': " + e.what());
  }
  return FromJson(j);
}

std::uint64_t CellSeed(std::uint64_t seed, std::string_view algorithm,
                       std::size_t fraction_index,
                       std::string_view instance_id) {
  std::uint64_t h = Mix64(seed);
  h = HashCombine(h, HashString(algorithm));
  h = HashCombine(h, fraction_index);
  return HashCombine(h, HashString(instance_id));
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg,
                               std::span<const Instance> instances,
                               const CellObserver& observer) {
  cfg.Validate();
  const std::size_t n_alg = cfg.algorithms.size();
  const std::size_t n_frac = cfg.budget_fractions.size();
  const std::size_t n_seed = cfg.seeds.size();
  const std::size_t per_instance = n_alg * n_frac * n_seed;
  auto slot = [&](std::size_t inst, std::size_t a, std::size_t f,
                  std::size_t s) {
    return ((inst * n_alg + a) * n_frac + f) * n_seed + s;
  };

  ExperimentResult result;
  result.cells.resize(instances.size() * per_instance);
  std::vector<std::exception_ptr> failures(instances.size());

  auto run_instance = [&](std::size_t inst) {
    const Instance& instance = instances[inst];
    const std::size_t n = instance.size();
    // Ground truth gets its own ledger; no cell sees its cache.
    UtilityOracle truth_oracle = MakeOracle(
        instance, cfg.oracles.utility, static_cast<std::uint64_t>(n) * (n - 1));
    const std::vector<double> exact_scores = FullPoolMeans(truth_oracle);
    const std::size_t exact = ArgMax(exact_scores);

    for (std::size_t a = 0; a < n_alg; ++a) {
      const AlgorithmSpec& alg = cfg.algorithms[a];
      for (std::size_t f = 0; f < n_frac; ++f) {
        const std::uint64_t budget =
            BudgetForFraction(cfg.budget_fractions[f], n);
        for (std::size_t s = 0; s < n_seed; ++s) {
          RngStream rng(CellSeed(cfg.seeds[s], alg.label, f, instance.id));
          const Selection sel =
              RunAlgorithm(alg, instance, cfg.oracles, budget, rng);
          CellRecord& cell = result.cells[slot(inst, a, f, s)];
          cell = {inst,   a,        f,   s, budget, sel.chosen, exact,
                  sel.evals_used, Regret(exact_scores, sel.chosen)};
          if (observer) observer(cell, sel);
        }
      }
    }
  };

  std::size_t threads = cfg.threads == 0
                            ? std::max(1u, std::thread::hardware_concurrency())
                            : cfg.threads;
  threads = std::min(threads, std::max<std::size_t>(instances.size(), 1));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t inst = next++; inst < instances.size(); inst = next++) {
      try {
        run_instance(inst);
      } catch (...) {
        failures[inst] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  // Aggregation walks cells in a fixed order, so the report does not depend
  // on the thread schedule.
  const double count = static_cast<double>(instances.size());
  for (std::size_t a = 0; a < n_alg; ++a) {
    for (std::size_t f = 0; f < n_frac; ++f) {
      ReportRow agg;
      agg.algorithm = cfg.algorithms[a].label;
      agg.fraction = cfg.budget_fractions[f];
      agg.seed = "all";
      for (std::size_t s = 0; s < n_seed; ++s) {
        ReportRow row;
        row.algorithm = agg.algorithm;
        row.fraction = agg.fraction;
        row.seed = std::to_string(cfg.seeds[s]);
        double wrong = 0.0, regret = 0.0, evals = 0.0;
        double lo = 0.0, hi = 0.0;
        for (std::size_t inst = 0; inst < instances.size(); ++inst) {
          const CellRecord& c = result.cells[slot(inst, a, f, s)];
          const double e = static_cast<double>(c.evals_used);
          wrong += c.chosen != c.exact ? 1.0 : 0.0;
          regret += c.regret;
          evals += e;
          lo = inst == 0 ? e : std::min(lo, e);
          hi = inst == 0 ? e : std::max(hi, e);
        }
        if (count > 0) {
          row.error_rate = wrong / count;
          row.mean_regret = regret / count;
          row.mean_evals = evals / count;
        }
        row.min_evals = lo;
        row.max_evals = hi;

        agg.error_rate += row.error_rate;
        agg.mean_regret += row.mean_regret;
        agg.mean_evals += row.mean_evals;
        if (s == 0) {
          agg.min_evals = row.min_evals;
          agg.max_evals = row.max_evals;
          agg.error_rate_min = agg.error_rate_max = row.error_rate;
          agg.regret_min = agg.regret_max = row.mean_regret;
        } else {
          agg.min_evals = std::min(agg.min_evals, row.min_evals);
          agg.max_evals = std::max(agg.max_evals, row.max_evals);
          agg.error_rate_min = std::min(*agg.error_rate_min, row.error_rate);
          agg.error_rate_max = std::max(*agg.error_rate_max, row.error_rate);
          agg.regret_min = std::min(*agg.regret_min, row.mean_regret);
          agg.regret_max = std::max(*agg.regret_max, row.mean_regret);
        }
        result.report.rows.push_back(std::move(row));
      }
      agg.error_rate /= static_cast<double>(n_seed);
      agg.mean_regret /= static_cast<double>(n_seed);
      agg.mean_evals /= static_cast<double>(n_seed);
      result.report.aggregates.push_back(std::move(agg));
    }
  }
  return result;
}

Report RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  if (cfg.input_path.empty()) ConfigFail("field 'input' is required");
  if (cfg.output_path.empty()) ConfigFail("field 'output' is required");
  const std::vector<Instance> instances = LoadInstances(cfg.input_path);
  Report report = RunExperiment(cfg, instances).report;
  WriteReport(report, cfg.format, cfg.output_path);
  return report;
}

}  // namespace ambr
