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

#ifndef AMBR_HARNESS_H_
#define AMBR_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ambr/algorithms.h"
#include "ambr/core.h"
#include "json.hpp"

namespace ambr {

// ---------------------------------------------------------------------------
// Instances (JSONL, one object per line)
// ---------------------------------------------------------------------------

// Throws kParseError (with line number) or kSchemaError (naming the field).
std::vector<Instance> ParseInstances(std::istream& in,
                                     const std::string& source = "<stream>");
// Adds kIoError for unreadable paths.
std::vector<Instance> LoadInstances(const std::string& path);

nlohmann::json InstanceToJson(const Instance& instance);
Instance InstanceFromJson(const nlohmann::json& j);
void WriteInstances(std::ostream& out, std::span<const Instance> instances);

// ---------------------------------------------------------------------------
// Algorithms by name
// ---------------------------------------------------------------------------

// Parsed from "name" or "name:key=value:key=value". Known names: exact, nbys,
// c2f, cbp (r0, alpha, b), ambr, ambr_replace, ra, reward, doubling (start:
// T0 = max(1, floor(start * T))).
struct AlgorithmSpec {
  std::string name;
  std::string label;
  CbpConfig cbp;
  double doubling_start = 0.125;

  static AlgorithmSpec Parse(std::string_view text);
};

struct OracleChoice {
  std::string utility = "matrix";
  std::optional<std::string> coarse_utility;
};

// Runs one algorithm on a fresh oracle whose ledger holds `budget`.
Selection RunAlgorithm(const AlgorithmSpec& algorithm, const Instance& instance,
                       const OracleChoice& oracles, std::uint64_t budget,
                       RngStream& rng);

// floor(fraction * N (N - 1)).
std::uint64_t BudgetForFraction(double fraction, std::size_t n);

// ---------------------------------------------------------------------------
// Scores
// ---------------------------------------------------------------------------

// Share of positions where chosen differs from exact. Throws kLengthMismatch.
double ErrorRate(std::span<const std::size_t> chosen,
                 std::span<const std::size_t> exact);

// max(exact_scores) - exact_scores[chosen].
double Regret(std::span<const double> exact_scores, std::size_t chosen);

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

enum class ReportFormat { kCsv, kJson };

struct ExperimentConfig {
  std::vector<AlgorithmSpec> algorithms;
  std::vector<double> budget_fractions = {1.0 / 32, 1.0 / 16, 1.0 / 8,
                                          1.0 / 4, 1.0 / 2};
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  OracleChoice oracles;
  std::string input_path;
  std::string output_path;
  ReportFormat format = ReportFormat::kCsv;
  std::size_t threads = 1;

  // Throws kConfigError naming the field.
  void Validate() const;
  static ExperimentConfig FromJson(const nlohmann::json& j);
  static ExperimentConfig Load(const std::string& path);
};

// Format implied by the file extension (".json" or anything else).
ReportFormat FormatForPath(const std::string& path);

// Seed of one (algorithm, fraction, instance) cell for a configured seed.
std::uint64_t CellSeed(std::uint64_t seed, std::string_view algorithm,
                       std::size_t fraction_index, std::string_view instance_id);

struct ReportRow {
  std::string algorithm;
  double fraction = 0.0;
  std::string seed;  // configured seed, or "all" for aggregates
  double error_rate = 0.0;
  double mean_regret = 0.0;
  double mean_evals = 0.0;
  double min_evals = 0.0;
  double max_evals = 0.0;
  // Aggregate rows only (JSON): spread over seeds.
  std::optional<double> error_rate_min, error_rate_max;
  std::optional<double> regret_min, regret_max;

  // Compares the eight CSV columns.
  bool SameColumns(const ReportRow& other) const;
};

struct Report {
  std::vector<ReportRow> rows;        // per (algorithm, fraction, seed)
  std::vector<ReportRow> aggregates;  // per (algorithm, fraction), seed "all"
};

struct CellRecord {
  std::size_t instance = 0;
  std::size_t algorithm = 0;
  std::size_t fraction = 0;
  std::size_t seed = 0;
  std::uint64_t budget = 0;
  std::size_t chosen = 0;
  std::size_t exact = 0;
  std::uint64_t evals_used = 0;
  double regret = 0.0;
};

struct ExperimentResult {
  Report report;
  std::vector<CellRecord> cells;
};

// Called from worker threads once per finished cell.
using CellObserver =
    std::function<void(const CellRecord& cell, const Selection& selection)>;

ExperimentResult RunExperiment(const ExperimentConfig& cfg,
                               std::span<const Instance> instances,
                               const CellObserver& observer = {});

// Loads cfg.input_path, runs, and writes cfg.output_path.
Report RunExperiment(const ExperimentConfig& cfg);

std::string ReportToCsv(const Report& report);
nlohmann::json ReportToJson(const Report& report);
Report ReportFromJson(const nlohmann::json& j);
// Every data line, per-seed and aggregate alike. Throws kParseError.
std::vector<ReportRow> ParseReportCsv(std::string_view text);

// Throws kIoError.
void WriteReport(const Report& report, ReportFormat format,
                 const std::string& path);

}  // namespace ambr

#endif  // AMBR_HARNESS_H_
