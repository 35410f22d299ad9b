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

// Command-line front end: run experiment grids, decode instances, generate
// planted corpora and convert reports.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ambr/algorithms.h"
#include "ambr/harness.h"
#include "ambr/metrics.h"
#include "ambr/synth.h"

namespace {

using namespace ambr;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

int ExitCodeFor(const Error& e) {
  return e.code() == ErrorCode::kIoError ? kExitIo : kExitConfig;
}

std::string FormatDouble(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

struct RunFlags {
  std::string config;
  std::vector<std::string> algorithms;
  std::vector<double> fractions;
  std::vector<std::uint64_t> seeds;
  std::string utility;
  std::string coarse_utility;
  std::string input;
  std::string output;
  std::string format;
  std::size_t threads = 1;
};

int CmdRun(const RunFlags& flags, const CLI::App& sub) {
  ExperimentConfig cfg;
  if (!flags.config.empty()) cfg = ExperimentConfig::Load(flags.config);
  if (sub.count("--algorithms")) {
    cfg.algorithms.clear();
    for (const auto& a : flags.algorithms) {
      cfg.algorithms.push_back(AlgorithmSpec::Parse(a));
    }
  }
  if (sub.count("--fractions")) cfg.budget_fractions = flags.fractions;
  if (sub.count("--seeds")) cfg.seeds = flags.seeds;
  if (sub.count("--utility")) cfg.oracles.utility = flags.utility;
  if (sub.count("--coarse-utility")) {
    cfg.oracles.coarse_utility = flags.coarse_utility;
  }
  if (sub.count("--input")) cfg.input_path = flags.input;
  if (sub.count("--output")) {
    cfg.output_path = flags.output;
    cfg.format = FormatForPath(cfg.output_path);
  }
  if (sub.count("--format")) {
    cfg.format = flags.format == "json" ? ReportFormat::kJson : ReportFormat::kCsv;
  }
  if (sub.count("--threads")) cfg.threads = flags.threads;

  const Report report = RunExperiment(cfg);
  for (const auto& row : report.aggregates) {
    std::cout << row.algorithm << " fraction=" << FormatDouble(row.fraction)
              << " error_rate=" << FormatDouble(row.error_rate) << " ["
              << FormatDouble(*row.error_rate_min) << ", "
              << FormatDouble(*row.error_rate_max) << "]"
              << " mean_regret=" << FormatDouble(row.mean_regret)
              << " mean_evals=" << FormatDouble(row.mean_evals) << std::endl;
  }
  return kExitOk;
}

struct DecodeFlags {
  std::string input;
  std::string algorithm;
  std::uint64_t budget = 0;
  double fraction = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t cap = 0;
  std::string utility = "matrix";
  std::string coarse_utility;
};

int CmdDecode(const DecodeFlags& flags, const CLI::App& sub) {
  AlgorithmSpec spec = AlgorithmSpec::Parse(flags.algorithm);
  if (!IsKnownUtility(flags.utility)) {
    throw Error(ErrorCode::kConfigError,
                "unknown utility '" + flags.utility + "'");
  }
  if (sub.count("--fraction") && !(flags.fraction > 0.0 && flags.fraction <= 1.0)) {
    throw Error(ErrorCode::kConfigError, "--fraction must lie in (0, 1]");
  }
  OracleChoice oracles;
  oracles.utility = flags.utility;
  if (!flags.coarse_utility.empty()) oracles.coarse_utility = flags.coarse_utility;

  const std::vector<Instance> instances = LoadInstances(flags.input);
  for (const Instance& inst : instances) {
    const std::size_t n = inst.size();
    const std::uint64_t budget = sub.count("--budget")
                                     ? flags.budget
                                     : BudgetForFraction(flags.fraction, n);
    RngStream rng(CellSeed(flags.seed, spec.label, 0, inst.id));
    Selection sel;
    if (spec.name == "doubling" && n > 1) {
      const std::uint64_t cap =
          sub.count("--cap") ? flags.cap : static_cast<std::uint64_t>(n) * (n - 1);
      UtilityOracle oracle = MakeOracle(inst, oracles.utility, cap);
      sel = DoublingTrick(oracle, budget, cap, rng);
    } else {
      sel = RunAlgorithm(spec, inst, oracles, budget, rng);
    }
    std::cout << inst.id << '\t' << sel.chosen << '\t'
              << inst.candidates[sel.chosen] << '\t' << sel.evals_used;
    if (spec.name == "doubling") {
      std::cout << '\t' << (sel.converged ? "converged" : "unconverged");
    }
    std::cout << std::endl;
  }
  return kExitOk;
}

struct SynthFlags {
  std::size_t n = 16;
  std::size_t count = 1;
  double gap = 0.1;
  double noise = 0.0;
  double base = 0.5;
  std::uint64_t seed = 0;
  std::string output;
  std::string labels;
};

int CmdSynth(const SynthFlags& flags) {
  std::vector<Instance> instances;
  nlohmann::ordered_json labels = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < flags.count; ++k) {
    PlantedSpec spec;
    spec.n = flags.n;
    spec.gap = flags.gap;
    spec.noise_sigma = flags.noise;
    spec.base = flags.base;
    spec.seed = HashCombine(flags.seed, k);
    PlantedInstance planted =
        MakePlantedInstance(spec, "synth-" + std::to_string(k));
    labels[planted.instance.id] = planted.true_best;
    instances.push_back(std::move(planted.instance));
  }

  std::ofstream out(flags.output, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + flags.output + "'");
  WriteInstances(out, instances);
  const std::string labels_path =
      flags.labels.empty() ? flags.output + ".labels.json" : flags.labels;
  std::ofstream lab(labels_path, std::ios::binary | std::ios::trunc);
  if (!lab) throw Error(ErrorCode::kIoError, "cannot write '" + labels_path + "'");
  lab << labels.dump(2) << '\n';
  if (!out || !lab) throw Error(ErrorCode::kIoError, "failed writing synth output");
  std::cout << "wrote " << instances.size() << " instances to " << flags.output
            << " and labels to " << labels_path << std::endl;
  return kExitOk;
}

int CmdReport(const std::string& input, const std::string& output) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + input + "'");
  std::stringstream buf;
  buf << in.rdbuf();

  Report report;
  if (FormatForPath(input) == ReportFormat::kJson) {
    try {
      report = ReportFromJson(nlohmann::json::parse(buf.str()));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParseError, input + ": " + e.what());
    }
  } else {
    for (auto& row : ParseReportCsv(buf.str())) {
      (row.seed == "all" ? report.aggregates : report.rows)
          .push_back(std::move(row));
    }
  }
  WriteReport(report, FormatForPath(output), output);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted minimum Bayes-risk decoding"};
  app.require_subcommand(1);

  RunFlags run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment grid");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)");
  run_cmd->add_option("--algorithms", run.algorithms, "Comma-separated algorithms")
      ->delimiter(',');
  run_cmd->add_option("--fractions", run.fractions, "Budget fractions of N(N-1)")
      ->delimiter(',');
  run_cmd->add_option("--seeds", run.seeds, "Seeds")->delimiter(',');
  run_cmd->add_option("--utility", run.utility, "Utility oracle");
  run_cmd->add_option("--coarse-utility", run.coarse_utility,
                      "Coarse utility for c2f");
  run_cmd->add_option("--input", run.input, "Instances (JSONL)");
  run_cmd->add_option("--output", run.output, "Report path (.csv or .json)");
  run_cmd->add_option("--format", run.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");

  DecodeFlags decode;
  CLI::App* decode_cmd = app.add_subcommand("decode", "Decode instances");
  decode_cmd->add_option("--input", decode.input, "Instances (JSONL)")->required();
  decode_cmd->add_option("--algorithm", decode.algorithm, "Algorithm")->required();
  auto* budget_opt =
      decode_cmd->add_option("--budget", decode.budget, "Absolute budget T");
  decode_cmd->add_option("--fraction", decode.fraction, "Budget as a fraction of N(N-1)")
      ->excludes(budget_opt);
  decode_cmd->add_option("--seed", decode.seed, "Seed");
  decode_cmd->add_option("--cap", decode.cap, "Budget cap for doubling");
  decode_cmd->add_option("--utility", decode.utility, "Utility oracle");
  decode_cmd->add_option("--coarse-utility", decode.coarse_utility,
                         "Coarse utility for c2f");

  SynthFlags synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate planted instances");
  synth_cmd->add_option("--n", synth.n, "Pool size")->required();
  synth_cmd->add_option("--count", synth.count, "Number of instances")->required();
  synth_cmd->add_option("--gap", synth.gap, "Utility bonus of the planted index");
  synth_cmd->add_option("--noise", synth.noise, "Uniform noise half-width");
  synth_cmd->add_option("--base", synth.base, "Base utility");
  synth_cmd->add_option("--seed", synth.seed, "Seed");
  synth_cmd->add_option("--output", synth.output, "Instances (JSONL)")->required();
  synth_cmd->add_option("--labels", synth.labels, "Labels file (JSON)");

  std::string report_in, report_out;
  CLI::App* report_cmd = app.add_subcommand("report", "Convert a report");
  report_cmd->add_option("--input", report_in, "Report (.json or .csv)")->required();
  report_cmd->add_option("--output", report_out, "Report (.json or .csv)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run_cmd) return CmdRun(run, *run_cmd);
    if (*decode_cmd) return CmdDecode(decode, *decode_cmd);
    if (*synth_cmd) return CmdSynth(synth);
    if (*report_cmd) return CmdReport(report_in, report_out);
  } catch (const Error& e) {
    std::cerr << "error: " << ErrorCodeName(e.code()) << ": " << e.what()
              << std::endl;
    return ExitCodeFor(e);
  }
  return kExitConfig;
}
