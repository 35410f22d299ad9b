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

#include "ambr/harness.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ambr/metrics.h"
#include "ambr/synth.h"
#include "gtest/gtest.h"

namespace ambr {
namespace {

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an ambr::Error";
  return ErrorCode::kIoError;
}

std::vector<Instance> Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseInstances(in, "test");
}

std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "/" + name;
}

std::vector<Instance> PlantedCorpus(std::size_t count, std::size_t n,
                                    std::uint64_t seed) {
  std::vector<Instance> out;
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(MakePlantedInstance({n, 0.05, 0.3, 0.5, seed + k},
                                      "p" + std::to_string(k))
                      .instance);
  }
  return out;
}

ExperimentConfig Config(std::vector<std::string> algorithms,
                        std::vector<double> fractions) {
  ExperimentConfig cfg;
  for (const auto& a : algorithms) cfg.algorithms.push_back(AlgorithmSpec::Parse(a));
  cfg.budget_fractions = std::move(fractions);
  return cfg;
}

// --- loading -------------------------------------------------------------

TEST(LoadInstancesTest, MinimalLine) {
  const auto v = Parse("{\"id\":\"a\",\"candidates\":[\"x\",\"y\"]}\n");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].id, "a");
  EXPECT_EQ(v[0].size(), 2u);
  EXPECT_FALSE(v[0].utility_matrix.has_value());
}

TEST(LoadInstancesTest, AllPayloadsAndBlankLines) {
  const auto v = Parse(
      "\n{\"id\":\"m\",\"candidates\":[\"a\",\"b\"],"
      "\"embeddings\":[[1,0],[0,1]],\"rewards\":[0.5,1],"
      "\"utility_matrix\":[[null,0.25],[0.75,0]]}\n\n");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].embeddings->size(), 2u);
  EXPECT_EQ((*v[0].rewards)[1], 1.0);
  EXPECT_EQ(v[0].utility_matrix->at(1, 0), 0.75);
}

TEST(LoadInstancesTest, SchemaErrorsNameTheField) {
  auto message = [](const std::string& text) -> std::string {
    try {
      Parse(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kSchemaError);
      return e.what();
    }
    ADD_FAILURE() << "no error for " << text;
    return "";
  };
  EXPECT_NE(message("{\"id\":\"a\",\"candidates\":[\"x\",\"y\"],"
                    "\"embeddings\":[[1,2]]}")
                .find("embeddings"),
            std::string::npos);
  EXPECT_NE(message("{\"id\":\"a\",\"candidates\":[\"x\",\"y\"],"
                    "\"utility_matrix\":[[0,1,2],[1,0,2]]}")
                .find("utility_matrix"),
            std::string::npos);
  EXPECT_NE(message("{\"id\":\"a\",\"candidates\":[\"x\",\"y\"],"
                    "\"rewards\":[1]}")
                .find("rewards"),
            std::string::npos);
  EXPECT_NE(message("{\"candidates\":[\"x\"]}").find("id"), std::string::npos);
  EXPECT_NE(message("{\"id\":\"a\",\"candidates\":[1]}").find("candidates"),
            std::string::npos);
}

TEST(LoadInstancesTest, ParseErrorCarriesLineNumber) {
  try {
    Parse("{\"id\":\"a\",\"candidates\":[\"x\"]}\n{oops\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("test:2"), std::string::npos);
  }
}

TEST(LoadInstancesTest, RoundTripThroughWriter) {
  std::vector<Instance> v = PlantedCorpus(3, 5, 1);
  v[1].rewards = std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5};
  std::ostringstream out;
  WriteInstances(out, v);
  const auto back = Parse(out.str());
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(back[k].id, v[k].id);
    EXPECT_EQ(*back[k].utility_matrix, *v[k].utility_matrix);
  }
  EXPECT_EQ(*back[1].rewards, *v[1].rewards);
}

TEST(LoadInstancesTest, MissingFileIsIoError) {
  EXPECT_EQ(CodeOf([] { LoadInstances("/nonexistent/dir/x.jsonl"); }),
            ErrorCode::kIoError);
}

// --- scores --------------------------------------------------------------

TEST(ErrorRateTest, Examples) {
  const std::vector<std::size_t> a = {0, 1, 2, 3}, b = {0, 1, 2, 0},
                                  c = {1, 2, 3, 0};
  EXPECT_EQ(ErrorRate(a, a), 0.0);
  EXPECT_EQ(ErrorRate(a, c), 1.0);
  EXPECT_EQ(ErrorRate(a, b), 0.25);
  const std::vector<std::size_t> shorter = {0};
  EXPECT_EQ(CodeOf([&] { ErrorRate(a, shorter); }), ErrorCode::kLengthMismatch);
  const std::vector<std::size_t> empty;
  EXPECT_EQ(CodeOf([&] { ErrorRate(empty, empty); }),
            ErrorCode::kLengthMismatch);
}

TEST(RegretTest, Examples) {
  const std::vector<double> scores = {0.85, 0.65, 0.6};
  EXPECT_EQ(Regret(scores, 0), 0.0);
  EXPECT_NEAR(Regret(scores, 1), 0.2, 1e-15);
  const std::vector<double> flat(4, 0.3);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(Regret(flat, k), 0.0);
}

TEST(BudgetForFractionTest, FloorOfPairs) {
  EXPECT_EQ(BudgetForFraction(1.0 / 32, 64), 126u);
  EXPECT_EQ(BudgetForFraction(0.5, 64), 2016u);
  EXPECT_EQ(BudgetForFraction(0.3, 10), 27u);
  EXPECT_EQ(BudgetForFraction(1.0, 1), 0u);
}

// --- algorithm specs -----------------------------------------------------

TEST(AlgorithmSpecTest, ParsesSettings) {
  const AlgorithmSpec cbp = AlgorithmSpec::Parse("cbp:r0=4:alpha=0.9:b=200");
  EXPECT_EQ(cbp.name, "cbp");
  EXPECT_EQ(cbp.label, "cbp:r0=4:alpha=0.9:b=200");
  EXPECT_EQ(cbp.cbp.r0, 4u);
  EXPECT_EQ(cbp.cbp.alpha, 0.9);
  EXPECT_EQ(cbp.cbp.bootstrap, 200u);
  EXPECT_EQ(AlgorithmSpec::Parse("doubling:start=0.25").doubling_start, 0.25);
  EXPECT_EQ(AlgorithmSpec::Parse("ambr").label, "ambr");
}

TEST(AlgorithmSpecTest, RejectsUnknown) {
  EXPECT_EQ(CodeOf([] { AlgorithmSpec::Parse("beam"); }), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([] { AlgorithmSpec::Parse("ambr:r0=2"); }),
            ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([] { AlgorithmSpec::Parse("cbp:alpha=x"); }),
            ErrorCode::kConfigError);
}

// --- experiments ---------------------------------------------------------

TEST(RunExperimentTest, ExactHasNoErrors) {
  const auto corpus = PlantedCorpus(6, 10, 3);
  const auto result = RunExperiment(Config({"exact"}, {1.0}), corpus);
  ASSERT_EQ(result.report.rows.size(), 5u);
  for (const auto& row : result.report.rows) {
    EXPECT_EQ(row.error_rate, 0.0);
    EXPECT_EQ(row.mean_regret, 0.0);
    EXPECT_EQ(row.max_evals, 90.0);
  }
}

TEST(RunExperimentTest, FullBudgetAmbrHasNoErrors) {
  // Fraction 1 caps T at N (N - 1) < N N ceil(log2 N), so the full-budget
  // case goes through RunAlgorithm directly.
  const auto corpus = PlantedCorpus(10, 12, 40);
  for (const char* name : {"ambr", "ambr_replace"}) {
    const AlgorithmSpec spec = AlgorithmSpec::Parse(name);
    for (const Instance& inst : corpus) {
      UtilityOracle exact = MatrixOracle(inst, 12 * 11);
      RngStream rng(5);
      const Selection sel = RunAlgorithm(spec, inst, {}, 12 * 12 * 4, rng);
      EXPECT_EQ(sel.chosen, ExactMbr(exact).chosen);
    }
  }
  const auto result = RunExperiment(Config({"ambr"}, {1.0}), corpus);
  for (const auto& cell : result.cells) EXPECT_EQ(cell.budget, 132u);
  for (const auto& row : result.report.rows) EXPECT_LE(row.max_evals, 132.0);
}

TEST(RunExperimentTest, RowsAndAggregatesAreConsistent) {
  const auto corpus = PlantedCorpus(8, 64, 11);
  ExperimentConfig cfg = Config({"ambr", "nbys", "cbp:b=50"}, {1.0 / 32, 0.25});
  cfg.seeds = {0, 1, 2};
  const auto result = RunExperiment(cfg, corpus);
  const Report& r = result.report;
  ASSERT_EQ(r.rows.size(), 3u * 2 * 3);
  ASSERT_EQ(r.aggregates.size(), 3u * 2);
  EXPECT_EQ(result.cells.size(), 8u * 3 * 2 * 3);
  for (const auto& agg : r.aggregates) {
    EXPECT_EQ(agg.seed, "all");
    double sum = 0;
    int count = 0;
    for (const auto& row : r.rows) {
      if (row.algorithm != agg.algorithm || row.fraction != agg.fraction) continue;
      EXPECT_GE(row.error_rate, *agg.error_rate_min);
      EXPECT_LE(row.error_rate, *agg.error_rate_max);
      EXPECT_GE(row.mean_regret, *agg.regret_min);
      EXPECT_LE(row.mean_regret, *agg.regret_max);
      EXPECT_GE(row.min_evals, agg.min_evals);
      EXPECT_LE(row.max_evals, agg.max_evals);
      EXPECT_GE(row.error_rate, 0.0);
      EXPECT_LE(row.error_rate, 1.0);
      EXPECT_GE(row.mean_regret, 0.0);
      EXPECT_LE(row.mean_evals, std::floor(agg.fraction * 64 * 63));
      sum += row.error_rate;
      ++count;
    }
    EXPECT_EQ(count, 3);
    EXPECT_NEAR(agg.error_rate, sum / count, 1e-12);
  }
  for (const auto& cell : result.cells) {
    EXPECT_LE(cell.evals_used, cell.budget);
    EXPECT_GE(cell.regret, 0.0);
  }
}

TEST(RunExperimentTest, DeterministicAcrossThreadCounts) {
  const auto corpus = PlantedCorpus(6, 16, 20);
  ExperimentConfig cfg = Config({"ambr", "cbp:b=30", "doubling"}, {0.125, 0.5});
  const std::string one = ReportToCsv(RunExperiment(cfg, corpus).report);
  EXPECT_EQ(one, ReportToCsv(RunExperiment(cfg, corpus).report));
  cfg.threads = 3;
  EXPECT_EQ(one, ReportToCsv(RunExperiment(cfg, corpus).report));
}

TEST(RunExperimentTest, CellSeedsDiffer) {
  const auto a = CellSeed(0, "ambr", 0, "x");
  EXPECT_EQ(a, CellSeed(0, "ambr", 0, "x"));
  EXPECT_NE(a, CellSeed(1, "ambr", 0, "x"));
  EXPECT_NE(a, CellSeed(0, "nbys", 0, "x"));
  EXPECT_NE(a, CellSeed(0, "ambr", 1, "x"));
  EXPECT_NE(a, CellSeed(0, "ambr", 0, "y"));
}

TEST(RunExperimentTest, PropagatesOracleErrors) {
  const auto corpus = Parse("{\"id\":\"t\",\"candidates\":[\"a\",\"b\",\"c\"]}");
  EXPECT_EQ(CodeOf([&] { RunExperiment(Config({"ambr"}, {0.5}), corpus); }),
            ErrorCode::kMissingMatrix);
  ExperimentConfig cfg = Config({"ambr"}, {0.5});
  cfg.oracles.utility = "unigram_f1";
  EXPECT_NO_THROW(RunExperiment(cfg, corpus));
}

TEST(ExperimentConfigTest, ValidationErrors) {
  EXPECT_EQ(CodeOf([] { Config({}, {0.5}).Validate(); }), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([] { Config({"ambr"}, {0.0}).Validate(); }),
            ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([] { Config({"ambr"}, {1.5}).Validate(); }),
            ErrorCode::kConfigError);
  ExperimentConfig no_seeds = Config({"ambr"}, {0.5});
  no_seeds.seeds.clear();
  EXPECT_EQ(CodeOf([&] { no_seeds.Validate(); }), ErrorCode::kConfigError);
  ExperimentConfig bad_utility = Config({"ambr"}, {0.5});
  bad_utility.oracles.utility = "comet";
  EXPECT_EQ(CodeOf([&] { bad_utility.Validate(); }), ErrorCode::kConfigError);
}

TEST(ExperimentConfigTest, FromJson) {
  const auto cfg = ExperimentConfig::FromJson(nlohmann::json::parse(R"({
      "algorithms": ["ambr", {"name": "cbp", "alpha": 0.9}],
      "budget_fractions": [0.25], "seeds": [7], "utility": "cosine",
      "input": "in.jsonl", "output": "out.json"})"));
  ASSERT_EQ(cfg.algorithms.size(), 2u);
  EXPECT_EQ(cfg.algorithms[1].cbp.alpha, 0.9);
  EXPECT_EQ(cfg.seeds, std::vector<std::uint64_t>{7});
  EXPECT_EQ(cfg.oracles.utility, "cosine");
  EXPECT_EQ(cfg.format, ReportFormat::kJson);
  EXPECT_EQ(CodeOf([] {
              ExperimentConfig::FromJson(
                  nlohmann::json::parse(R"({"algorithms":["ambr"],"bogus":1})"));
            }),
            ErrorCode::kConfigError);
}

// --- reports -------------------------------------------------------------

constexpr char kHeader[] =
    "algorithm,fraction,seed,error_rate,mean_regret,mean_evals,min_evals,"
    "max_evals\r\n";

TEST(ReportTest, EmptyReportIsHeaderOnly) {
  EXPECT_EQ(ReportToCsv(Report{}), kHeader);
}

TEST(ReportTest, OneRowHasEightColumns) {
  Report r;
  r.rows.push_back({"cbp:alpha=0.9", 0.25, "3", 0.5, 0.125, 10, 8, 12});
  const std::string csv = ReportToCsv(r);
  EXPECT_EQ(csv, std::string(kHeader) +
                     "cbp:alpha=0.9,0.25,3,0.5,0.125,10,8,12\r\n");
  const auto parsed = ParseReportCsv(csv);
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_TRUE(parsed[0].SameColumns(r.rows[0]));
}

TEST(ReportTest, QuotesFieldsThatNeedIt) {
  Report r;
  r.rows.push_back({"odd,\"name\"", 0.5, "0", 0, 0, 1, 1, 1});
  const std::string csv = ReportToCsv(r);
  EXPECT_NE(csv.find("\"odd,\"\"name\"\"\""), std::string::npos);
  EXPECT_EQ(ParseReportCsv(csv)[0].algorithm, "odd,\"name\"");
}

TEST(ReportTest, JsonCsvRoundTrip) {
  const auto corpus = PlantedCorpus(4, 64, 5);
  const Report r =
      RunExperiment(Config({"ambr", "nbys"}, {1.0 / 32, 0.5}), corpus).report;
  const Report via_json = ReportFromJson(ReportToJson(r));
  const auto rows = ParseReportCsv(ReportToCsv(via_json));
  ASSERT_EQ(rows.size(), r.rows.size() + r.aggregates.size());
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    EXPECT_TRUE(rows[k].SameColumns(r.rows[k])) << k;
  }
  for (std::size_t k = 0; k < r.aggregates.size(); ++k) {
    EXPECT_TRUE(rows[r.rows.size() + k].SameColumns(r.aggregates[k]));
    EXPECT_EQ(via_json.aggregates[k].error_rate_max, r.aggregates[k].error_rate_max);
  }
}

TEST(ReportTest, WriteReportErrors) {
  EXPECT_EQ(CodeOf([] {
              WriteReport(Report{}, ReportFormat::kCsv, "/nonexistent/dir/r.csv");
            }),
            ErrorCode::kIoError);
  const std::string path = TempPath("report.csv");
  WriteReport(Report{}, ReportFormat::kCsv, path);
  std::ifstream in(path, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(text, kHeader);
  std::remove(path.c_str());
  EXPECT_EQ(FormatForPath("a.json"), ReportFormat::kJson);
  EXPECT_EQ(FormatForPath("a.csv"), ReportFormat::kCsv);
}

TEST(ReportTest, ParseReportCsvRejectsGarbage) {
  EXPECT_EQ(CodeOf([] { ParseReportCsv("nope\r\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              ParseReportCsv(std::string(kHeader) + "a,0.5,0,x,0,0,0,0\r\n");
            }),
            ErrorCode::kParseError);
}

TEST(RunExperimentFileTest, LoadsAndWrites) {
  const std::string in_path = TempPath("corpus.jsonl");
  const std::string out_path = TempPath("out.json");
  {
    std::ofstream out(in_path);
    WriteInstances(out, PlantedCorpus(3, 8, 2));
  }
  ExperimentConfig cfg = Config({"ambr"}, {0.5});
  cfg.input_path = in_path;
  cfg.output_path = out_path;
  cfg.format = ReportFormat::kJson;
  const Report r = RunExperiment(cfg);
  std::ifstream in(out_path);
  const Report back = ReportFromJson(nlohmann::json::parse(in));
  ASSERT_EQ(back.rows.size(), r.rows.size());
  EXPECT_TRUE(back.rows[0].SameColumns(r.rows[0]));
  std::remove(in_path.c_str());
  std::remove(out_path.c_str());
}

}  // namespace
}  // namespace ambr
