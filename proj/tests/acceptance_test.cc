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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "ambr/algorithms.h"
#include "ambr/harness.h"
#include "ambr/metrics.h"
#include "ambr/synth.h"
#include "brute_force.h"

namespace ambr {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

std::uint64_t Pairs(std::size_t n) { return static_cast<std::uint64_t>(n) * (n - 1); }

std::vector<Instance> PlantedCorpus(std::size_t count, std::size_t n, double gap,
                                    double noise, std::uint64_t seed_base) {
  std::vector<Instance> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(MakePlantedInstance({n, gap, noise, 0.5, seed_base + k},
                                      "inst-" + std::to_string(k))
                      .instance);
  }
  return out;
}

Outcome BruteForceEquivalence() {
  std::size_t agree = 0;
  const std::size_t total = 500;
  for (std::size_t k = 0; k < total; ++k) {
    const std::size_t n = 2 + k % 15;
    const Instance inst = MakeRandomInstance(n, 10000 + k);
    UtilityOracle oracle = MatrixOracle(inst, Pairs(n));
    agree += ExactMbr(oracle).chosen == testing::BruteBest(*inst.utility_matrix);
  }
  return {agree == total, Fmt("%zu/%zu instances agree", agree, total)};
}

Outcome FullBudgetExactness() {
  std::size_t agree = 0, total = 0;
  const std::size_t sizes[] = {8, 16, 32};
  for (std::size_t k = 0; k < 200; ++k) {
    const std::size_t n = sizes[k % 3];
    const auto planted = MakePlantedInstance({n, 0.05, 0.3, 0.5, 20000 + k});
    UtilityOracle exact_oracle = MatrixOracle(planted.instance, Pairs(n));
    const std::size_t exact = ExactMbr(exact_oracle).chosen;
    const std::uint64_t budget = static_cast<std::uint64_t>(n) * n * CeilLog2(n);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      for (auto* algo : {&Ambr, &AmbrReplace}) {
        UtilityOracle oracle = MatrixOracle(planted.instance, Pairs(n));
        RngStream rng(HashCombine(seed, k));
        agree += (*algo)(oracle, budget, rng).chosen == exact;
        ++total;
      }
    }
  }
  return {agree == total, Fmt("%zu/%zu runs match exact", agree, total)};
}

Outcome BudgetCompliance() {
  // Exact and reward-weighted MBR are unbudgeted; they refuse any T below the
  // full pass, so the budgeted selectors make up the grid.
  ExperimentConfig cfg;
  for (const char* a :
       {"nbys", "c2f", "cbp", "ambr", "ambr_replace", "ra", "doubling"}) {
    cfg.algorithms.push_back(AlgorithmSpec::Parse(a));
  }
  auto corpus = PlantedCorpus(200, 64, 0.12, 0.3, 30000);
  // Reference aggregation reads embeddings; every other selector reads the
  // matrix.
  RngStream rng(30000);
  for (Instance& inst : corpus) {
    std::vector<std::vector<double>> vectors(64, std::vector<double>(8));
    for (auto& v : vectors) {
      for (auto& x : v) x = 2.0 * rng.Uniform() - 1.0;
    }
    inst.embeddings = std::move(vectors);
  }
  const ExperimentResult result = RunExperiment(cfg, corpus);
  std::size_t ok = 0;
  for (const CellRecord& cell : result.cells) {
    const std::uint64_t limit =
        BudgetForFraction(cfg.budget_fractions[cell.fraction], 64);
    ok += cell.budget == limit && cell.evals_used <= limit;
  }
  const std::size_t expected = 7 * 5 * 5 * 200;
  return {ok == result.cells.size() && ok == expected,
          Fmt("%zu/%zu runs within floor(f N(N-1))", ok, expected)};
}

Outcome HalvingShape() {
  RngStream meta(40000);
  std::size_t good = 0, checked_rounds = 0;
  const std::size_t total = 1000;
  for (std::size_t k = 0; k < total; ++k) {
    const std::size_t n = 2 + meta.Below(127);
    const std::uint64_t full = static_cast<std::uint64_t>(n) * n * CeilLog2(n);
    const std::uint64_t budget = 1 + meta.Below(full);
    const Instance inst = MakeRandomInstance(n, 41000 + k);
    UtilityOracle oracle = MatrixOracle(inst, Pairs(n));
    RngStream rng(k);
    const Selection sel = Ambr(oracle, budget, rng);
    bool ok = sel.evals_used <= budget;
    for (std::size_t i = 0; i + 1 < sel.trace.size(); ++i) {
      const auto& cur = sel.trace[i];
      const auto& next = sel.trace[i + 1];
      ok = ok && next.candidates.size() == (cur.candidates.size() + 1) / 2 &&
           next.target >= cur.target;
      ++checked_rounds;
    }
    good += ok;
  }
  return {good == total, Fmt("%zu/%zu traces (%zu round transitions)", good,
                             total, checked_rounds)};
}

Outcome IncumbentSurvival() {
  ExperimentConfig cfg;
  for (int r0 : {1, 2, 4, 8}) {
    for (const char* alpha : {"0.8", "0.9", "0.99"}) {
      cfg.algorithms.push_back(AlgorithmSpec::Parse(
          "cbp:r0=" + std::to_string(r0) + ":alpha=" + alpha));
    }
  }
  cfg.budget_fractions = {1.0 / 8, 1.0 / 2};
  cfg.seeds = {0, 1, 2};
  const auto corpus = PlantedCorpus(12, 64, 0.12, 0.3, 50000);
  std::mutex mu;
  std::size_t iterations = 0, survived = 0;
  RunExperiment(cfg, corpus, [&](const CellRecord&, const Selection& sel) {
    std::lock_guard<std::mutex> lock(mu);
    for (const IterationRecord& rec : sel.trace) {
      if (rec.win_ratios.empty() || !rec.incumbent) continue;
      ++iterations;
      for (std::size_t s : rec.survivors) survived += s == *rec.incumbent;
    }
  });
  return {iterations >= 1000 && survived == iterations,
          Fmt("%zu/%zu pruning iterations kept the incumbent", survived,
              iterations)};
}

Outcome TrendReproduction() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.algorithms = {AlgorithmSpec::Parse("ambr"), AlgorithmSpec::Parse("nbys")};
  const auto corpus = PlantedCorpus(200, 64, 0.12, 0.3, 60000);
  const Report report = RunExperiment(cfg, corpus).report;
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  std::vector<double> ambr, nbys;
  for (const ReportRow& row : report.aggregates) {
    (row.algorithm == "ambr" ? ambr : nbys).push_back(row.error_rate);
  }
  std::size_t inversions = 0;
  bool small = true;
  for (std::size_t k = 0; k + 1 < ambr.size(); ++k) {
    if (ambr[k + 1] > ambr[k]) {
      ++inversions;
      small = small && ambr[k + 1] - ambr[k] <= 0.01;
    }
  }
  std::string curve;
  for (double e : ambr) curve += Fmt("%.3f ", e);
  const bool pass = ambr.size() == 5 && nbys.size() == 5 && inversions <= 1 &&
                    small && ambr[0] <= nbys[0] && seconds < 300;
  return {pass, Fmt("ambr error %sby fraction; nbys@1/32 %.3f; %.1fs",
                    curve.c_str(), nbys.empty() ? -1.0 : nbys[0], seconds)};
}

Outcome AggregationEquivalence() {
  std::size_t agree = 0;
  const std::size_t total = 200;
  for (std::size_t k = 0; k < total; ++k) {
    RngStream rng(70000 + k);
    const std::size_t n = 2 + rng.Below(31);
    Instance inst;
    inst.id = "emb";
    inst.candidates = PlaceholderCandidates(n);
    std::vector<std::vector<double>> vectors(n, std::vector<double>(8));
    for (auto& v : vectors) {
      for (auto& x : v) x = 2.0 * rng.Uniform() - 1.0;
    }
    inst.embeddings = std::move(vectors);
    UtilityOracle oracle = VectorOracle(inst, VectorKind::kCosine, Pairs(n));
    agree += ReferenceAggregation(inst).chosen == ExactMbr(oracle).chosen;
  }
  return {agree == total, Fmt("%zu/%zu instances agree", agree, total)};
}

Outcome RewardIdentity() {
  std::size_t agree = 0;
  const std::size_t total = 200;
  for (std::size_t k = 0; k < total; ++k) {
    const std::size_t n = 2 + k % 31;
    const Instance inst = MakeRandomInstance(n, 80000 + k);
    UtilityOracle a = MatrixOracle(inst, Pairs(n));
    UtilityOracle b = MatrixOracle(inst, Pairs(n));
    const std::vector<double> ones(n, 1.0);
    agree += RewardMbr(a, ones, Pairs(n)).chosen == ExactMbr(b).chosen;
  }
  return {agree == total, Fmt("%zu/%zu instances agree", agree, total)};
}

Outcome MetricValues() {
  const double f1 = UnigramF1(Tokenize("a b"), Tokenize("b c"));
  const double rouge = RougeLF1(Tokenize("a c"), Tokenize("a b c"));
  const TokenSequence x = Tokenize("the quick brown fox jumps");
  const double bleu = SentenceBleu(x, x);
  const std::vector<double> unit = {0.6, 0.8};
  const double cos = VectorUtility(unit, unit, VectorKind::kCosine);
  const bool pass =
      f1 == 0.5 && rouge == 0.8 && bleu == 1.0 && std::fabs(cos - 1.0) <= 1e-12;
  return {pass, Fmt("unigram_f1=%.17g rouge_l=%.17g bleu=%.17g cosine=%.17g",
                    f1, rouge, bleu, cos)};
}

int Shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome CliDeterminism() {
  const std::string dir = "ambr_acceptance_tmp";
  const std::string cli = AMBR_CLI_PATH;
  Shell("rm -rf " + dir + " && mkdir -p " + dir);
  const std::string corpus = dir + "/corpus.jsonl";
  const std::string cfg = dir + "/config.json";
  if (Shell(cli + " synth --n 32 --count 20 --gap 0.12 --noise 0.3 --seed 3 "
                  "--output " + corpus + " > /dev/null") != 0) {
    return {false, "synth failed"};
  }
  std::ofstream(cfg) << "{\"algorithms\": [\"nbys\", \"cbp\", \"ambr\", "
                        "\"ambr_replace\", \"doubling\"], \"input\": \""
                     << corpus << "\"}";
  const int a = Shell(cli + " run --config " + cfg + " --output " + dir +
                      "/a.csv > /dev/null");
  const int b = Shell(cli + " run --config " + cfg + " --output " + dir +
                      "/b.csv > /dev/null");
  const std::string ca = Slurp(dir + "/a.csv"), cb = Slurp(dir + "/b.csv");
  Shell("rm -rf " + dir);
  const bool pass = a == 0 && b == 0 && !ca.empty() && ca == cb;
  return {pass, Fmt("exit %d/%d, %zu bytes, identical=%s", a, b, ca.size(),
                    ca == cb ? "yes" : "no")};
}

}  // namespace
}  // namespace ambr

int main() {
  using ambr::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"brute-force equivalence", ambr::BruteForceEquivalence},
      {"full-budget exactness", ambr::FullBudgetExactness},
      {"budget compliance", ambr::BudgetCompliance},
      {"halving shape", ambr::HalvingShape},
      {"cbp incumbent survival", ambr::IncumbentSurvival},
      {"trend reproduction", ambr::TrendReproduction},
      {"reference aggregation equivalence", ambr::AggregationEquivalence},
      {"reward identity", ambr::RewardIdentity},
      {"metric unit values", ambr::MetricValues},
      {"cli determinism", ambr::CliDeterminism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome out;
    try {
      out = criteria[k].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failures += !out.pass;
    std::printf("[%s] %zu %s: %s\n", out.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first, out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
