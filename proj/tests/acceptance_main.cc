/* Copyright 2026 The memsched Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "memsched/bench.h"
#include "memsched/fusion.h"
#include "memsched/generator.h"
#include "memsched/ilp_model.h"
#include "memsched/partition.h"
#include "memsched/solver.h"
#include "testing.h"

namespace memsched {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct CorpusGraph {
  std::string label;
  ComputationGraph graph;
  int64_t optimum = 0;
};

// Random DAGs, at most 12 operators, sizes in [1, 16]. Half come from the
// library generator, half from the test-side builder.
std::vector<CorpusGraph> BuildCorpus(size_t count) {
  std::vector<CorpusGraph> corpus;
  std::mt19937_64 rng(20240607);
  for (size_t i = 0; i < count; ++i) {
    CorpusGraph c;
    if (i % 2 == 0) {
      GeneratorSpec spec{"random-dag",
                         {{"n", 1 + (i / 2) % 12},
                          {"seed", i},
                          {"window", 1 + i % 6},
                          {"max_fanin", 1 + i % 3},
                          {"max_size", 16}}};
      c.label = spec.Label();
      c.graph = Generate(spec);
    } else {
      c.label = "test-dag#" + std::to_string(i);
      c.graph = testing::RandomDag(rng, {.max_ops = 12, .max_size = 16});
    }
    corpus.push_back(std::move(c));
  }
  return corpus;
}

std::string Fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

Outcome OracleEquivalence(std::vector<CorpusGraph>& corpus) {
  const auto start = Clock::now();
  size_t mismatches = 0;
  for (CorpusGraph& c : corpus) {
    c.optimum = BruteForce(c.graph).peak;
    SolveResult r = Solve(c.graph);
    if (r.peak != c.optimum || !r.proven_optimal) {
      ++mismatches;
      std::cerr << "  mismatch on " << c.label << ": solve " << r.peak
                << " brute " << c.optimum << "\n";
    }
  }
  double secs = Seconds(Clock::now() - start);
  return {mismatches == 0 && corpus.size() >= 1000 && secs < 300,
          std::to_string(corpus.size()) + " DAGs, " +
              std::to_string(mismatches) + " mismatches, " +
              Fmt("%.1f s", secs)};
}

Outcome FusionPreservesOptimum(const std::vector<CorpusGraph>& corpus) {
  size_t mismatches = 0;
  size_t contracted = 0;
  for (const CorpusGraph& c : corpus) {
    FusedGraph fg = IterativeFusion(c.graph);
    contracted += fg.graph().num_ops() < c.graph.num_ops() ? 1 : 0;
    SolveResult r = Solve(fg.graph());
    Schedule s = fg.Expand(r.schedule);
    if (!IsLegalSchedule(c.graph, s) || Evaluate(c.graph, s).peak != c.optimum) {
      ++mismatches;
      std::cerr << "  fusion changed the optimum of " << c.label << "\n";
    }
  }
  return {mismatches == 0, std::to_string(corpus.size()) + " DAGs (" +
                               std::to_string(contracted) + " contracted), " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome PruningSound(const std::vector<CorpusGraph>& corpus) {
  size_t checked = 0;
  size_t mismatches = 0;
  for (const CorpusGraph& c : corpus) {
    if (c.graph.num_ops() > 10) continue;
    ++checked;
    ModelSolution raw = SolveModel(BuildModel(c.graph, false));
    ModelSolution pruned = SolveModel(BuildModel(c.graph, true));
    if (!raw.feasible || !pruned.feasible || raw.objective != pruned.objective ||
        raw.objective != c.optimum) {
      ++mismatches;
      std::cerr << "  pruning mismatch on " << c.label << "\n";
    }
  }
  IlpModel chain = BuildModel(testing::Chain(10), true);
  bool one_step = true;
  for (size_t i = 0; i < 10; ++i) {
    size_t free_steps = 0;
    for (size_t j = 1; j <= 10; ++j) {
      free_steps += chain.IsFixed(chain.O(i, j)) ? 0 : 1;
    }
    one_step &= free_steps == 1 && !chain.IsFixed(chain.O(i, i + 1));
  }
  return {mismatches == 0 && checked > 0 && one_step,
          std::to_string(checked) + " models, " + std::to_string(mismatches) +
              " mismatches; 10-op chain one step per operator: " +
              (one_step ? "yes" : "no")};
}

Outcome ScheduleCounts() {
  struct Case {
    const char* spec;
    std::function<bool(uint64_t)> ok;
  };
  const Case cases[] = {
      {R"({"family":"parallel-branches","branches":2,"depth":2})",
       [](uint64_t n) { return n == 6; }},
      {R"({"family":"linear"})", [](uint64_t n) { return n == 1; }},
      {R"({"family":"parallel-branches","branches":4,"depth":2})",
       [](uint64_t n) { return n > 100; }},
  };
  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    GeneratorSpec spec = SpecFromJson(nlohmann::json::parse(c.spec));
    const auto start = Clock::now();
    SolveResult r = BruteForce(Generate(spec));
    double secs = Seconds(Clock::now() - start);
    pass &= c.ok(r.legal_orders) && secs < 1.0;
    if (!detail.empty()) detail += "; ";
    detail += spec.Label() + " -> " + std::to_string(r.legal_orders);
  }
  return {pass, detail};
}

Outcome HrnetContraction() {
  const auto start = Clock::now();
  FusedGraph fg =
      IterativeFusion(Generate({"hrnet-block-like", {{"branches", 3}}}));
  double secs = Seconds(Clock::now() - start);
  size_t ops = fg.graph().num_ops();
  return {ops == 3 && secs < 1.0,
          std::to_string(fg.original().num_ops()) + " -> " +
              std::to_string(ops) + " operators in " + Fmt("%.4f s", secs)};
}

Outcome PruningWindow() {
  GraphBuilder b;
  b.AddInput("x", 1);
  b.AddOperator("a1", {"x"}, "A1", 1);
  b.AddOperator("a2", {"A1"}, "A2", 1);
  b.AddOperator("a3", {"A2"}, "A3", 1);
  b.AddOperator("a4", {"A3"}, "A4", 1);
  b.AddOperator("mid", {"A4"}, "M", 1);
  b.AddOperator("d1", {"M"}, "D1", 1);
  b.AddOperator("d2", {"D1"}, "D2", 1);
  b.AddOperator("p1", {"x"}, "P1", 1);
  b.AddOperator("p2", {"x"}, "P2", 1);
  b.AddOperator("p3", {"x"}, "P3", 1);
  ComputationGraph g = b.Build();
  IlpModel model = BuildModel(g, true);
  size_t mid = g.FindOp("mid")->index();
  std::vector<size_t> free_steps;
  for (size_t j = 1; j <= g.num_ops(); ++j) {
    if (!model.IsFixed(model.O(mid, j))) free_steps.push_back(j);
  }
  std::string steps;
  for (size_t j : free_steps) steps += (steps.empty() ? "" : ",") + std::to_string(j);
  return {free_steps == std::vector<size_t>{5, 6, 7, 8},
          "free O steps of the 4-ancestor/2-descendant operator: {" + steps + "}"};
}

Outcome Ablation() {
  const std::vector<GeneratorSpec> corpus = {
      {"nasnet-cell-like", {{"cells", 1}}},
      {"nasnet-cell-like", {{"cells", 2}}},
      {"nasnet-cell-like", {{"cells", 3}}},
      {"hrnet-block-like", {{"branches", 3}, {"blocks", 2}}},
      {"hrnet-block-like",
       {{"branches", 4}, {"stages", 2}, {"exchange", true}, {"expand", 2}}},
      {"hrnet-block-like",
       {{"branches", 4}, {"blocks", 3}, {"stages", 3}, {"exchange", true},
        {"expand", 2}}},
  };
  bool pass = true;
  double worst_reduction = 100.0;
  size_t slow = 0;
  double worst_speedup = 1e300;
  for (const GeneratorSpec& spec : corpus) {
    ComputationGraph g = Generate(spec);
    size_t raw_free = ComputeModelStats(BuildModel(g, false)).variables_free;

    const auto raw_start = Clock::now();
    SolveResult raw = Solve(g);
    double raw_secs = Seconds(Clock::now() - raw_start);

    const auto fused_start = Clock::now();
    FusedGraph fg = IterativeFusion(g);
    SolverConfig cfg;
    cfg.step_windows = true;
    SolveResult fused = Solve(fg.graph(), cfg);
    double fused_secs = Seconds(Clock::now() - fused_start);
    size_t fused_free =
        ComputeModelStats(BuildModel(fg.graph(), true)).variables_free;

    double reduction = 100.0 * (1.0 - static_cast<double>(fused_free) /
                                          static_cast<double>(raw_free));
    worst_reduction = std::min(worst_reduction, reduction);
    pass &= reduction >= 80.0;
    std::cerr << "  " << spec.Label() << ": vars " << raw_free << " -> "
              << fused_free << Fmt(" (%.1f%%)", reduction) << ", solve "
              << Fmt("%.3f s", raw_secs) << (raw.proven_optimal ? "" : " (limit)")
              << " -> " << Fmt("%.3f s", fused_secs)
              << (fused.proven_optimal ? "" : " (limit)") << "\n";
    if (raw_secs > 1.0) {
      ++slow;
      double speedup = raw_secs / fused_secs;
      worst_speedup = std::min(worst_speedup, speedup);
      pass &= speedup >= 5.0;
    }
  }
  std::string detail = "min variable reduction " +
                       Fmt("%.1f%%", worst_reduction) + "; " +
                       std::to_string(slow) + " instances over 1 s";
  if (slow > 0) detail += ", min speedup " + Fmt("%.1fx", worst_speedup);
  return {pass, detail};
}

Outcome PartitionQuality(const std::vector<CorpusGraph>& corpus) {
  bool pass = true;
  size_t k1_mismatch = 0;
  size_t below = 0;
  int64_t cut = 0;
  int64_t naive_cut = 0;
  double gap_sum = 0;
  size_t gap_n = 0;
  auto check = [&](const ComputationGraph& g, int64_t optimum, bool hrnet) {
    int64_t peak1 = PartitionedSchedule(g, 1, {}, 20).peak;
    if (peak1 != optimum) ++k1_mismatch;
    for (size_t k = 2; k <= 3; ++k) {
      int64_t peak = PartitionedSchedule(g, k, {}, 20).peak;
      if (peak < peak1) ++below;
      if (hrnet) {
        gap_sum += static_cast<double>(peak - peak1) / static_cast<double>(peak1);
        ++gap_n;
      }
      if (k <= g.num_ops()) {
        cut += AcyclicPartition(g, k).cut_weight;
        naive_cut += NaivePartition(g, k).cut_weight;
      }
    }
  };
  for (const CorpusGraph& c : corpus) check(c.graph, c.optimum, false);
  for (int branches = 1; branches <= 4; ++branches) {
    for (int blocks = 1; blocks <= 3; ++blocks) {
      for (bool exchange : {false, true}) {
        ComputationGraph g = Generate({"hrnet-block-like",
                                       {{"branches", branches},
                                        {"blocks", blocks},
                                        {"exchange", exchange},
                                        {"expand", 2}}});
        if (g.num_ops() > 12) continue;
        check(g, BruteForce(g).peak, true);
      }
    }
  }
  double mean_gap = gap_n ? 100.0 * gap_sum / static_cast<double>(gap_n) : 0;
  pass = k1_mismatch == 0 && below == 0 && gap_n > 0 && mean_gap <= 5.0 &&
         cut <= naive_cut;
  return {pass, "k=1 mismatches " + std::to_string(k1_mismatch) +
                    ", k>1 below k=1: " + std::to_string(below) +
                    ", hrnet mean gap " + Fmt("%.2f%%", mean_gap) + " over " +
                    std::to_string(gap_n) + " runs, cut " +
                    std::to_string(cut) + " vs naive " +
                    std::to_string(naive_cut)};
}

Outcome RpoDominance() {
  std::vector<GeneratorSpec> corpus = {
      {"linear", {}},
      {"residual-chain", {}},
      {"parallel-branches", {{"branches", 2}, {"depth", 2}}},
      {"parallel-branches", {{"branches", 4}, {"depth", 2}, {"residual", true}}},
      {"nasnet-cell-like", {{"cells", 1}}},
      {"nasnet-cell-like", {{"cells", 2}}},
      {"hrnet-block-like", {{"branches", 3}}},
      {"hrnet-block-like",
       {{"branches", 4}, {"stages", 3}, {"exchange", true}, {"expand", 2}}},
  };
  for (int seed = 0; seed < 8; ++seed) {
    corpus.push_back({"random-dag", {{"n", 24}, {"seed", seed}, {"window", 6}}});
  }
  BenchConfig config;
  config.methods = {"rpo", "exact"};
  BenchReport report = RunBench(corpus, config);
  size_t violations = 0;
  size_t strict = 0;
  for (size_t i = 0; i + 1 < report.rows.size(); i += 2) {
    const BenchRow& rpo = report.rows[i];
    const BenchRow& exact = report.rows[i + 1];
    if (!rpo.error.empty() || !exact.error.empty() || exact.peak > rpo.peak) {
      ++violations;
      std::cerr << "  " << exact.generator << ": exact " << exact.peak
                << " rpo " << rpo.peak << " " << exact.error << rpo.error << "\n";
    }
    strict += exact.peak < rpo.peak ? 1 : 0;
  }
  return {violations == 0,
          std::to_string(report.rows.size() / 2) + " graphs, " +
              std::to_string(violations) + " violations, " +
              std::to_string(strict) + " strictly better than RPO"};
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome GoldenLp() {
  const std::string dir = MEMSCHED_GOLDEN_DIR;
  GraphBuilder b("KB");
  b.AddInput("x", 3);
  b.AddOperator("a", {"x"}, "A", 2, 1);
  ComputationGraph single = b.Build();
  ComputationGraph diamond = testing::Diamond();
  struct Case {
    std::string file;
    std::string text;
    std::string again;
  };
  std::vector<Case> cases = {
      {"single_op.lp", ExportLp(BuildModel(single, false)),
       ExportLp(BuildModel(single, false))},
      {"diamond.lp", ExportLp(BuildModel(diamond, false)),
       ExportLp(BuildModel(diamond, false))},
      {"diamond_pruned.lp", ExportLp(BuildModel(diamond, true)),
       ExportLp(BuildModel(diamond, true))},
  };
  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    std::string golden = ReadFile(dir + "/" + c.file);
    bool same = !golden.empty() && golden == c.text && c.text == c.again;
    pass &= same;
    detail += (detail.empty() ? "" : ", ") + c.file + (same ? " identical" : " differs");
  }
  return {pass, detail};
}

}  // namespace
}  // namespace memsched

int main() {
  using namespace memsched;
  std::vector<CorpusGraph> corpus = BuildCorpus(1000);
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name << ": "
              << o.detail << std::endl;
    failures += o.pass ? 0 : 1;
  };
  report(1, "oracle-equivalence", OracleEquivalence(corpus));
  report(2, "fusion-optimality", FusionPreservesOptimum(corpus));
  report(3, "pruning-soundness", PruningSound(corpus));
  report(4, "schedule-counts", ScheduleCounts());
  report(5, "hrnet-contraction", HrnetContraction());
  report(6, "pruning-window", PruningWindow());
  report(7, "fusion-pruning-ablation", Ablation());
  report(8, "partition-quality", PartitionQuality(corpus));
  report(9, "rpo-dominance", RpoDominance());
  report(10, "golden-lp", GoldenLp());
  return failures == 0 ? 0 : 1;
}
