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

// memsched command line: schedule, gen, bench.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "memsched/bench.h"
#include "memsched/error.h"
#include "memsched/fusion.h"
#include "memsched/generator.h"
#include "memsched/graph_io.h"
#include "memsched/ilp_model.h"
#include "memsched/partition.h"
#include "memsched/plot_data.h"
#include "memsched/solver.h"

namespace memsched {
namespace {

struct ScheduleArgs {
  std::string input;
  std::string method = "exact";
  bool fuse = false;
  bool prune = false;
  size_t partition = 0;
  size_t max_fuse = 20;
  double time_limit = 30.0;
  std::string emit_lp;
  std::string report;
  std::string plot_data;
};

double Millis(std::chrono::nanoseconds d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

nlohmann::json NamesOf(const ComputationGraph& g, const Schedule& s) {
  nlohmann::json names = nlohmann::json::array();
  for (OpId u : s.order()) names.push_back(g.op(u).name);
  return names;
}

int RunSchedule(const ScheduleArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  ComputationGraph g = LoadGraphFromFile(args.input);
  SolverConfig cfg;
  cfg.time_limit_seconds = args.time_limit;
  cfg.step_windows = args.prune;
  if (args.method == "brute") cfg.mode = SolveMode::kBruteForce;

  nlohmann::json extra = nlohmann::json::object();
  SolveResult result;
  std::optional<FusedGraph> fused;
  if (args.partition > 0) {
    if (args.method == "rpo") {
      throw Error(ErrorCode::kInvalidArgument,
                  "--partition needs --method exact or brute");
    }
    PartitionedResult pr =
        PartitionedScheduleDetailed(g, args.partition, cfg, args.max_fuse);
    result = pr.result;
    fused = IterativeFusion(g, {.max_subgraph_size = args.max_fuse});
    extra["plan"] = PlanToJson(fused->graph(), pr.plan);
  } else {
    fused = args.fuse
                ? IterativeFusion(g, {.max_subgraph_size = args.max_fuse})
                : FusedGraph(g);
    const ComputationGraph& h = fused->graph();
    if (args.method == "rpo") {
      result.schedule = RpoSchedule(h);
    } else if (args.method == "exact") {
      result = Solve(h, cfg);
    } else {
      result = BruteForce(h);
    }
    result.schedule = fused->Expand(result.schedule);
  }
  ValidateSchedule(g, result.schedule);
  FootprintTrace trace = Evaluate(g, result.schedule);
  result.peak = trace.peak;
  result.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);

  if (!args.emit_lp.empty()) {
    WriteLp(BuildModel(fused->graph(), args.prune), args.emit_lp);
  }
  nlohmann::json out = {{"schedule", NamesOf(g, result.schedule)},
                        {"peak", result.peak},
                        {"proven_optimal", result.proven_optimal},
                        {"wall_time_ms", Millis(result.wall_time)},
                        {"explored_states", result.explored_states}};
  std::cout << out.dump(2) << "\n";
  if (!args.report.empty()) {
    nlohmann::json report = out;
    report["timed_out"] = result.timed_out;
    report["unit"] = g.unit();
    report["ops_raw"] = g.num_ops();
    report["ops_fused"] = fused->graph().num_ops();
    report["trace"] = TraceToJson(trace, g.unit());
    report["fusion"] = FusionReportJson(*fused);
    report["model"] =
        ComputeModelStats(BuildModel(fused->graph(), args.prune)).ToJson();
    report.update(extra);
    WriteTextFile(args.report, report.dump(2) + "\n");
  }
  if (!args.plot_data.empty()) WriteTextFile(args.plot_data, PlotData(trace));
  return 0;
}

// "--key value" and "--key=value" pairs left over after parsing.
nlohmann::json ParseParams(const std::vector<std::string>& rest) {
  nlohmann::json params = nlohmann::json::object();
  for (size_t i = 0; i < rest.size(); ++i) {
    std::string arg = rest[i];
    if (arg.rfind("--", 0) != 0) {
      throw Error(ErrorCode::kInvalidSpec, "unexpected argument " + arg);
    }
    arg = arg.substr(2);
    std::string value;
    if (auto eq = arg.find('='); eq != std::string::npos) {
      value = arg.substr(eq + 1);
      arg = arg.substr(0, eq);
    } else if (i + 1 < rest.size()) {
      value = rest[++i];
    } else {
      throw Error(ErrorCode::kInvalidSpec, "missing value for --" + arg);
    }
    for (char& c : arg) {
      if (c == '-') c = '_';
    }
    nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
    params[arg] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
  }
  return params;
}

int RunGen(const std::string& family, const std::vector<std::string>& rest,
           const std::string& out) {
  GeneratorSpec spec{family, ParseParams(rest)};
  WriteGraphFile(Generate(spec), out);
  return 0;
}

int RunBenchCommand(const std::string& corpus_path, const std::string& out,
                    const std::string& json_out, const std::string& plot,
                    unsigned threads) {
  std::ifstream in(corpus_path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + corpus_path);
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::kInvalidSpec, corpus_path + " is not valid JSON");
  }
  Corpus corpus = LoadCorpus(doc);
  corpus.config.threads = threads;
  BenchReport report = RunBench(corpus.graphs, corpus.config);
  WriteTextFile(out, report.ToCsv());
  if (!json_out.empty()) WriteTextFile(json_out, report.ToJson().dump(2) + "\n");
  if (!plot.empty()) WriteTextFile(plot, PlotData(report));
  size_t failed = 0;
  for (const BenchRow& r : report.rows) failed += r.error.empty() ? 0 : 1;
  std::cerr << report.rows.size() << " rows, " << failed << " failed\n";
  return 0;
}

}  // namespace
}  // namespace memsched

int main(int argc, char** argv) {
  using namespace memsched;
  CLI::App app{"Peak-memory-aware operator scheduling"};
  app.require_subcommand(1);

  ScheduleArgs sched;
  CLI::App* s = app.add_subcommand("schedule", "Schedule a graph file");
  s->add_option("--input", sched.input, "Graph JSON")->required();
  s->add_option("--method", sched.method, "rpo, exact or brute")
      ->check(CLI::IsMember({"rpo", "exact", "brute"}));
  s->add_flag("--fuse", sched.fuse, "Run iterative fusion first");
  s->add_flag("--prune", sched.prune,
              "Restrict operators to their feasible step windows");
  s->add_option("--partition", sched.partition,
                "Partitioned scheduling with K parts")
      ->check(CLI::PositiveNumber);
  s->add_option("--max-fuse", sched.max_fuse, "Largest fusion candidate")
      ->check(CLI::Range(2, 64));
  s->add_option("--time-limit", sched.time_limit, "Seconds for the search")
      ->check(CLI::NonNegativeNumber);
  s->add_option("--emit-lp", sched.emit_lp, "Write the ILP model");
  s->add_option("--report", sched.report, "Write a detailed JSON report");
  s->add_option("--plot-data", sched.plot_data, "Write footprint TSV");

  std::string family, gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Generate a benchmark graph");
  gen->add_option("--family", family, "Generator family")->required();
  gen->add_option("--out", gen_out, "Output graph JSON")->required();
  gen->allow_extras();
  gen->footer("Family parameters are passed as --name value.");

  std::string corpus, bench_out, bench_json, bench_plot;
  unsigned threads = 0;
  CLI::App* bench = app.add_subcommand("bench", "Run a benchmark corpus");
  bench->add_option("--corpus", corpus, "Corpus JSON")->required();
  bench->add_option("--out", bench_out, "Output CSV")->required();
  bench->add_option("--json", bench_json, "Also write the rows as JSON");
  bench->add_option("--plot-data", bench_plot, "Write graph size TSV");
  bench->add_option("--threads", threads, "Worker threads, 0 for all cores");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*s) return RunSchedule(sched);
    if (*gen) return RunGen(family, gen->remaining(), gen_out);
    if (*bench) {
      return RunBenchCommand(corpus, bench_out, bench_json, bench_plot,
                             threads);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
