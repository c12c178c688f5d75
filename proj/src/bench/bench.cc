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

#include "memsched/bench.h"

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "memsched/error.h"
#include "memsched/fusion.h"
#include "memsched/ilp_model.h"
#include "memsched/partition.h"

namespace memsched {
namespace {

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double Millis(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

struct GraphJob {
  const GeneratorSpec* spec = nullptr;
  std::vector<BenchRow>* rows = nullptr;
};

void RunMethod(const ComputationGraph& g, const FusedGraph& fg,
               const BenchConfig& config, BenchRow& row) {
  const auto start = std::chrono::steady_clock::now();
  const std::string& m = row.method;
  SolveResult r;
  if (m == "rpo") {
    r.schedule = RpoSchedule(g);
  } else if (m == "exact") {
    SolverConfig cfg = config.solver;
    cfg.step_windows = true;
    FusedGraph fused = IterativeFusion(g, {.max_subgraph_size = config.max_fuse});
    SolveResult inner = Solve(fused.graph(), cfg);
    r.schedule = fused.Expand(inner.schedule);
    r.proven_optimal = inner.proven_optimal;
  } else if (m == "exact-raw") {
    SolverConfig cfg = config.solver;
    cfg.step_windows = false;
    r = Solve(g, cfg);
  } else if (m == "brute") {
    r = BruteForce(g);
  } else if (m.rfind("partition:", 0) == 0) {
    size_t k = 0;
    try {
      k = std::stoul(m.substr(10));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad method " + m);
    }
    r = PartitionedSchedule(g, k, config.solver, config.max_fuse);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown method " + m);
  }
  row.wall_time_ms = Millis(std::chrono::steady_clock::now() - start);
  ValidateSchedule(g, r.schedule);
  row.schedule = r.schedule;
  row.peak = Evaluate(g, r.schedule).peak;
  row.proven_optimal = r.proven_optimal;
  bool fused_model = m == "exact" || m.rfind("partition:", 0) == 0;
  if (fused_model) {
    row.variables_free =
        ComputeModelStats(BuildModel(fg.graph(), true)).variables_free;
  }
}

void RunGraph(const GraphJob& job, const BenchConfig& config) {
  std::vector<BenchRow>& rows = *job.rows;
  for (BenchRow& row : rows) row.generator = job.spec->Label();
  try {
    ComputationGraph g = Generate(*job.spec);
    FusedGraph fg = IterativeFusion(g, {.max_subgraph_size = config.max_fuse});
    const size_t n = g.num_ops();
    const size_t total = n * n + g.num_tensors() * (n + 1) + 1;
    for (BenchRow& row : rows) {
      row.ops_raw = n;
      row.ops_fused = fg.graph().num_ops();
      row.variables_total = total;
      row.variables_free = total;
      try {
        RunMethod(g, fg, config, row);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  } catch (const std::exception& e) {
    for (BenchRow& row : rows) row.error = e.what();
  }
}

}  // namespace

std::string BenchReport::ToCsv() const {
  std::ostringstream out;
  out << "generator,ops_raw,ops_fused,variables_free,variables_total,method,"
         "peak,wall_time_ms,proven_optimal,error\n";
  for (const BenchRow& r : rows) {
    out << CsvField(r.generator) << ',' << r.ops_raw << ',' << r.ops_fused
        << ',' << r.variables_free << ',' << r.variables_total << ','
        << CsvField(r.method) << ',' << r.peak << ',' << r.wall_time_ms << ','
        << (r.proven_optimal ? "true" : "false") << ',' << CsvField(r.error)
        << '\n';
  }
  return out.str();
}

nlohmann::json BenchReport::ToJson() const {
  nlohmann::json out = nlohmann::json::array();
  for (const BenchRow& r : rows) {
    out.push_back({{"generator", r.generator},
                   {"ops_raw", r.ops_raw},
                   {"ops_fused", r.ops_fused},
                   {"variables_free", r.variables_free},
                   {"variables_total", r.variables_total},
                   {"method", r.method},
                   {"peak", r.peak},
                   {"wall_time_ms", r.wall_time_ms},
                   {"proven_optimal", r.proven_optimal},
                   {"error", r.error}});
  }
  return {{"rows", std::move(out)}};
}

Corpus LoadCorpus(const nlohmann::json& doc) {
  Corpus corpus;
  const nlohmann::json* graphs = &doc;
  if (doc.is_object()) {
    if (!doc.contains("graphs")) {
      throw Error(ErrorCode::kInvalidSpec, "corpus object needs \"graphs\"");
    }
    graphs = &doc.at("graphs");
    try {
      if (doc.contains("methods")) {
        corpus.config.methods = doc.at("methods").get<std::vector<std::string>>();
      }
      if (doc.contains("time_limit")) {
        corpus.config.solver.time_limit_seconds = doc.at("time_limit").get<double>();
      }
      if (doc.contains("max_fuse")) {
        corpus.config.max_fuse = doc.at("max_fuse").get<size_t>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidSpec, e.what());
    }
  }
  if (!graphs->is_array()) {
    throw Error(ErrorCode::kInvalidSpec, "corpus graphs must be a list");
  }
  for (const auto& item : *graphs) corpus.graphs.push_back(SpecFromJson(item));
  return corpus;
}

BenchReport RunBench(const std::vector<GeneratorSpec>& corpus,
                     const BenchConfig& config) {
  std::vector<std::vector<BenchRow>> per_graph(corpus.size());
  std::vector<GraphJob> jobs;
  for (size_t i = 0; i < corpus.size(); ++i) {
    for (const std::string& m : config.methods) {
      BenchRow row;
      row.method = m;
      per_graph[i].push_back(std::move(row));
    }
    jobs.push_back({&corpus[i], &per_graph[i]});
  }
  unsigned threads = config.threads ? config.threads
                                    : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<size_t>(1, jobs.size()));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      RunGraph(jobs[i], config);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  BenchReport report;
  for (auto& rows : per_graph) {
    for (BenchRow& r : rows) report.rows.push_back(std::move(r));
  }
  return report;
}

}  // namespace memsched
