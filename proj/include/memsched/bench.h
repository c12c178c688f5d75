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

#ifndef MEMSCHED_BENCH_H_
#define MEMSCHED_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "memsched/footprint.h"
#include "memsched/generator.h"
#include "memsched/solver.h"

namespace memsched {

// Methods understood by RunBench:
//   rpo          reverse post-order
//   exact        fusion, then the exact search with step windows
//   exact-raw    exact search on the unfused graph without windows
//   brute        exhaustive enumeration (small graphs only)
//   partition:K  partitioned scheduling with K parts
struct BenchConfig {
  std::vector<std::string> methods = {"rpo", "exact"};
  SolverConfig solver;
  size_t max_fuse = 20;
  // 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct BenchRow {
  std::string generator;
  size_t ops_raw = 0;
  size_t ops_fused = 0;
  // Free variables of the model the method works on: the pruned model of
  // the fused graph for exact and partition rows, the raw model otherwise.
  size_t variables_free = 0;
  size_t variables_total = 0;
  std::string method;
  int64_t peak = 0;
  double wall_time_ms = 0;
  bool proven_optimal = false;
  // Empty unless the row failed; the other fields are then partial.
  std::string error;
  Schedule schedule;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  std::string ToCsv() const;
  nlohmann::json ToJson() const;
};

// Corpus document: a list of generator specs, or
// {"graphs": [...], "methods": [...], "time_limit": S, "max_fuse": M}.
struct Corpus {
  std::vector<GeneratorSpec> graphs;
  BenchConfig config;
};
Corpus LoadCorpus(const nlohmann::json& doc);

// One row per (graph, method) in corpus order. Rows are computed on a pool
// of threads; failures are recorded in the row and the run continues.
BenchReport RunBench(const std::vector<GeneratorSpec>& corpus,
                     const BenchConfig& config = {});

}  // namespace memsched

#endif  // MEMSCHED_BENCH_H_
