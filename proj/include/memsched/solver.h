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

#ifndef MEMSCHED_SOLVER_H_
#define MEMSCHED_SOLVER_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "memsched/footprint.h"
#include "memsched/graph.h"

namespace memsched {

class IlpModel;

inline constexpr size_t kMaxBruteForceOps = 14;

enum class SolveMode { kExact, kBruteForce };

struct SolverConfig {
  double time_limit_seconds = 30.0;
  // Upper bound on stored search states; reaching it ends the search like a
  // timeout.
  std::optional<uint64_t> node_limit = 4'000'000;
  SolveMode mode = SolveMode::kExact;
  // Zero keeps the plain state-id tie-break; other values permute ties
  // deterministically.
  uint64_t seed = 0;
  // Restrict each operator to steps [|anc|+1, |V|-|des|] while searching.
  bool step_windows = false;
  // Disabling merges of equal executed-sets turns the search into a plain
  // tree search. Only meant for cross-checking on tiny graphs.
  bool memoize = true;
};

struct IncumbentUpdate {
  std::chrono::nanoseconds at{0};
  int64_t peak = 0;
};

struct SolveResult {
  Schedule schedule;
  int64_t peak = 0;
  bool proven_optimal = false;
  // Search stopped on the time or node limit; `schedule` is the best
  // incumbent found so far and is still legal.
  bool timed_out = false;
  uint64_t explored_states = 0;
  std::chrono::nanoseconds wall_time{0};
  // Number of topological orders; filled by BruteForce only.
  uint64_t legal_orders = 0;
  // Peaks of successive incumbents, non-increasing.
  std::vector<IncumbentUpdate> incumbents;
};

// Enumerates every topological order. Throws Error{kTooLarge} above
// kMaxBruteForceOps operators.
SolveResult BruteForce(const ComputationGraph& g);

// Exact minimum-peak schedule by best-first search over executed-operator
// sets (see solver.cc). Dispatches to BruteForce in kBruteForce mode.
SolveResult Solve(const ComputationGraph& g, const SolverConfig& cfg = {});

// Greedy baseline: always runs the ready operator with the smallest stable
// footprint.
Schedule GreedySchedule(const ComputationGraph& g);

// Reads the order off the O variables of a model assignment for `g` and
// evaluates it. Throws Error{kInconsistentAssignment} when the assignment
// breaks a model row, does not decode to a legal schedule, or claims a mem
// value below the decoded peak.
SolveResult DecodeIlpSolution(const ComputationGraph& g, const IlpModel& model,
                              const std::vector<double>& assignment);

}  // namespace memsched

#endif  // MEMSCHED_SOLVER_H_
