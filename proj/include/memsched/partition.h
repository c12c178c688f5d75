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

#ifndef MEMSCHED_PARTITION_H_
#define MEMSCHED_PARTITION_H_

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "memsched/fusion.h"
#include "memsched/graph.h"
#include "memsched/solver.h"

namespace memsched {

struct PartitionPlan {
  // Parts in execution order; members ascending.
  std::vector<std::vector<OpId>> parts;
  // Sum of the sizes of tensors whose producer and consumers do not all sit
  // in one part. Each tensor counts once.
  int64_t cut_weight = 0;
  // Part holding the peak operator of the RPO schedule.
  size_t peak_part_index = 0;
};

// Part sizes allowed for n operators in k parts: [lo, hi].
struct BalanceBounds {
  size_t lo = 0;
  size_t hi = 0;
};
BalanceBounds PartitionBalance(size_t n, size_t k, double tolerance = 0.3);

int64_t CutWeight(const ComputationGraph& g,
                  const std::vector<std::vector<OpId>>& parts);

// No dependency path leaves a part and comes back, and every operator is in
// exactly one part.
bool IsAcyclicPlan(const ComputationGraph& g,
                   const std::vector<std::vector<OpId>>& parts);

// Equal contiguous intervals of the RPO schedule.
PartitionPlan NaivePartition(const ComputationGraph& g, size_t k);

// Starts from NaivePartition and moves single operators across neighbouring
// part boundaries while that lowers the cut and keeps parts ordered and
// within the balance bounds. Throws Error{kInvalidArgument} for k == 0 and
// Error{kInfeasibleBalance} when k exceeds the operator count.
PartitionPlan AcyclicPartition(const ComputationGraph& g, size_t k);
PartitionPlan AcyclicPartition(const FusedGraph& fg, size_t k);

// {"parts":[[op names]],"cut_weight","peak_part_index"}
nlohmann::json PlanToJson(const ComputationGraph& g, const PartitionPlan& plan);

struct PartitionedResult {
  SolveResult result;
  PartitionPlan plan;
  // Operators of the fused graph that was partitioned.
  size_t fused_ops = 0;
};

// Fuses with max_fuse as the candidate size limit, partitions the fused
// graph into min(k, |V|) parts, solves the part holding the RPO peak
// exactly and orders the others by RPO. The returned schedule is over g.
PartitionedResult PartitionedScheduleDetailed(const ComputationGraph& g,
                                              size_t k,
                                              const SolverConfig& cfg,
                                              size_t max_fuse);
SolveResult PartitionedSchedule(const ComputationGraph& g, size_t k,
                                const SolverConfig& cfg, size_t max_fuse);

}  // namespace memsched

#endif  // MEMSCHED_PARTITION_H_
