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

#ifndef MEMSCHED_FOOTPRINT_H_
#define MEMSCHED_FOOTPRINT_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "memsched/graph.h"

namespace memsched {

// Execution order: position k holds the operator run at step k + 1.
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::vector<OpId> order) : order_(std::move(order)) {}

  std::span<const OpId> order() const { return order_; }
  size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }
  OpId operator[](size_t k) const { return order_[k]; }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<OpId> order_;
};

// Returns an empty string when `sched` is a permutation of the graph's
// operators in which every producer precedes its consumers; otherwise a
// description of the first violation.
std::string FindScheduleViolation(const ComputationGraph& g,
                                  const Schedule& sched);
bool IsLegalSchedule(const ComputationGraph& g, const Schedule& sched);
// Throws Error{kIllegalSchedule} naming the first violation.
void ValidateSchedule(const ComputationGraph& g, const Schedule& sched);

// Memory states of a schedule. A tensor is resident from its producer's step
// (step 0 for graph inputs) through its last reader's step; pinned tensors
// stay until the end.
//   stable[i - 1]  resident while step i runs: live tensors, including the
//                  step's output and the inputs it frees, plus its extra size.
//   transient[i]   resident between steps i and i + 1; transient[0] is the
//                  graph input size and transient[n] the graph output size.
struct FootprintTrace {
  std::vector<int64_t> stable;
  std::vector<int64_t> transient;
  int64_t peak = 0;
  // 1-based step of the first maximal stable entry; 0 for empty graphs.
  size_t peak_step = 0;
};

FootprintTrace Evaluate(const ComputationGraph& g, const Schedule& sched);

// Memory-oblivious baseline: depth-first post-order over predecessors,
// starting from the producers of graph outputs in ascending id order and
// visiting predecessors in ascending id order.
Schedule RpoSchedule(const ComputationGraph& g);

// Operator at the first step attaining the peak.
OpId PeakOperator(const ComputationGraph& g, const Schedule& sched);

// {"stable":[...],"transient":[...],"peak":N,"peak_step":i,"unit":...}
nlohmann::json TraceToJson(const FootprintTrace& trace,
                           const std::string& unit);

}  // namespace memsched

#endif  // MEMSCHED_FOOTPRINT_H_
