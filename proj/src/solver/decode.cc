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

#include <cmath>
#include <string>

#include "memsched/error.h"
#include "memsched/ilp_model.h"
#include "memsched/solver.h"

namespace memsched {

SolveResult DecodeIlpSolution(const ComputationGraph& g, const IlpModel& model,
                              const std::vector<double>& assignment) {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInconsistentAssignment, why);
  };
  if (model.num_ops() != g.num_ops() ||
      model.num_tensors() != g.num_tensors()) {
    fail("model was not built from this graph");
  }
  std::string violation = FindViolation(model, assignment);
  if (!violation.empty()) fail(violation);

  const size_t n = g.num_ops();
  std::vector<OpId> order;
  for (size_t j = 1; j <= n; ++j) {
    for (size_t i = 0; i < n; ++i) {
      if (assignment[model.O(i, j)] > 0.5) order.emplace_back(i);
    }
  }
  Schedule schedule(std::move(order));
  std::string illegal = FindScheduleViolation(g, schedule);
  if (!illegal.empty()) fail("decoded order is illegal: " + illegal);

  SolveResult result;
  result.schedule = std::move(schedule);
  result.peak = Evaluate(g, result.schedule).peak;
  double mem = assignment[model.mem()];
  if (static_cast<double>(result.peak) > mem + 1e-6) {
    fail("decoded peak " + std::to_string(result.peak) +
         " exceeds the assignment's mem " + std::to_string(mem));
  }
  return result;
}

}  // namespace memsched
