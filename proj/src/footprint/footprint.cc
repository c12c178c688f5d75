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

#include "memsched/footprint.h"

#include <algorithm>

#include "memsched/error.h"

namespace memsched {

std::string FindScheduleViolation(const ComputationGraph& g,
                                  const Schedule& sched) {
  const size_t n = g.num_ops();
  if (sched.size() != n) {
    return "schedule has " + std::to_string(sched.size()) +
           " steps but the graph has " + std::to_string(n) + " operators";
  }
  std::vector<size_t> step(n, 0);
  for (size_t k = 0; k < n; ++k) {
    OpId v = sched[k];
    if (!v.valid() || v.index() >= n) {
      return "step " + std::to_string(k + 1) + " names an unknown operator";
    }
    if (step[v.index()] != 0) {
      return "operator '" + g.op(v).name + "' is scheduled twice";
    }
    step[v.index()] = k + 1;
  }
  for (size_t k = 0; k < n; ++k) {
    OpId v = sched[k];
    for (OpId p : g.predecessors(v)) {
      if (step[p.index()] > k + 1) {
        return "operator '" + g.op(v).name + "' at step " +
               std::to_string(k + 1) + " runs before its producer '" +
               g.op(p).name + "' at step " + std::to_string(step[p.index()]);
      }
    }
  }
  return {};
}

bool IsLegalSchedule(const ComputationGraph& g, const Schedule& sched) {
  return FindScheduleViolation(g, sched).empty();
}

void ValidateSchedule(const ComputationGraph& g, const Schedule& sched) {
  std::string why = FindScheduleViolation(g, sched);
  if (!why.empty()) throw Error(ErrorCode::kIllegalSchedule, why);
}

FootprintTrace Evaluate(const ComputationGraph& g, const Schedule& sched) {
  ValidateSchedule(g, sched);
  const size_t n = g.num_ops();
  std::vector<size_t> step(n);
  for (size_t k = 0; k < n; ++k) step[sched[k].index()] = k + 1;

  // Difference arrays over steps 0..n+1. A tensor occupies the closed step
  // interval [start, end]; pinned tensors end past the last step.
  std::vector<int64_t> stable_diff(n + 2, 0);
  std::vector<int64_t> transient_diff(n + 2, 0);
  for (const TensorSpec& t : g.tensors()) {
    size_t start = t.producer ? step[t.producer->index()] : 0;
    size_t end = start;
    for (OpId c : t.consumers) end = std::max(end, step[c.index()]);
    if (t.pinned) end = n + 1;
    stable_diff[start] += t.size;
    stable_diff[std::min(end + 1, n + 1)] -= t.size;
    // Transient at step i counts tensors with start <= i <= end - 1.
    if (end > start) {
      transient_diff[start] += t.size;
      transient_diff[end] -= t.size;
    }
  }

  FootprintTrace trace;
  trace.stable.resize(n);
  trace.transient.resize(n + 1);
  int64_t live = 0;
  int64_t between = 0;
  for (size_t i = 0; i <= n; ++i) {
    live += stable_diff[i];
    between += transient_diff[i];
    trace.transient[i] = between;
    if (i == 0) continue;
    int64_t s = live + g.op(sched[i - 1]).extra_size;
    trace.stable[i - 1] = s;
    if (trace.peak_step == 0 || s > trace.peak) {
      trace.peak = s;
      trace.peak_step = i;
    }
  }
  return trace;
}

Schedule RpoSchedule(const ComputationGraph& g) {
  const size_t n = g.num_ops();
  std::vector<bool> visited(n, false);
  std::vector<OpId> order;
  order.reserve(n);

  auto visit = [&](OpId root) {
    if (visited[root.index()]) return;
    visited[root.index()] = true;
    std::vector<std::pair<OpId, size_t>> stack{{root, 0}};
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      auto preds = g.predecessors(node);
      if (next == preds.size()) {
        order.push_back(node);
        stack.pop_back();
        continue;
      }
      OpId p = preds[next++];
      if (!visited[p.index()]) {
        visited[p.index()] = true;
        stack.emplace_back(p, 0);
      }
    }
  };

  std::vector<OpId> roots;
  for (TensorId t : g.output_tensors()) {
    if (const auto& prod = g.tensor(t).producer) roots.push_back(*prod);
  }
  std::sort(roots.begin(), roots.end());
  for (OpId r : roots) visit(r);
  // Every operator reaches a pinned tensor, but stay total regardless.
  for (size_t v = 0; v < n; ++v) visit(OpId(v));
  return Schedule(std::move(order));
}

OpId PeakOperator(const ComputationGraph& g, const Schedule& sched) {
  FootprintTrace trace = Evaluate(g, sched);
  if (trace.peak_step == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty schedule has no peak");
  }
  return sched[trace.peak_step - 1];
}

nlohmann::json TraceToJson(const FootprintTrace& trace,
                           const std::string& unit) {
  return {{"stable", trace.stable},
          {"transient", trace.transient},
          {"peak", trace.peak},
          {"peak_step", trace.peak_step},
          {"unit", unit}};
}

}  // namespace memsched
