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

#include "memsched/subgraph.h"

#include <algorithm>

#include "memsched/error.h"

namespace memsched {

DynamicBitset VertexSet(const ComputationGraph& g, std::span<const OpId> ops) {
  DynamicBitset set(g.num_ops());
  for (OpId v : ops) {
    if (!v.valid() || v.index() >= g.num_ops()) {
      throw Error(ErrorCode::kUnknownVertex,
                  "operator index " + std::to_string(v.value()) +
                      " is not in the graph");
    }
    set.set(v.index());
  }
  return set;
}

SubgraphRef InducedSubgraph(const ComputationGraph& g,
                            std::span<const OpId> vertices) {
  SubgraphRef ref{VertexSet(g, vertices), {}};
  ref.vertices.ForEach([&](size_t u) {
    for (OpId s : g.successors(OpId(u))) {
      if (ref.vertices.test(s.index())) ref.edges.emplace_back(OpId(u), s);
    }
  });
  return ref;
}

Boundary ComputeBoundary(const ComputationGraph& g, const DynamicBitset& set) {
  Boundary b;
  for (size_t t = 0; t < g.num_tensors(); ++t) {
    const TensorSpec& spec = g.tensor(TensorId(t));
    bool produced_inside = spec.producer && set.test(spec.producer->index());
    bool read_inside = false;
    bool read_outside = false;
    for (OpId c : spec.consumers) {
      (set.test(c.index()) ? read_inside : read_outside) = true;
    }
    if (produced_inside) {
      if (read_outside || spec.pinned) b.outputs.emplace_back(t);
    } else if (read_inside) {
      b.inputs.emplace_back(t);
    }
  }
  return b;
}

std::string_view IsolationViolationName(IsolationViolation v) {
  switch (v) {
    case IsolationViolation::kNone: return "none";
    case IsolationViolation::kEmpty: return "empty";
    case IsolationViolation::kInputCount: return "input-count";
    case IsolationViolation::kOutputCount: return "output-count";
    case IsolationViolation::kInputConsumedOutside:
      return "input-consumed-outside";
  }
  return "unknown";
}

IsolationReport CheckIsolated(const ComputationGraph& g,
                              std::span<const OpId> vertices) {
  IsolationReport report;
  DynamicBitset set = VertexSet(g, vertices);
  if (set.none()) {
    report.violation = IsolationViolation::kEmpty;
    report.detail = "vertex set is empty";
    return report;
  }
  Boundary b = ComputeBoundary(g, set);
  if (b.inputs.size() != 1) {
    report.violation = IsolationViolation::kInputCount;
    report.detail = std::to_string(b.inputs.size()) +
                    " tensors enter the set; exactly one is required";
    return report;
  }
  report.input = b.inputs.front();
  if (b.outputs.size() != 1) {
    report.violation = IsolationViolation::kOutputCount;
    report.detail = std::to_string(b.outputs.size()) +
                    " tensors leave the set; exactly one is required";
    return report;
  }
  report.output = b.outputs.front();
  for (OpId c : g.tensor(report.input).consumers) {
    if (!set.test(c.index())) {
      report.violation = IsolationViolation::kInputConsumedOutside;
      report.detail = "input tensor '" + g.tensor(report.input).name +
                      "' is also read by '" + g.op(c).name + "'";
      return report;
    }
  }
  if (g.tensor(report.input).pinned) {
    report.violation = IsolationViolation::kInputConsumedOutside;
    report.detail = "input tensor '" + g.tensor(report.input).name +
                    "' must stay resident after the set";
    return report;
  }
  report.isolated = true;
  return report;
}

bool IsConvex(const ComputationGraph& g, const DynamicBitset& set) {
  // Walk forward from every edge that leaves the set; reaching a member again
  // means a path exits and re-enters.
  const size_t n = g.num_ops();
  std::vector<bool> seen(n, false);
  std::vector<OpId> stack;
  set.ForEach([&](size_t u) {
    for (OpId s : g.successors(OpId(u))) {
      if (!set.test(s.index()) && !seen[s.index()]) {
        seen[s.index()] = true;
        stack.push_back(s);
      }
    }
  });
  while (!stack.empty()) {
    OpId v = stack.back();
    stack.pop_back();
    for (OpId s : g.successors(v)) {
      if (set.test(s.index())) return false;
      if (!seen[s.index()]) {
        seen[s.index()] = true;
        stack.push_back(s);
      }
    }
  }
  return true;
}

ExtractedSubgraph ExtractSubgraph(const ComputationGraph& g,
                                  const DynamicBitset& set,
                                  std::span<const TensorId> extra_pins) {
  ExtractedSubgraph out;
  Boundary b = ComputeBoundary(g, set);
  GraphBuilder builder(g.unit());
  for (TensorId t : b.inputs) {
    builder.AddInput(g.tensor(t).name, g.tensor(t).size);
  }
  set.ForEach([&](size_t u) {
    const OperatorSpec& op = g.op(OpId(u));
    std::vector<std::string> inputs;
    inputs.reserve(op.inputs.size());
    for (TensorId t : op.inputs) inputs.push_back(g.tensor(t).name);
    builder.AddOperator(op.name, std::move(inputs), g.tensor(op.output).name,
                        g.tensor(op.output).size, op.extra_size, op.label);
    out.to_parent.emplace_back(u);
  });
  for (TensorId t : b.outputs) builder.Pin(g.tensor(t).name);
  for (TensorId t : extra_pins) {
    const TensorSpec& spec = g.tensor(t);
    bool present = (spec.producer && set.test(spec.producer->index())) ||
                   std::binary_search(b.inputs.begin(), b.inputs.end(), t);
    if (present) builder.Pin(spec.name);
  }
  out.graph = builder.Build();
  return out;
}

}  // namespace memsched
