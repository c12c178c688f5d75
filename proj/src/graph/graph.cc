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

#include "memsched/graph.h"

#include <algorithm>
#include <queue>
#include <string>
#include <utility>

#include "memsched/error.h"

namespace memsched {
namespace {

// Returns the operator names along one directed cycle among `remaining`
// (operators Kahn's algorithm could not place).
std::vector<std::string> FindCycle(const ComputationGraph& g,
                                   const std::vector<bool>& remaining) {
  const size_t n = g.num_ops();
  // 0 = unvisited, 1 = on stack, 2 = done.
  std::vector<int> state(n, 0);
  std::vector<uint32_t> parent(n, OpId::kInvalid);
  for (size_t root = 0; root < n; ++root) {
    if (!remaining[root] || state[root] != 0) continue;
    std::vector<std::pair<uint32_t, size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      auto succs = g.successors(OpId(node));
      if (next == succs.size()) {
        state[node] = 2;
        stack.pop_back();
        continue;
      }
      uint32_t s = succs[next++].value();
      if (!remaining[s]) continue;
      if (state[s] == 1) {
        std::vector<std::string> cycle{g.op(OpId(s)).name};
        for (uint32_t v = node; v != s; v = parent[v]) {
          cycle.push_back(g.op(OpId(v)).name);
        }
        std::reverse(cycle.begin() + 1, cycle.end());
        return cycle;
      }
      if (state[s] == 0) {
        state[s] = 1;
        parent[s] = node;
        stack.emplace_back(s, 0);
      }
    }
  }
  return {};
}

}  // namespace

GraphBuilder::GraphBuilder(std::string unit) : unit_(std::move(unit)) {}

void GraphBuilder::AddInput(std::string name, int64_t size) {
  inputs_.emplace_back(std::move(name), size);
}

void GraphBuilder::AddOperator(std::string name,
                               std::vector<std::string> inputs,
                               std::string output, int64_t output_size,
                               int64_t extra_size, std::string label) {
  ops_.push_back(PendingOp{std::move(name), std::move(label),
                           std::move(inputs), std::move(output), output_size,
                           extra_size});
}

void GraphBuilder::Pin(std::string tensor) {
  pinned_.push_back(std::move(tensor));
}

ComputationGraph GraphBuilder::Build() const {
  ComputationGraph g;
  g.unit_ = unit_;
  const size_t n = ops_.size();

  g.ops_.reserve(n);
  g.tensors_.reserve(n + inputs_.size());
  for (size_t i = 0; i < n; ++i) {
    const PendingOp& p = ops_[i];
    if (!g.op_index_.emplace(p.name, static_cast<uint32_t>(i)).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate operator id '" + p.name + "'");
    }
    if (p.output_size < 0) {
      throw Error(ErrorCode::kNegativeSize,
                  "tensor '" + p.output + "' has negative size " +
                      std::to_string(p.output_size));
    }
    TensorSpec t;
    t.name = p.output;
    t.size = p.output_size;
    t.producer = OpId(i);
    g.tensors_.push_back(std::move(t));
  }
  for (const auto& [name, size] : inputs_) {
    if (size < 0) {
      throw Error(ErrorCode::kNegativeSize,
                  "tensor '" + name + "' has negative size " +
                      std::to_string(size));
    }
    TensorSpec t;
    t.name = name;
    t.size = size;
    g.input_tensors_.emplace_back(g.tensors_.size());
    g.tensors_.push_back(std::move(t));
  }
  for (size_t t = 0; t < g.tensors_.size(); ++t) {
    if (!g.tensor_index_.emplace(g.tensors_[t].name, static_cast<uint32_t>(t))
             .second) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate tensor id '" + g.tensors_[t].name + "'");
    }
  }

  g.preds_.assign(n, {});
  g.succs_.assign(n, {});
  for (size_t i = 0; i < n; ++i) {
    const PendingOp& p = ops_[i];
    OperatorSpec op;
    op.name = p.name;
    op.label = p.label;
    op.output = TensorId(i);
    op.extra_size = p.extra_size;
    for (const std::string& in : p.inputs) {
      auto it = g.tensor_index_.find(in);
      if (it == g.tensor_index_.end()) {
        throw Error(ErrorCode::kDanglingReference,
                    "operator '" + p.name + "' reads unknown tensor '" + in +
                        "'");
      }
      TensorId tid(it->second);
      if (std::find(op.inputs.begin(), op.inputs.end(), tid) !=
          op.inputs.end()) {
        continue;
      }
      op.inputs.push_back(tid);
      g.tensors_[tid.index()].consumers.push_back(OpId(i));
      if (const auto& prod = g.tensors_[tid.index()].producer) {
        g.preds_[i].push_back(*prod);
        g.succs_[prod->index()].push_back(OpId(i));
      }
    }
    g.ops_.push_back(std::move(op));
  }
  for (auto* lists : {&g.preds_, &g.succs_}) {
    for (auto& l : *lists) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
  }

  for (const std::string& name : pinned_) {
    auto it = g.tensor_index_.find(name);
    if (it == g.tensor_index_.end()) {
      throw Error(ErrorCode::kDanglingReference,
                  "pinned tensor '" + name + "' does not exist");
    }
    g.tensors_[it->second].pinned = true;
  }
  for (size_t t = 0; t < g.tensors_.size(); ++t) {
    TensorSpec& spec = g.tensors_[t];
    if (spec.consumers.empty()) spec.pinned = true;
    if (spec.pinned) g.output_tensors_.emplace_back(t);
  }

  // Kahn pass purely for cycle detection.
  std::vector<size_t> indegree(n);
  for (size_t i = 0; i < n; ++i) indegree[i] = g.preds_[i].size();
  std::queue<size_t> ready;
  for (size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  size_t placed = 0;
  std::vector<bool> remaining(n, true);
  while (!ready.empty()) {
    size_t v = ready.front();
    ready.pop();
    remaining[v] = false;
    ++placed;
    for (OpId s : g.succs_[v]) {
      if (--indegree[s.index()] == 0) ready.push(s.index());
    }
  }
  if (placed != n) {
    std::vector<std::string> cycle = FindCycle(g, remaining);
    std::string msg = "cycle detected:";
    for (const std::string& name : cycle) msg += " " + name + " ->";
    msg += " " + (cycle.empty() ? std::string("?") : cycle.front());
    throw Error(ErrorCode::kCycleDetected, msg);
  }
  return g;
}

std::optional<OpId> ComputationGraph::FindOp(std::string_view name) const {
  auto it = op_index_.find(std::string(name));
  if (it == op_index_.end()) return std::nullopt;
  return OpId(it->second);
}

std::optional<TensorId> ComputationGraph::FindTensor(
    std::string_view name) const {
  auto it = tensor_index_.find(std::string(name));
  if (it == tensor_index_.end()) return std::nullopt;
  return TensorId(it->second);
}

std::vector<OpId> ComputationGraph::TopologicalOrder() const {
  const size_t n = num_ops();
  std::vector<size_t> indegree(n);
  std::priority_queue<uint32_t, std::vector<uint32_t>, std::greater<>> ready;
  for (size_t i = 0; i < n; ++i) {
    indegree[i] = preds_[i].size();
    if (indegree[i] == 0) ready.push(static_cast<uint32_t>(i));
  }
  std::vector<OpId> order;
  order.reserve(n);
  while (!ready.empty()) {
    uint32_t v = ready.top();
    ready.pop();
    order.emplace_back(v);
    for (OpId s : succs_[v]) {
      if (--indegree[s.index()] == 0) ready.push(s.value());
    }
  }
  return order;
}

int64_t ComputationGraph::WorkingSet(OpId id) const {
  const OperatorSpec& o = op(id);
  int64_t total = tensor(o.output).size + o.extra_size;
  for (TensorId in : o.inputs) total += tensor(in).size;
  return total;
}

int64_t ComputationGraph::TotalInputSize() const {
  int64_t total = 0;
  for (TensorId t : input_tensors_) total += tensor(t).size;
  return total;
}

int64_t ComputationGraph::TotalOutputSize() const {
  int64_t total = 0;
  for (TensorId t : output_tensors_) total += tensor(t).size;
  return total;
}

}  // namespace memsched
