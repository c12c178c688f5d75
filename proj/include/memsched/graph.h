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

#ifndef MEMSCHED_GRAPH_H_
#define MEMSCHED_GRAPH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "memsched/ids.h"

namespace memsched {

// A tensor is a hyperedge: one producer (or the graph boundary) and any
// number of consuming operators.
struct TensorSpec {
  std::string name;
  int64_t size = 0;
  // Empty for graph inputs.
  std::optional<OpId> producer;
  // Ascending, without duplicates.
  std::vector<OpId> consumers;
  // Stays resident through the final step. Set for graph outputs (tensors
  // nobody consumes) and for tensors a caller marks as needed downstream.
  bool pinned = false;

  bool is_graph_input() const { return !producer.has_value(); }
};

struct OperatorSpec {
  std::string name;
  std::string label;
  // In first-use order, without duplicates.
  std::vector<TensorId> inputs;
  TensorId output;
  // Workspace beyond inputs and output. Hypernodes carry their internal peak
  // minus boundary sizes here, which may be negative.
  int64_t extra_size = 0;
};

class ComputationGraph;

// Collects operators and tensors by name and produces a validated,
// normalized graph. Operators keep insertion order; the output tensor of the
// operator with id i gets tensor id i and graph inputs follow.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::string unit = "");

  void AddInput(std::string name, int64_t size);
  void AddOperator(std::string name, std::vector<std::string> inputs,
                   std::string output, int64_t output_size,
                   int64_t extra_size = 0, std::string label = "");
  // Keeps `tensor` resident until the end even if it has consumers.
  void Pin(std::string tensor);

  // Throws Error{kDuplicateId, kDanglingReference, kNegativeSize,
  // kCycleDetected}.
  ComputationGraph Build() const;

 private:
  struct PendingOp {
    std::string name;
    std::string label;
    std::vector<std::string> inputs;
    std::string output;
    int64_t output_size;
    int64_t extra_size;
  };

  std::string unit_;
  std::vector<std::pair<std::string, int64_t>> inputs_;
  std::vector<PendingOp> ops_;
  std::vector<std::string> pinned_;
};

// Immutable operator DAG with tensor hyperedges. Safe to share across threads
// once built.
class ComputationGraph {
 public:
  ComputationGraph() = default;

  size_t num_ops() const { return ops_.size(); }
  size_t num_tensors() const { return tensors_.size(); }
  const std::string& unit() const { return unit_; }

  const OperatorSpec& op(OpId id) const { return ops_[id.index()]; }
  const TensorSpec& tensor(TensorId id) const { return tensors_[id.index()]; }
  std::span<const OperatorSpec> ops() const { return ops_; }
  std::span<const TensorSpec> tensors() const { return tensors_; }

  static TensorId OutputOf(OpId id) { return TensorId(id.value()); }

  std::span<const TensorId> input_tensors() const { return input_tensors_; }
  // Pinned tensors, ascending.
  std::span<const TensorId> output_tensors() const { return output_tensors_; }

  // Operator-level precedence: producers of an operator's inputs, and
  // consumers of its output. Ascending, without duplicates.
  std::span<const OpId> predecessors(OpId id) const {
    return preds_[id.index()];
  }
  std::span<const OpId> successors(OpId id) const {
    return succs_[id.index()];
  }

  std::optional<OpId> FindOp(std::string_view name) const;
  std::optional<TensorId> FindTensor(std::string_view name) const;

  // Kahn's algorithm, smallest ready id first.
  std::vector<OpId> TopologicalOrder() const;

  // Sum of the operator's inputs, output and extra size: memory that must be
  // resident while it runs, whatever the schedule.
  int64_t WorkingSet(OpId id) const;

  int64_t TotalInputSize() const;
  int64_t TotalOutputSize() const;

 private:
  friend class GraphBuilder;

  std::string unit_;
  std::vector<OperatorSpec> ops_;
  std::vector<TensorSpec> tensors_;
  std::vector<TensorId> input_tensors_;
  std::vector<TensorId> output_tensors_;
  std::vector<std::vector<OpId>> preds_;
  std::vector<std::vector<OpId>> succs_;
  std::unordered_map<std::string, uint32_t> op_index_;
  std::unordered_map<std::string, uint32_t> tensor_index_;
};

}  // namespace memsched

#endif  // MEMSCHED_GRAPH_H_
