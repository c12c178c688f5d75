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

#ifndef MEMSCHED_SUBGRAPH_H_
#define MEMSCHED_SUBGRAPH_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "memsched/bitset.h"
#include "memsched/graph.h"

namespace memsched {

// Vertex subset plus the operator-level edges with both endpoints inside.
struct SubgraphRef {
  DynamicBitset vertices;
  // (producer, consumer) pairs, ascending.
  std::vector<std::pair<OpId, OpId>> edges;
};

// Throws Error{kUnknownVertex} for ids outside the graph.
DynamicBitset VertexSet(const ComputationGraph& g, std::span<const OpId> ops);

SubgraphRef InducedSubgraph(const ComputationGraph& g,
                            std::span<const OpId> vertices);

// Tensors crossing the boundary of a vertex set.
struct Boundary {
  // Not produced inside, read by at least one member. Ascending.
  std::vector<TensorId> inputs;
  // Produced inside and read outside the set, or pinned. Ascending.
  std::vector<TensorId> outputs;
};

Boundary ComputeBoundary(const ComputationGraph& g, const DynamicBitset& set);

enum class IsolationViolation {
  kNone,
  kEmpty,
  kInputCount,
  kOutputCount,
  kInputConsumedOutside,
};

std::string_view IsolationViolationName(IsolationViolation v);

struct IsolationReport {
  bool isolated = false;
  IsolationViolation violation = IsolationViolation::kNone;
  std::string detail;
  // Valid only when the corresponding count is exactly one.
  TensorId input;
  TensorId output;
};

// A set is isolated when exactly one tensor enters it, exactly one tensor
// leaves it, and every reader of the entering tensor is a member.
IsolationReport CheckIsolated(const ComputationGraph& g,
                              std::span<const OpId> vertices);

// True when no directed path leaves the set and comes back, i.e. contracting
// the set to one node keeps the graph acyclic.
bool IsConvex(const ComputationGraph& g, const DynamicBitset& set);

struct ExtractedSubgraph {
  ComputationGraph graph;
  // Extracted operator id -> operator id in the source graph.
  std::vector<OpId> to_parent;
};

// Materializes the induced subgraph as a standalone graph. Boundary inputs
// become graph inputs; boundary outputs and `extra_pins` stay resident to the
// end. Operators keep their relative id order.
ExtractedSubgraph ExtractSubgraph(const ComputationGraph& g,
                                  const DynamicBitset& set,
                                  std::span<const TensorId> extra_pins = {});

}  // namespace memsched

#endif  // MEMSCHED_SUBGRAPH_H_
