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

#ifndef MEMSCHED_FUSION_H_
#define MEMSCHED_FUSION_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "memsched/footprint.h"
#include "memsched/graph.h"
#include "memsched/solver.h"

namespace memsched {

// A contracted subgraph. The hypernode is an ordinary operator whose extra
// size is mem_g - input_size - output_size, so every evaluator that handles
// workspace handles hypernodes too.
struct FusionRecord {
  std::string hypernode;
  // Original operators in frozen execution order.
  std::vector<OpId> members;
  // Peak stable footprint of the frozen order with the boundary input as the
  // only graph input.
  int64_t mem_g = 0;
  int64_t input_size = 0;
  int64_t output_size = 0;
  // Transient profile of the frozen order over the fused members, t^0..t^k.
  std::vector<int64_t> internal_transient;
  // Driver cycle that created the record, 0 for direct Fuse calls.
  size_t cycle = 0;
};

// Footprint while a hypernode runs: `live_context` covers every tensor live
// across its step, including its input and output. Throws
// Error{kNegativeFootprint} for records whose peak cannot hold the boundary.
int64_t HypernodeStableFootprint(const FusionRecord& record,
                                 int64_t live_context);

namespace internal {
class FusionBuilder;
}  // namespace internal

// A graph after zero or more contractions, with the way back to the
// original operators.
class FusedGraph {
 public:
  explicit FusedGraph(ComputationGraph original);

  const ComputationGraph& graph() const { return graph_; }
  const ComputationGraph& original() const { return *original_; }

  // Original operators covered by `v`, in execution order.
  std::span<const OpId> members(OpId v) const { return members_[v.index()]; }
  // Null when `v` is an original operator.
  const FusionRecord* record(OpId v) const;
  // Every contraction performed, oldest first. Records of hypernodes later
  // absorbed into larger ones stay in the history.
  const std::vector<FusionRecord>& history() const { return history_; }
  size_t num_fusions() const { return history_.size(); }

  // Replaces every hypernode by its frozen order.
  Schedule Expand(const Schedule& fused) const;

 private:
  friend class internal::FusionBuilder;

  std::shared_ptr<const ComputationGraph> original_;
  ComputationGraph graph_;
  std::vector<std::vector<OpId>> members_;
  // Per fused operator: index into history_, or -1.
  std::vector<int64_t> record_of_;
  std::vector<FusionRecord> history_;
};

enum class Monotonicity { kIncreasing, kDecreasing, kConstant };

std::string_view MonotonicityName(Monotonicity m);

struct FusionCheck {
  bool fusable = false;
  // Set by the chain check when it succeeds.
  std::optional<Monotonicity> direction;
  // Failure class: "not-isolated", "input-shared", "not-monotone",
  // "interior-dip-below-input", "interior-dip-below-output", "too-large",
  // "not-convex", "solver-limit".
  std::string reason;
  std::string detail;
  // Members in the order to freeze, as ids of the checked graph.
  Schedule internal;
  int64_t mem_g = 0;
  std::vector<int64_t> transient;
};

// Chain test: each operator after the first reads only its predecessor's
// output, which nobody else reads. Throws Error{kNotLinear} otherwise.
// Succeeds when the boundary input is private to the chain and the
// transient profile is monotone with the stable profile bounded by its last
// (increasing) or first (decreasing) step.
FusionCheck CheckMonotonicLinear(const ComputationGraph& g,
                                 std::span<const OpId> chain);

// Isolated-set test. The set must have one private input and one output,
// and every partial execution of it must keep at least as much resident as
// either boundary tensor. The frozen order is an optimal internal schedule.
FusionCheck CheckGeneralFusable(const ComputationGraph& g,
                                std::span<const OpId> set);

// Upper bound on the partial executions CheckGeneralFusable enumerates.
inline constexpr size_t kMaxFusionIdeals = size_t{1} << 18;

// Contracts `set` of fg.graph() into one hypernode frozen to `internal`.
// Throws Error{kWouldCreateCycle} when contraction would close a cycle and
// Error{kCheckFailed} when neither check accepts the set or `internal` is
// not an optimal legal order of it.
FusedGraph Fuse(const FusedGraph& fg, std::span<const OpId> set,
                const Schedule& internal);
FusedGraph Fuse(const ComputationGraph& g, std::span<const OpId> set,
                const Schedule& internal);

struct FusionOptions {
  // Largest candidate, counted in operators of the current graph.
  size_t max_subgraph_size = 20;
  size_t max_cycles = 1000;
};

// Repeats fusion sweeps until one makes no change.
FusedGraph IterativeFusion(const ComputationGraph& g,
                           const FusionOptions& options = {});
FusedGraph IterativeFusion(const FusedGraph& fg,
                           const FusionOptions& options = {});

// [{"hypernode","members":[names],"mem_g","cycle"}, ...] for the hypernodes
// present in fg.graph().
nlohmann::json FusionReportJson(const FusedGraph& fg);

}  // namespace memsched

#endif  // MEMSCHED_FUSION_H_
