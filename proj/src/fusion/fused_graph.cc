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

#include <string>
#include <utility>

#include "fusion_builder.h"
#include "memsched/error.h"
#include "memsched/fusion.h"
#include "memsched/subgraph.h"

namespace memsched {

int64_t HypernodeStableFootprint(const FusionRecord& record,
                                 int64_t live_context) {
  if (record.mem_g < record.input_size || record.mem_g < record.output_size) {
    throw Error(ErrorCode::kNegativeFootprint,
                "hypernode '" + record.hypernode + "' has internal peak " +
                    std::to_string(record.mem_g) +
                    " below its boundary tensors");
  }
  int64_t value =
      live_context + record.mem_g - record.input_size - record.output_size;
  if (value < 0) {
    throw Error(ErrorCode::kNegativeFootprint,
                "hypernode '" + record.hypernode + "' footprint is " +
                    std::to_string(value) + " for context " +
                    std::to_string(live_context));
  }
  return value;
}

FusedGraph::FusedGraph(ComputationGraph original)
    : original_(std::make_shared<const ComputationGraph>(std::move(original))),
      graph_(*original_) {
  members_.resize(graph_.num_ops());
  for (size_t v = 0; v < graph_.num_ops(); ++v) members_[v] = {OpId(v)};
  record_of_.assign(graph_.num_ops(), -1);
}

const FusionRecord* FusedGraph::record(OpId v) const {
  int64_t idx = record_of_[v.index()];
  return idx < 0 ? nullptr : &history_[static_cast<size_t>(idx)];
}

Schedule FusedGraph::Expand(const Schedule& fused) const {
  ValidateSchedule(graph_, fused);
  std::vector<OpId> order;
  order.reserve(original_->num_ops());
  for (OpId v : fused.order()) {
    for (OpId m : members_[v.index()]) order.push_back(m);
  }
  return Schedule(std::move(order));
}

std::string_view MonotonicityName(Monotonicity m) {
  switch (m) {
    case Monotonicity::kIncreasing: return "increasing";
    case Monotonicity::kDecreasing: return "decreasing";
    case Monotonicity::kConstant: return "constant";
  }
  return "unknown";
}

namespace internal {

FusedGraph FusionBuilder::Contract(const FusedGraph& fg,
                                   std::span<const OpId> set,
                                   const Schedule& internal, int64_t mem_g,
                                   std::vector<int64_t> transient,
                                   size_t cycle) {
  const ComputationGraph& g = fg.graph();
  DynamicBitset in_set = VertexSet(g, set);
  Boundary boundary = ComputeBoundary(g, in_set);
  const TensorSpec& input = g.tensor(boundary.inputs.front());
  const TensorId out_id = boundary.outputs.front();
  const TensorSpec& output = g.tensor(out_id);

  std::string name = "fused" + std::to_string(fg.history_.size());
  while (g.FindOp(name)) name += "_";

  FusionRecord record;
  record.hypernode = name;
  record.mem_g = mem_g;
  record.input_size = input.size;
  record.output_size = output.size;
  record.internal_transient = std::move(transient);
  record.cycle = cycle;
  for (OpId v : internal.order()) {
    for (OpId m : fg.members_[v.index()]) record.members.push_back(m);
  }

  FusedGraph out = fg;
  out.members_.clear();
  out.record_of_.clear();
  GraphBuilder builder(g.unit());
  for (TensorId t : g.input_tensors()) {
    builder.AddInput(g.tensor(t).name, g.tensor(t).size);
  }
  for (size_t v = 0; v < g.num_ops(); ++v) {
    const OperatorSpec& op = g.op(OpId(v));
    if (in_set.test(v)) {
      if (op.output != out_id) continue;
      builder.AddOperator(name, {input.name}, output.name, output.size,
                          mem_g - input.size - output.size, "hypernode");
      out.members_.push_back(record.members);
      out.record_of_.push_back(static_cast<int64_t>(fg.history_.size()));
      continue;
    }
    std::vector<std::string> inputs;
    for (TensorId t : op.inputs) inputs.push_back(g.tensor(t).name);
    builder.AddOperator(op.name, std::move(inputs), g.tensor(op.output).name,
                        g.tensor(op.output).size, op.extra_size, op.label);
    out.members_.push_back(fg.members_[v]);
    out.record_of_.push_back(fg.record_of_[v]);
  }
  for (TensorId t : g.output_tensors()) {
    const TensorSpec& spec = g.tensor(t);
    bool internal_tensor = spec.producer && in_set.test(spec.producer->index())
                           && t != out_id;
    if (!internal_tensor) builder.Pin(spec.name);
  }
  out.graph_ = builder.Build();
  out.history_.push_back(std::move(record));
  return out;
}

}  // namespace internal

FusedGraph Fuse(const ComputationGraph& g, std::span<const OpId> set,
                const Schedule& internal) {
  return Fuse(FusedGraph(g), set, internal);
}

FusedGraph Fuse(const FusedGraph& fg, std::span<const OpId> set,
                const Schedule& internal) {
  const ComputationGraph& g = fg.graph();
  DynamicBitset in_set = VertexSet(g, set);
  if (!IsConvex(g, in_set)) {
    throw Error(ErrorCode::kWouldCreateCycle,
                "contracting the set would close a cycle through an outside "
                "operator");
  }
  // The frozen order must be a legal order of exactly the set.
  DynamicBitset seen(g.num_ops());
  for (OpId v : internal.order()) {
    if (!v.valid() || v.index() >= g.num_ops() || !in_set.test(v.index()) ||
        seen.test(v.index())) {
      throw Error(ErrorCode::kCheckFailed,
                  "internal schedule is not an ordering of the set");
    }
    for (OpId p : g.predecessors(v)) {
      if (in_set.test(p.index()) && !seen.test(p.index())) {
        throw Error(ErrorCode::kCheckFailed,
                    "internal schedule runs '" + g.op(v).name +
                        "' before its producer '" + g.op(p).name + "'");
      }
    }
    seen.set(v.index());
  }
  if (seen.count() != in_set.count()) {
    throw Error(ErrorCode::kCheckFailed,
                "internal schedule does not cover the set");
  }

  // A linear chain in the given order may pass the monotone test; otherwise
  // the general test decides.
  FusionCheck check;
  bool linear = true;
  try {
    check = CheckMonotonicLinear(g, internal.order());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotLinear) throw;
    linear = false;
  }
  if (!linear || !check.fusable) {
    FusionCheck general = CheckGeneralFusable(g, set);
    if (!general.fusable && linear && check.reason != "not-monotone") {
      general = check;
    }
    check = std::move(general);
  }
  if (!check.fusable) {
    throw Error(ErrorCode::kCheckFailed,
                "set is not fusable: " + check.reason +
                    (check.detail.empty() ? "" : " (" + check.detail + ")"));
  }

  // Freeze the caller's order only if it attains the optimal internal peak.
  ExtractedSubgraph sub = ExtractSubgraph(g, in_set);
  std::vector<OpId> local;
  for (OpId v : internal.order()) {
    for (size_t k = 0; k < sub.to_parent.size(); ++k) {
      if (sub.to_parent[k] == v) local.emplace_back(k);
    }
  }
  FootprintTrace trace = Evaluate(sub.graph, Schedule(local));
  if (trace.peak != check.mem_g) {
    throw Error(ErrorCode::kCheckFailed,
                "internal schedule peak " + std::to_string(trace.peak) +
                    " exceeds the optimal " + std::to_string(check.mem_g));
  }
  return internal::FusionBuilder::Contract(fg, set, internal, trace.peak,
                                           std::move(trace.transient), 0);
}

nlohmann::json FusionReportJson(const FusedGraph& fg) {
  nlohmann::json out = nlohmann::json::array();
  const ComputationGraph& g = fg.graph();
  for (size_t v = 0; v < g.num_ops(); ++v) {
    const FusionRecord* r = fg.record(OpId(v));
    if (r == nullptr) continue;
    nlohmann::json members = nlohmann::json::array();
    for (OpId m : r->members) members.push_back(fg.original().op(m).name);
    out.push_back({{"hypernode", r->hypernode},
                   {"members", std::move(members)},
                   {"mem_g", r->mem_g},
                   {"cycle", r->cycle}});
  }
  return out;
}

}  // namespace memsched
