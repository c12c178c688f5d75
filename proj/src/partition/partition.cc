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

#include "memsched/partition.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "memsched/error.h"
#include "memsched/footprint.h"
#include "memsched/subgraph.h"

namespace memsched {
namespace {

// Part of every operator, or -1 when unassigned.
std::vector<int64_t> PartOf(const ComputationGraph& g,
                            const std::vector<std::vector<OpId>>& parts) {
  std::vector<int64_t> part(g.num_ops(), -1);
  for (size_t p = 0; p < parts.size(); ++p) {
    for (OpId u : parts[p]) {
      if (u.index() >= g.num_ops()) return {};
      if (part[u.index()] >= 0) return {};
      part[u.index()] = static_cast<int64_t>(p);
    }
  }
  return part;
}

bool Spans(const TensorSpec& t,
           const std::vector<int64_t>& part) {
  int64_t first = -1;
  auto see = [&](OpId u) {
    int64_t p = part[u.index()];
    if (first < 0) first = p;
    return p == first;
  };
  if (t.producer && !see(*t.producer)) return true;
  for (OpId c : t.consumers) {
    if (!see(c)) return true;
  }
  return false;
}

int64_t CutOf(const ComputationGraph& g, const std::vector<int64_t>& part) {
  int64_t cut = 0;
  for (const TensorSpec& t : g.tensors()) {
    if (Spans(t, part)) cut += t.size;
  }
  return cut;
}

std::vector<std::vector<OpId>> Collect(const std::vector<int64_t>& part,
                                       size_t k) {
  std::vector<std::vector<OpId>> parts(k);
  for (size_t u = 0; u < part.size(); ++u) {
    parts[static_cast<size_t>(part[u])].emplace_back(u);
  }
  return parts;
}

std::vector<int64_t> IntervalParts(const Schedule& order, size_t k) {
  const size_t n = order.size();
  std::vector<int64_t> part(n, 0);
  size_t pos = 0;
  for (size_t p = 0; p < k; ++p) {
    size_t len = n / k + (p < n % k ? 1 : 0);
    for (size_t i = 0; i < len; ++i) {
      part[order[pos++].index()] = static_cast<int64_t>(p);
    }
  }
  return part;
}

void CheckK(const ComputationGraph& g, size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (k > g.num_ops()) {
    throw Error(ErrorCode::kInfeasibleBalance,
                std::to_string(k) + " parts requested for " +
                    std::to_string(g.num_ops()) + " operators");
  }
}

PartitionPlan Finish(const ComputationGraph& g, const Schedule& rpo,
                     const std::vector<int64_t>& part, size_t k) {
  PartitionPlan plan;
  plan.parts = Collect(part, k);
  plan.cut_weight = CutOf(g, part);
  plan.peak_part_index =
      static_cast<size_t>(part[PeakOperator(g, rpo).index()]);
  return plan;
}

}  // namespace

BalanceBounds PartitionBalance(size_t n, size_t k, double tolerance) {
  if (k == 0) return {};
  const double ideal = static_cast<double>(n) / static_cast<double>(k);
  BalanceBounds b;
  b.lo = std::max<size_t>(
      1, static_cast<size_t>(std::floor(ideal * (1 - tolerance) + 1e-9)));
  b.lo = std::min(b.lo, n / k);
  b.hi = std::max<size_t>((n + k - 1) / k,
                          static_cast<size_t>(
                              std::floor(ideal * (1 + tolerance) + 1e-9)));
  return b;
}

int64_t CutWeight(const ComputationGraph& g,
                  const std::vector<std::vector<OpId>>& parts) {
  std::vector<int64_t> part = PartOf(g, parts);
  if (part.size() != g.num_ops() ||
      std::count(part.begin(), part.end(), -1) > 0) {
    throw Error(ErrorCode::kInvalidArgument, "parts do not cover the graph");
  }
  return CutOf(g, part);
}

bool IsAcyclicPlan(const ComputationGraph& g,
                   const std::vector<std::vector<OpId>>& parts) {
  std::vector<int64_t> part = PartOf(g, parts);
  if (part.size() != g.num_ops()) return g.num_ops() == 0 && parts.empty();
  if (std::count(part.begin(), part.end(), -1) > 0) return false;
  for (const auto& p : parts) {
    if (p.empty()) return false;
  }
  // Kahn over the quotient graph.
  const size_t k = parts.size();
  std::vector<std::vector<size_t>> succ(k);
  std::vector<size_t> indeg(k, 0);
  for (size_t u = 0; u < g.num_ops(); ++u) {
    for (OpId v : g.successors(OpId(u))) {
      size_t a = static_cast<size_t>(part[u]);
      size_t b = static_cast<size_t>(part[v.index()]);
      if (a == b) continue;
      succ[a].push_back(b);
      ++indeg[b];
    }
  }
  std::vector<size_t> ready;
  for (size_t p = 0; p < k; ++p) {
    if (indeg[p] == 0) ready.push_back(p);
  }
  size_t seen = 0;
  while (!ready.empty()) {
    size_t p = ready.back();
    ready.pop_back();
    ++seen;
    for (size_t q : succ[p]) {
      if (--indeg[q] == 0) ready.push_back(q);
    }
  }
  return seen == k;
}

PartitionPlan NaivePartition(const ComputationGraph& g, size_t k) {
  CheckK(g, k);
  Schedule rpo = RpoSchedule(g);
  return Finish(g, rpo, IntervalParts(rpo, k), k);
}

PartitionPlan AcyclicPartition(const ComputationGraph& g, size_t k) {
  CheckK(g, k);
  Schedule rpo = RpoSchedule(g);
  std::vector<int64_t> part = IntervalParts(rpo, k);
  BalanceBounds bounds = PartitionBalance(g.num_ops(), k);
  std::vector<size_t> count(k, 0);
  for (int64_t p : part) ++count[static_cast<size_t>(p)];

  // Cut contribution of the tensors touching u.
  auto local_cut = [&](OpId u) {
    int64_t cut = 0;
    const OperatorSpec& op = g.op(u);
    if (Spans(g.tensor(op.output), part)) cut += g.tensor(op.output).size;
    for (TensorId t : op.inputs) {
      if (Spans(g.tensor(t), part)) cut += g.tensor(t).size;
    }
    return cut;
  };
  auto can_move = [&](OpId u, int64_t to) {
    if (to < 0 || to >= static_cast<int64_t>(k)) return false;
    int64_t from = part[u.index()];
    if (count[static_cast<size_t>(from)] <= bounds.lo) return false;
    if (count[static_cast<size_t>(to)] >= bounds.hi) return false;
    if (to > from) {
      for (OpId v : g.successors(u)) {
        if (part[v.index()] < to) return false;
      }
    } else {
      for (OpId v : g.predecessors(u)) {
        if (part[v.index()] > to) return false;
      }
    }
    return true;
  };

  bool improved = true;
  while (improved) {
    improved = false;
    for (OpId u : rpo.order()) {
      const int64_t from = part[u.index()];
      const int64_t before = local_cut(u);
      int64_t best_gain = 0;
      int64_t best_to = from;
      for (int64_t to : {from - 1, from + 1}) {
        if (!can_move(u, to)) continue;
        part[u.index()] = to;
        int64_t gain = before - local_cut(u);
        part[u.index()] = from;
        if (gain > best_gain) {
          best_gain = gain;
          best_to = to;
        }
      }
      if (best_to != from) {
        part[u.index()] = best_to;
        --count[static_cast<size_t>(from)];
        ++count[static_cast<size_t>(best_to)];
        improved = true;
      }
    }
  }
  return Finish(g, rpo, part, k);
}

PartitionPlan AcyclicPartition(const FusedGraph& fg, size_t k) {
  return AcyclicPartition(fg.graph(), k);
}

nlohmann::json PlanToJson(const ComputationGraph& g,
                          const PartitionPlan& plan) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : plan.parts) {
    nlohmann::json names = nlohmann::json::array();
    for (OpId u : p) names.push_back(g.op(u).name);
    parts.push_back(std::move(names));
  }
  return {{"parts", std::move(parts)},
          {"cut_weight", plan.cut_weight},
          {"peak_part_index", plan.peak_part_index}};
}

PartitionedResult PartitionedScheduleDetailed(const ComputationGraph& g,
                                              size_t k,
                                              const SolverConfig& cfg,
                                              size_t max_fuse) {
  const auto start = std::chrono::steady_clock::now();
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  PartitionedResult out;
  FusionOptions fusion;
  fusion.max_subgraph_size = max_fuse;
  FusedGraph fg = IterativeFusion(g, fusion);
  const ComputationGraph& h = fg.graph();
  out.fused_ops = h.num_ops();
  if (h.num_ops() == 0) {
    out.result.proven_optimal = true;
    return out;
  }
  k = std::min(k, h.num_ops());
  out.plan = AcyclicPartition(h, k);

  std::vector<size_t> part_of(h.num_ops());
  for (size_t p = 0; p < out.plan.parts.size(); ++p) {
    for (OpId u : out.plan.parts[p]) part_of[u.index()] = p;
  }
  std::vector<OpId> fused_order;
  fused_order.reserve(h.num_ops());
  bool proven = true;
  for (size_t p = 0; p < out.plan.parts.size(); ++p) {
    const auto& members = out.plan.parts[p];
    DynamicBitset set = VertexSet(h, members);
    std::vector<TensorId> pins;
    for (TensorId t : ComputeBoundary(h, set).inputs) {
      const TensorSpec& spec = h.tensor(t);
      bool later = spec.pinned;
      for (OpId c : spec.consumers) later |= part_of[c.index()] > p;
      if (later) pins.push_back(t);
    }
    ExtractedSubgraph sub = ExtractSubgraph(h, set, pins);
    Schedule local;
    if (p == out.plan.peak_part_index) {
      SolveResult r = Solve(sub.graph, cfg);
      local = r.schedule;
      proven = r.proven_optimal;
      out.result.timed_out = r.timed_out;
      out.result.explored_states += r.explored_states;
    } else {
      local = RpoSchedule(sub.graph);
    }
    for (OpId u : local.order()) fused_order.push_back(sub.to_parent[u.index()]);
  }
  out.result.schedule = fg.Expand(Schedule(std::move(fused_order)));
  ValidateSchedule(g, out.result.schedule);
  out.result.peak = Evaluate(g, out.result.schedule).peak;
  out.result.proven_optimal = proven && out.plan.parts.size() == 1;
  out.result.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return out;
}

SolveResult PartitionedSchedule(const ComputationGraph& g, size_t k,
                                const SolverConfig& cfg, size_t max_fuse) {
  return PartitionedScheduleDetailed(g, k, cfg, max_fuse).result;
}

}  // namespace memsched
