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

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "memsched/error.h"
#include "memsched/fusion.h"
#include "memsched/solver.h"
#include "memsched/subgraph.h"

namespace memsched {
namespace {

FusionCheck Reject(std::string reason, std::string detail) {
  FusionCheck c;
  c.reason = std::move(reason);
  c.detail = std::move(detail);
  return c;
}

[[noreturn]] void NotLinear(const std::string& detail) {
  throw Error(ErrorCode::kNotLinear, detail);
}

// Resident boundary-relative memory of every partial execution of `sub`.
// Returns the first partial execution whose resident size is below `floor`,
// as a member mask, or nullopt. Sets `overflow` when there are too many.
struct DipSearch {
  std::optional<uint64_t> dip;
  int64_t dip_value = 0;
  bool overflow = false;
};

DipSearch FindDip(const ComputationGraph& sub, int64_t floor) {
  const size_t k = sub.num_ops();
  const uint64_t full = k == 64 ? ~uint64_t{0} : (uint64_t{1} << k) - 1;
  std::vector<uint64_t> pred(k, 0);
  for (size_t v = 0; v < k; ++v) {
    for (OpId p : sub.predecessors(OpId(v))) pred[v] |= uint64_t{1} << p.index();
  }
  struct TensorMasks {
    int64_t size;
    uint64_t producer;  // 0 for graph inputs
    uint64_t readers;
    bool pinned;
  };
  std::vector<TensorMasks> tensors;
  for (const TensorSpec& t : sub.tensors()) {
    TensorMasks m{t.size, 0, 0, t.pinned};
    if (t.producer) m.producer = uint64_t{1} << t.producer->index();
    for (OpId c : t.consumers) m.readers |= uint64_t{1} << c.index();
    tensors.push_back(m);
  }
  auto resident = [&](uint64_t done) {
    int64_t total = 0;
    for (const TensorMasks& t : tensors) {
      bool exists = t.producer == 0 || (done & t.producer) != 0;
      bool needed = t.pinned || (t.readers & ~done) != 0;
      if (exists && needed) total += t.size;
    }
    return total;
  };

  DipSearch result;
  std::unordered_set<uint64_t> seen{0};
  std::vector<uint64_t> frontier{0};
  while (!frontier.empty()) {
    uint64_t done = frontier.back();
    frontier.pop_back();
    if (done != 0 && done != full) {
      int64_t value = resident(done);
      if (value < floor && (!result.dip || done < *result.dip)) {
        result.dip = done;
        result.dip_value = value;
      }
    }
    for (size_t v = 0; v < k; ++v) {
      uint64_t bit = uint64_t{1} << v;
      if ((done & bit) != 0 || (pred[v] & ~done) != 0) continue;
      uint64_t next = done | bit;
      if (seen.insert(next).second) {
        if (seen.size() > kMaxFusionIdeals) {
          result.overflow = true;
          return result;
        }
        frontier.push_back(next);
      }
    }
  }
  return result;
}

}  // namespace

FusionCheck CheckMonotonicLinear(const ComputationGraph& g,
                                 std::span<const OpId> chain) {
  if (chain.size() < 2) NotLinear("a chain needs at least two operators");
  VertexSet(g, chain);  // rejects unknown ids
  const OperatorSpec& first = g.op(chain[0]);
  if (first.inputs.size() != 1) {
    NotLinear("'" + first.name + "' reads " +
              std::to_string(first.inputs.size()) + " tensors");
  }
  for (size_t i = 1; i < chain.size(); ++i) {
    const OperatorSpec& prev = g.op(chain[i - 1]);
    const OperatorSpec& cur = g.op(chain[i]);
    const TensorSpec& link = g.tensor(prev.output);
    if (cur.inputs.size() != 1 || cur.inputs[0] != prev.output) {
      NotLinear("'" + cur.name + "' does not read only '" + link.name + "'");
    }
    if (link.consumers.size() != 1 || link.pinned) {
      NotLinear("'" + link.name + "' is needed outside the chain");
    }
  }

  const TensorSpec& input = g.tensor(first.inputs[0]);
  if (input.pinned || input.consumers.size() != 1) {
    return Reject("input-shared",
                  "'" + input.name + "' is needed outside the chain");
  }

  FusionCheck c;
  c.transient.push_back(input.size);
  std::vector<int64_t> stable;
  for (OpId v : chain) {
    const OperatorSpec& op = g.op(v);
    int64_t out = g.tensor(op.output).size;
    stable.push_back(c.transient.back() + out + op.extra_size);
    c.transient.push_back(out);
  }
  const auto& t = c.transient;
  bool up = std::is_sorted(t.begin(), t.end());
  bool down = std::is_sorted(t.rbegin(), t.rend());
  int64_t peak = *std::max_element(stable.begin(), stable.end());
  bool up_ok = up && peak == stable.back();
  bool down_ok = down && peak == stable.front();

  c.internal = Schedule(std::vector<OpId>(chain.begin(), chain.end()));
  c.mem_g = peak;
  if (up_ok && down_ok) {
    c.direction = Monotonicity::kConstant;
  } else if (up_ok) {
    c.direction = Monotonicity::kIncreasing;
  } else if (down_ok) {
    c.direction = Monotonicity::kDecreasing;
  } else {
    c.reason = "not-monotone";
    c.detail = up || down ? "stable peak is not at the chain boundary"
                          : "transient profile changes direction";
    return c;
  }
  c.fusable = true;
  return c;
}

FusionCheck CheckGeneralFusable(const ComputationGraph& g,
                                std::span<const OpId> set) {
  IsolationReport iso = CheckIsolated(g, set);
  if (!iso.isolated) {
    return Reject("not-isolated",
                  std::string(IsolationViolationName(iso.violation)) + ": " +
                      iso.detail);
  }
  DynamicBitset members = VertexSet(g, set);
  if (!IsConvex(g, members)) {
    return Reject("not-convex", "a path leaves the set and re-enters it");
  }
  if (members.count() > 64) {
    return Reject("too-large",
                  std::to_string(members.count()) + " operators");
  }
  const int64_t in_size = g.tensor(iso.input).size;
  const int64_t out_size = g.tensor(iso.output).size;
  ExtractedSubgraph sub = ExtractSubgraph(g, members);

  DipSearch dip = FindDip(sub.graph, std::max(in_size, out_size));
  if (dip.overflow) {
    return Reject("too-large", "more than " +
                                   std::to_string(kMaxFusionIdeals) +
                                   " partial executions");
  }
  if (dip.dip) {
    std::string names;
    for (size_t v = 0; v < sub.graph.num_ops(); ++v) {
      if ((*dip.dip >> v) & 1U) {
        names += (names.empty() ? "" : ",") + sub.graph.op(OpId(v)).name;
      }
    }
    std::string detail = "after {" + names + "} only " +
                         std::to_string(dip.dip_value) + " stays resident";
    return Reject(dip.dip_value < in_size ? "interior-dip-below-input"
                                          : "interior-dip-below-output",
                  detail);
  }

  SolveResult solved = Solve(sub.graph);
  if (!solved.proven_optimal) {
    return Reject("solver-limit", "internal order not proven optimal");
  }
  FusionCheck c;
  c.fusable = true;
  std::vector<OpId> order;
  for (OpId v : solved.schedule.order()) {
    order.push_back(sub.to_parent[v.index()]);
  }
  c.internal = Schedule(std::move(order));
  c.mem_g = solved.peak;
  c.transient = Evaluate(sub.graph, solved.schedule).transient;
  return c;
}

}  // namespace memsched
