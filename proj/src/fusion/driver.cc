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
#include <set>
#include <vector>

#include "fusion_builder.h"
#include "memsched/error.h"
#include "memsched/fusion.h"

namespace memsched {
namespace {

using internal::FusionBuilder;

// Identifies a candidate by the original operators behind each member, so
// a rejection stays valid after unrelated contractions renumber the graph.
using CandidateKey = std::vector<uint32_t>;

CandidateKey KeyOf(const FusedGraph& fg, std::span<const OpId> set) {
  std::vector<std::vector<uint32_t>> groups;
  for (OpId v : set) {
    std::vector<uint32_t> group;
    for (OpId m : fg.members(v)) group.push_back(m.value());
    std::sort(group.begin(), group.end());
    groups.push_back(std::move(group));
  }
  std::sort(groups.begin(), groups.end());
  CandidateKey key;
  for (const auto& group : groups) {
    key.insert(key.end(), group.begin(), group.end());
    key.push_back(OpId::kInvalid);
  }
  return key;
}

class Driver {
 public:
  Driver(FusedGraph fg, const FusionOptions& options)
      : fg_(std::move(fg)), options_(options) {}

  FusedGraph Run() {
    for (size_t cycle = 1; cycle <= options_.max_cycles; ++cycle) {
      cycle_ = cycle;
      bool changed = false;
      for (size_t t = 0; t < fg_.graph().num_tensors();) {
        if (GrowFrom(TensorId(t))) {
          changed = true;
        } else {
          ++t;
        }
      }
      for (size_t v = 0; v < fg_.graph().num_ops();) {
        if (ChainFrom(OpId(v))) {
          changed = true;
        } else {
          ++v;
        }
      }
      if (!changed) break;
    }
    return std::move(fg_);
  }

 private:
  // Tries `set` (a legal order of its members) and contracts it on success.
  bool TryFuse(const std::vector<OpId>& set) {
    CandidateKey key = KeyOf(fg_, set);
    if (rejected_.count(key) != 0) return false;
    const ComputationGraph& g = fg_.graph();
    FusionCheck check;
    try {
      check = CheckMonotonicLinear(g, set);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotLinear) throw;
    }
    if (!check.fusable) check = CheckGeneralFusable(g, set);
    if (!check.fusable) {
      rejected_.insert(std::move(key));
      return false;
    }
    fg_ = FusionBuilder::Contract(fg_, set, check.internal, check.mem_g,
                                  std::move(check.transient), cycle_);
    return true;
  }

  // Grows a set from the readers of `x`, admitting an operator once every
  // tensor it reads is `x` or produced inside. Each point where the set
  // swallows all readers of `x` and leaks exactly one tensor is a candidate;
  // the largest fusable one wins.
  bool GrowFrom(TensorId x) {
    const ComputationGraph& g = fg_.graph();
    const TensorSpec& input = g.tensor(x);
    if (input.pinned || input.consumers.empty()) return false;
    const size_t n = g.num_ops();
    std::vector<bool> inside(n, false);
    std::vector<OpId> order;
    std::vector<std::vector<OpId>> candidates;

    auto readable = [&](TensorId t) {
      if (t == x) return true;
      const auto& p = g.tensor(t).producer;
      return p && inside[p->index()];
    };
    while (order.size() < options_.max_subgraph_size) {
      std::optional<OpId> pick;
      auto consider = [&](OpId c) {
        if (inside[c.index()] || (pick && *pick <= c)) return;
        const OperatorSpec& op = g.op(c);
        if (std::all_of(op.inputs.begin(), op.inputs.end(), readable)) {
          pick = c;
        }
      };
      for (OpId c : input.consumers) consider(c);
      for (OpId m : order) {
        for (OpId c : g.tensor(g.op(m).output).consumers) consider(c);
      }
      if (!pick) break;
      inside[pick->index()] = true;
      order.push_back(*pick);

      if (order.size() < 2) continue;
      bool swallowed = std::all_of(input.consumers.begin(),
                                   input.consumers.end(),
                                   [&](OpId c) { return inside[c.index()]; });
      if (!swallowed) continue;
      size_t leaks = 0;
      for (OpId m : order) {
        const TensorSpec& out = g.tensor(g.op(m).output);
        bool escapes = out.pinned ||
                       std::any_of(out.consumers.begin(), out.consumers.end(),
                                   [&](OpId c) { return !inside[c.index()]; });
        leaks += escapes;
      }
      if (leaks == 1) candidates.push_back(order);
    }
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
      if (TryFuse(*it)) return true;
    }
    return false;
  }

  // Longest fusable prefix of the maximal chain starting at `start`.
  bool ChainFrom(OpId start) {
    const ComputationGraph& g = fg_.graph();
    const OperatorSpec& first = g.op(start);
    if (first.inputs.size() != 1) return false;
    const TensorSpec& input = g.tensor(first.inputs[0]);
    if (input.pinned || input.consumers.size() != 1) return false;
    std::vector<OpId> chain{start};
    while (chain.size() < options_.max_subgraph_size) {
      const TensorSpec& out = g.tensor(g.op(chain.back()).output);
      if (out.pinned || out.consumers.size() != 1) break;
      OpId next = out.consumers[0];
      if (g.op(next).inputs.size() != 1) break;
      chain.push_back(next);
    }
    for (size_t len = chain.size(); len >= 2; --len) {
      if (TryFuse({chain.begin(), chain.begin() + static_cast<ptrdiff_t>(len)})) {
        return true;
      }
    }
    return false;
  }

  FusedGraph fg_;
  FusionOptions options_;
  size_t cycle_ = 0;
  std::set<CandidateKey> rejected_;
};

}  // namespace

FusedGraph IterativeFusion(const ComputationGraph& g,
                           const FusionOptions& options) {
  return IterativeFusion(FusedGraph(g), options);
}

FusedGraph IterativeFusion(const FusedGraph& fg,
                           const FusionOptions& options) {
  if (options.max_subgraph_size < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "maximum subgraph size must be at least 2");
  }
  return Driver(fg, options).Run();
}

}  // namespace memsched
