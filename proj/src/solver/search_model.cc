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

#include "search_model.h"

#include <algorithm>
#include <numeric>

namespace memsched::internal {

SearchModel::SearchModel(const ComputationGraph& g)
    : n(g.num_ops()), words((g.num_ops() + 63) / 64) {
  pred_mask.assign(n * words, 0);
  out_size.resize(n);
  extra.resize(n);
  working_set.resize(n);
  freeable_begin.reserve(n + 1);
  for (size_t v = 0; v < n; ++v) {
    OpId id(v);
    for (OpId p : g.predecessors(id)) {
      pred_mask[v * words + p.index() / 64] |= uint64_t{1} << (p.index() % 64);
    }
    out_size[v] = g.tensor(ComputationGraph::OutputOf(id)).size;
    extra[v] = g.op(id).extra_size;
    working_set[v] = g.WorkingSet(id);
    freeable_begin.push_back(static_cast<uint32_t>(freeable_size.size()));
    for (TensorId t : g.op(id).inputs) {
      const TensorSpec& spec = g.tensor(t);
      if (spec.pinned) continue;
      freeable_size.push_back(spec.size);
      size_t base = consumer_mask.size();
      consumer_mask.resize(base + words, 0);
      for (OpId c : spec.consumers) {
        consumer_mask[base + c.index() / 64] |= uint64_t{1} << (c.index() % 64);
      }
    }
  }
  freeable_begin.push_back(static_cast<uint32_t>(freeable_size.size()));
  initial_live = g.TotalInputSize();
  output_total = g.TotalOutputSize();
  by_working_set.resize(n);
  std::iota(by_working_set.begin(), by_working_set.end(), 0U);
  std::stable_sort(by_working_set.begin(), by_working_set.end(),
                   [&](uint32_t a, uint32_t b) {
                     return working_set[a] > working_set[b];
                   });
}

bool SearchModel::Ready(const uint64_t* set, size_t v) const {
  if (Executed(set, v)) return false;
  const uint64_t* mask = &pred_mask[v * words];
  for (size_t w = 0; w < words; ++w) {
    if ((mask[w] & ~set[w]) != 0) return false;
  }
  return true;
}

int64_t SearchModel::LiveAfter(const uint64_t* set, size_t v,
                               int64_t live) const {
  live += out_size[v];
  const size_t vw = v / 64;
  const uint64_t vbit = uint64_t{1} << (v % 64);
  for (uint32_t k = freeable_begin[v]; k < freeable_begin[v + 1]; ++k) {
    const uint64_t* mask = &consumer_mask[static_cast<size_t>(k) * words];
    bool all_done = true;
    for (size_t w = 0; w < words; ++w) {
      uint64_t done = set[w] | (w == vw ? vbit : 0);
      if ((mask[w] & ~done) != 0) {
        all_done = false;
        break;
      }
    }
    if (all_done) live -= freeable_size[k];
  }
  return live;
}

int64_t SearchModel::RemainingBound(const uint64_t* set,
                                    size_t executed) const {
  if (executed == n) return 0;
  int64_t bound = output_total;
  for (uint32_t v : by_working_set) {
    if (!Executed(set, v)) {
      bound = std::max(bound, working_set[v]);
      break;
    }
  }
  return bound;
}

}  // namespace memsched::internal
