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

#include "memsched/reachability.h"

namespace memsched {

Reachability::Reachability(const ComputationGraph& g) {
  const size_t n = g.num_ops();
  ancestors_.assign(n, DynamicBitset(n));
  descendants_.assign(n, DynamicBitset(n));
  const std::vector<OpId> order = g.TopologicalOrder();
  for (OpId v : order) {
    DynamicBitset& anc = ancestors_[v.index()];
    for (OpId p : g.predecessors(v)) {
      anc |= ancestors_[p.index()];
      anc.set(p.index());
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    DynamicBitset& des = descendants_[it->index()];
    for (OpId s : g.successors(*it)) {
      des |= descendants_[s.index()];
      des.set(s.index());
    }
  }
  num_ancestors_.resize(n);
  num_descendants_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    num_ancestors_[i] = ancestors_[i].count();
    num_descendants_[i] = descendants_[i].count();
  }
}

DynamicBitset Reachability::parallel(OpId u) const {
  const size_t n = num_ops();
  DynamicBitset para(n);
  const DynamicBitset& anc = ancestors_[u.index()];
  const DynamicBitset& des = descendants_[u.index()];
  for (size_t v = 0; v < n; ++v) {
    if (v != u.index() && !anc.test(v) && !des.test(v)) para.set(v);
  }
  return para;
}

}  // namespace memsched
