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

#ifndef MEMSCHED_REACHABILITY_H_
#define MEMSCHED_REACHABILITY_H_

#include <cstddef>
#include <vector>

#include "memsched/bitset.h"
#include "memsched/graph.h"

namespace memsched {

// Transitive ancestor/descendant sets for every operator. For each u the
// ancestor, descendant and parallel sets partition V \ {u}.
class Reachability {
 public:
  explicit Reachability(const ComputationGraph& g);

  size_t num_ops() const { return ancestors_.size(); }

  const DynamicBitset& ancestors(OpId u) const { return ancestors_[u.index()]; }
  const DynamicBitset& descendants(OpId u) const {
    return descendants_[u.index()];
  }
  // Neither ancestor, descendant, nor u itself.
  DynamicBitset parallel(OpId u) const;

  size_t num_ancestors(OpId u) const { return num_ancestors_[u.index()]; }
  size_t num_descendants(OpId u) const { return num_descendants_[u.index()]; }

  // True when there is a directed path from `from` to `to`.
  bool Reaches(OpId from, OpId to) const {
    return descendants_[from.index()].test(to.index());
  }

 private:
  std::vector<DynamicBitset> ancestors_;
  std::vector<DynamicBitset> descendants_;
  std::vector<size_t> num_ancestors_;
  std::vector<size_t> num_descendants_;
};

}  // namespace memsched

#endif  // MEMSCHED_REACHABILITY_H_
