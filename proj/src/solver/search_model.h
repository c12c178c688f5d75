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

#ifndef MEMSCHED_SOLVER_SEARCH_MODEL_H_
#define MEMSCHED_SOLVER_SEARCH_MODEL_H_

#include <cstdint>
#include <vector>

#include "memsched/graph.h"

namespace memsched::internal {

// Flattened view of a graph for the state-space search. Executed-operator
// sets are word arrays of `words` uint64s.
struct SearchModel {
  explicit SearchModel(const ComputationGraph& g);

  bool Executed(const uint64_t* set, size_t v) const {
    return (set[v / 64] >> (v % 64)) & 1U;
  }
  bool Ready(const uint64_t* set, size_t v) const;

  // Resident memory after running `v` from `set` (which excludes v), given
  // the resident memory `live` before it.
  int64_t LiveAfter(const uint64_t* set, size_t v, int64_t live) const;
  // Memory while `v` runs.
  int64_t Stable(size_t v, int64_t live) const {
    return live + out_size[v] + extra[v];
  }
  // Lower bound on the peak of any completion of `set`.
  int64_t RemainingBound(const uint64_t* set, size_t executed) const;

  size_t n = 0;
  size_t words = 0;
  std::vector<uint64_t> pred_mask;      // n * words
  std::vector<uint64_t> consumer_mask;  // per freeable input slot, * words
  std::vector<int64_t> out_size;
  std::vector<int64_t> extra;
  // Per operator: [begin, end) into freeable_* for inputs that may be freed.
  std::vector<uint32_t> freeable_begin;
  std::vector<int64_t> freeable_size;
  int64_t initial_live = 0;
  int64_t output_total = 0;
  std::vector<uint32_t> by_working_set;  // descending working set
  std::vector<int64_t> working_set;
};

}  // namespace memsched::internal

#endif  // MEMSCHED_SOLVER_SEARCH_MODEL_H_
