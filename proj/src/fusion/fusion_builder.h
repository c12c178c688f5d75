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

#ifndef MEMSCHED_FUSION_FUSION_BUILDER_H_
#define MEMSCHED_FUSION_FUSION_BUILDER_H_

#include <span>
#include <vector>

#include "memsched/fusion.h"

namespace memsched::internal {

class FusionBuilder {
 public:
  // Contracts `set` without checking it. `internal` lists the members in
  // frozen order using fg.graph() ids.
  static FusedGraph Contract(const FusedGraph& fg, std::span<const OpId> set,
                             const Schedule& internal, int64_t mem_g,
                             std::vector<int64_t> transient, size_t cycle);
};

}  // namespace memsched::internal

#endif  // MEMSCHED_FUSION_FUSION_BUILDER_H_
