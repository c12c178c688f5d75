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

#ifndef MEMSCHED_GENERATOR_H_
#define MEMSCHED_GENERATOR_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "memsched/graph.h"

namespace memsched {

// A benchmark family plus its parameters. Parameters not given take the
// family defaults:
//   linear             depth=8 size=16
//   residual-chain     blocks=3 size=16
//   parallel-branches  branches=2 depth=2 residual=false size=16
//   nasnet-cell-like   cells=1 size=16 expand=2
//   hrnet-block-like   branches=3 blocks=2 exchange=false stages=1 size=64
//                      expand=1
//   random-dag         n=10 max_fanin=3 window=4 seed=0 extra_prob=0.2
//                      max_size=16
struct GeneratorSpec {
  std::string family;
  nlohmann::json params = nlohmann::json::object();

  // Compact label such as "parallel-branches{branches:4,depth:2}".
  std::string Label() const;
};

const std::vector<std::string>& GeneratorFamilies();

// Throws Error{kInvalidSpec} for unknown families, unknown or mistyped
// parameters and out-of-range values.
ComputationGraph Generate(const GeneratorSpec& spec);

// {"family": F, <params>...}
GeneratorSpec SpecFromJson(const nlohmann::json& doc);
nlohmann::json SpecToJson(const GeneratorSpec& spec);

}  // namespace memsched

#endif  // MEMSCHED_GENERATOR_H_
