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

#ifndef MEMSCHED_GRAPH_IO_H_
#define MEMSCHED_GRAPH_IO_H_

#include <filesystem>
#include <string_view>

#include "memsched/graph.h"
#include <nlohmann/json.hpp>

namespace memsched {

// Graph document:
//   { "unit": "KB",
//     "inputs":    [ {"id": "x", "size": 8}, ... ],
//     "operators": [ {"id": "a", "name": "conv", "inputs": ["x"],
//                     "output": {"id": "A", "size": 4}, "extra_size": 0 },
//                    ... ] }
// Operators producing more than one tensor are rejected; split them upstream.
ComputationGraph LoadGraph(const nlohmann::json& document);
ComputationGraph LoadGraphFromString(std::string_view text);
ComputationGraph LoadGraphFromFile(const std::filesystem::path& path);

// Inverse of LoadGraph for graphs whose extra sizes are non-negative.
nlohmann::json GraphToJson(const ComputationGraph& g);
void WriteGraphFile(const ComputationGraph& g,
                    const std::filesystem::path& path);

}  // namespace memsched

#endif  // MEMSCHED_GRAPH_IO_H_
