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

#ifndef MEMSCHED_PLOT_DATA_H_
#define MEMSCHED_PLOT_DATA_H_

#include <filesystem>
#include <string>

#include "memsched/bench.h"
#include "memsched/footprint.h"

namespace memsched {

// Tab-separated columns for external plotting.
//   trace:  kind<TAB>step<TAB>value, kind in {stable, transient}
//   bench:  graph<TAB>raw<TAB>fused, one row per distinct graph
std::string PlotData(const FootprintTrace& trace);
std::string PlotData(const BenchReport& report);

// Throws Error{kIoError}.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace memsched

#endif  // MEMSCHED_PLOT_DATA_H_
