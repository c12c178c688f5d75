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

#include "memsched/plot_data.h"

#include <fstream>
#include <set>
#include <sstream>

#include "memsched/error.h"

namespace memsched {

std::string PlotData(const FootprintTrace& trace) {
  std::ostringstream out;
  out << "kind\tstep\tvalue\n";
  for (size_t i = 0; i < trace.stable.size(); ++i) {
    out << "stable\t" << i + 1 << '\t' << trace.stable[i] << '\n';
  }
  for (size_t i = 0; i < trace.transient.size(); ++i) {
    out << "transient\t" << i << '\t' << trace.transient[i] << '\n';
  }
  return out.str();
}

std::string PlotData(const BenchReport& report) {
  std::ostringstream out;
  out << "graph\traw\tfused\n";
  std::set<std::string> seen;
  for (const BenchRow& r : report.rows) {
    if (!seen.insert(r.generator).second) continue;
    out << r.generator << '\t' << r.ops_raw << '\t' << r.ops_fused << '\n';
  }
  return out.str();
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

}  // namespace memsched
