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

#include <fstream>
#include <string>

#include "memsched/error.h"
#include "memsched/ilp_model.h"

namespace memsched {
namespace {

constexpr size_t kWrapColumn = 72;

// Appends tokens, breaking lines before they pass kWrapColumn.
class LineWriter {
 public:
  explicit LineWriter(std::string& out) : out_(out) {}

  void Start(const std::string& text) {
    out_ += text;
    column_ = text.size();
  }
  void Append(const std::string& token) {
    if (column_ + 1 + token.size() > kWrapColumn && column_ > 4) {
      out_ += "\n   ";
      column_ = 3;
    }
    out_ += ' ';
    out_ += token;
    column_ += 1 + token.size();
  }
  void End() { out_ += '\n'; }

 private:
  std::string& out_;
  size_t column_ = 0;
};

std::string TermText(const IlpModel& model, const Term& t, bool first) {
  std::string sign = t.coef < 0 ? "-" : (first ? "" : "+");
  int64_t mag = t.coef < 0 ? -t.coef : t.coef;
  std::string text = sign.empty() ? "" : sign + " ";
  if (mag != 1) text += std::to_string(mag) + " ";
  return text + model.VariableName(t.var);
}

}  // namespace

std::string ExportLp(const IlpModel& model) {
  std::string out;
  out += "\\ Peak-memory operator scheduling\n";
  out += "\\ operators: " + std::to_string(model.num_ops()) +
         ", tensors: " + std::to_string(model.num_tensors()) +
         ", pruned: " + (model.pruned() ? "yes" : "no") + "\n";
  out += "Minimize\n obj: mem\nSubject To\n";
  LineWriter w(out);
  for (const Constraint& c : model.constraints()) {
    std::vector<Term> kept;
    for (const Term& t : c.terms) {
      if (t.coef != 0 && !model.IsFixed(t.var)) kept.push_back(t);
    }
    const char* sense = c.sense == Sense::kEqual ? "=" : "<=";
    if (kept.empty()) {
      bool holds = c.sense == Sense::kEqual ? c.rhs == 0 : 0 <= c.rhs;
      if (holds) continue;
      // Left in so an infeasible model stays infeasible after export.
      kept.push_back({model.mem(), 0});
    }
    w.Start(" " + c.name + ":");
    for (size_t i = 0; i < kept.size(); ++i) {
      if (kept[i].coef == 0) {
        w.Append("0 " + model.VariableName(kept[i].var));
      } else {
        w.Append(TermText(model, kept[i], i == 0));
      }
    }
    w.Append(sense);
    w.Append(std::to_string(c.rhs));
    w.End();
  }
  out += "Bounds\n mem >= 0\nBinary\n";
  bool any = false;
  for (uint32_t v = 0; v < model.mem(); ++v) {
    if (model.IsFixed(v)) continue;
    if (!any) w.Start("");
    w.Append(model.VariableName(v));
    any = true;
  }
  if (any) w.End();
  out += "End\n";
  return out;
}

void WriteLp(const IlpModel& model, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  }
  file << ExportLp(model);
  if (!file) {
    throw Error(ErrorCode::kIoError, "write to '" + path.string() + "' failed");
  }
}

}  // namespace memsched
