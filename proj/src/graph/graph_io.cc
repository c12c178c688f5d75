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

#include "memsched/graph_io.h"

#include <fstream>
#include <sstream>
#include <string>

#include "memsched/error.h"

namespace memsched {
namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& msg) {
  throw Error(ErrorCode::kInvalidDocument, msg);
}

const json& Field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    Invalid(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

std::string StringField(const json& obj, const char* key,
                        const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_string()) Invalid(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

int64_t IntField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_number_integer()) {
    Invalid(where + ": field '" + key + "' must be an integer");
  }
  return v.get<int64_t>();
}

}  // namespace

ComputationGraph LoadGraph(const json& document) {
  if (!document.is_object()) Invalid("graph document must be a JSON object");
  GraphBuilder builder(document.value("unit", std::string()));

  if (document.contains("inputs")) {
    const json& inputs = document.at("inputs");
    if (!inputs.is_array()) Invalid("'inputs' must be an array");
    for (const json& in : inputs) {
      builder.AddInput(StringField(in, "id", "input"),
                       IntField(in, "size", "input"));
    }
  }

  const json& ops = Field(document, "operators", "graph");
  if (!ops.is_array()) Invalid("'operators' must be an array");
  for (const json& op : ops) {
    std::string id = StringField(op, "id", "operator");
    std::string where = "operator '" + id + "'";
    if (op.contains("outputs")) {
      throw Error(ErrorCode::kMultiOutputOperator,
                  where + " declares 'outputs'; exactly one output tensor is "
                          "supported");
    }
    const json* output = &Field(op, "output", where);
    if (output->is_array()) {
      if (output->size() != 1) {
        throw Error(ErrorCode::kMultiOutputOperator,
                    where + " has " + std::to_string(output->size()) +
                        " output tensors");
      }
      output = &output->front();
    }
    std::vector<std::string> inputs;
    if (op.contains("inputs")) {
      const json& ins = op.at("inputs");
      if (!ins.is_array()) Invalid(where + ": 'inputs' must be an array");
      for (const json& t : ins) {
        if (!t.is_string()) Invalid(where + ": input ids must be strings");
        inputs.push_back(t.get<std::string>());
      }
    }
    int64_t extra = 0;
    if (op.contains("extra_size")) extra = IntField(op, "extra_size", where);
    if (extra < 0) {
      throw Error(ErrorCode::kNegativeSize,
                  where + " has negative extra_size " + std::to_string(extra));
    }
    builder.AddOperator(id, std::move(inputs),
                        StringField(*output, "id", where + " output"),
                        IntField(*output, "size", where + " output"), extra,
                        op.value("name", std::string()));
  }
  return builder.Build();
}

ComputationGraph LoadGraphFromString(std::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) Invalid("graph document is not valid JSON");
  return LoadGraph(doc);
}

ComputationGraph LoadGraphFromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return LoadGraphFromString(buf.str());
}

json GraphToJson(const ComputationGraph& g) {
  json doc;
  doc["unit"] = g.unit();
  json inputs = json::array();
  for (TensorId t : g.input_tensors()) {
    inputs.push_back({{"id", g.tensor(t).name}, {"size", g.tensor(t).size}});
  }
  doc["inputs"] = std::move(inputs);
  json ops = json::array();
  for (const OperatorSpec& op : g.ops()) {
    json ins = json::array();
    for (TensorId t : op.inputs) ins.push_back(g.tensor(t).name);
    ops.push_back({{"id", op.name},
                   {"name", op.label},
                   {"inputs", std::move(ins)},
                   {"output",
                    {{"id", g.tensor(op.output).name},
                     {"size", g.tensor(op.output).size}}},
                   {"extra_size", op.extra_size}});
  }
  doc["operators"] = std::move(ops);
  return doc;
}

void WriteGraphFile(const ComputationGraph& g,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  }
  out << GraphToJson(g).dump(2) << '\n';
}

}  // namespace memsched
