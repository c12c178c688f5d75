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

#include "memsched/generator.h"

#include <algorithm>
#include <random>
#include <set>

#include "memsched/error.h"

namespace memsched {
namespace {

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidSpec, what);
}

// Typed access to the parameter object; remembers which keys were read so
// leftovers can be reported.
class Params {
 public:
  Params(const std::string& family, const nlohmann::json& doc)
      : family_(family), doc_(doc.is_null() ? empty_ : doc) {
    if (!doc_.is_object()) Invalid(family_ + ": parameters must be an object");
  }

  int64_t Int(const std::string& key, int64_t def, int64_t lo, int64_t hi) {
    used_.insert(key);
    if (!doc_.contains(key)) return def;
    const auto& v = doc_.at(key);
    if (!v.is_number_integer()) Invalid(family_ + "." + key + " must be an integer");
    int64_t x = v.get<int64_t>();
    if (x < lo || x > hi) {
      Invalid(family_ + "." + key + "=" + std::to_string(x) + " outside [" +
              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return x;
  }

  bool Bool(const std::string& key, bool def) {
    used_.insert(key);
    if (!doc_.contains(key)) return def;
    if (!doc_.at(key).is_boolean()) Invalid(family_ + "." + key + " must be a boolean");
    return doc_.at(key).get<bool>();
  }

  double Prob(const std::string& key, double def) {
    used_.insert(key);
    if (!doc_.contains(key)) return def;
    if (!doc_.at(key).is_number()) Invalid(family_ + "." + key + " must be a number");
    double x = doc_.at(key).get<double>();
    if (!(x >= 0.0 && x <= 1.0)) Invalid(family_ + "." + key + " outside [0, 1]");
    return x;
  }

  void Finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!used_.count(key)) Invalid(family_ + ": unknown parameter " + key);
    }
  }

 private:
  inline static const nlohmann::json empty_ = nlohmann::json::object();
  std::string family_;
  const nlohmann::json& doc_;
  std::set<std::string> used_;
};

constexpr int64_t kMaxSize = int64_t{1} << 40;

ComputationGraph Linear(Params& p) {
  int64_t depth = p.Int("depth", 8, 1, 100000);
  int64_t size = p.Int("size", 16, 0, kMaxSize);
  p.Finish();
  GraphBuilder b;
  b.AddInput("x", size);
  std::string prev = "x";
  for (int64_t i = 0; i < depth; ++i) {
    std::string out = "t" + std::to_string(i);
    b.AddOperator("op" + std::to_string(i), {prev}, out, size, 0, "conv");
    prev = out;
  }
  return b.Build();
}

// x -> conv -> conv -> add(x, .) per block.
std::string ResidualBlock(GraphBuilder& b, const std::string& prefix,
                          const std::string& in, int64_t size, int64_t wide) {
  b.AddOperator(prefix + "conv1", {in}, prefix + "c1", wide, 0, "conv");
  b.AddOperator(prefix + "conv2", {prefix + "c1"}, prefix + "c2", size, 0,
                "conv");
  b.AddOperator(prefix + "add", {in, prefix + "c2"}, prefix + "y", size, 0,
                "add");
  return prefix + "y";
}

ComputationGraph ResidualChain(Params& p) {
  int64_t blocks = p.Int("blocks", 3, 1, 100000);
  int64_t size = p.Int("size", 16, 0, kMaxSize);
  p.Finish();
  GraphBuilder b;
  b.AddInput("x", size);
  std::string cur = "x";
  for (int64_t k = 0; k < blocks; ++k) {
    cur = ResidualBlock(b, "b" + std::to_string(k) + "_", cur, size, size);
  }
  return b.Build();
}

ComputationGraph ParallelBranches(Params& p) {
  int64_t branches = p.Int("branches", 2, 1, 1000);
  int64_t depth = p.Int("depth", 2, 1, 10000);
  bool residual = p.Bool("residual", false);
  int64_t size = p.Int("size", 16, 0, kMaxSize);
  p.Finish();
  GraphBuilder b;
  b.AddInput("x", size);
  b.AddOperator("stem", {"x"}, "s", size, 0, "conv");
  std::vector<std::string> ends;
  for (int64_t i = 0; i < branches; ++i) {
    std::string prev = "s";
    for (int64_t d = 0; d < depth; ++d) {
      std::string name = "br" + std::to_string(i) + "_" + std::to_string(d);
      b.AddOperator(name, {prev}, name + "_out", size, 0, "conv");
      prev = name + "_out";
    }
    ends.push_back(prev);
  }
  if (residual) ends.push_back("s");
  b.AddOperator("merge", ends, "y", size, 0, "add");
  return b.Build();
}

// Separable convolution stack: relu, depthwise, pointwise, batch norm,
// twice. The middle runs at `wide` and the stack ends back at `size`.
std::string SepConv(GraphBuilder& b, const std::string& prefix,
                    const std::string& in, int64_t size, int64_t wide) {
  static const char* kStages[] = {"relu_a", "dw_a",   "pw_a", "bn_a",
                                  "relu_b", "dw_b",   "pw_b", "bn_b"};
  std::string prev = in;
  for (int s = 0; s < 8; ++s) {
    std::string name = prefix + kStages[s];
    int64_t out = (s == 0 || s >= 6) ? size : wide;
    b.AddOperator(name, {prev}, name + "_out", out, 0, kStages[s]);
    prev = name + "_out";
  }
  return prev;
}

ComputationGraph NasnetCellLike(Params& p) {
  int64_t cells = p.Int("cells", 1, 1, 1000);
  int64_t size = p.Int("size", 16, 1, kMaxSize);
  int64_t expand = p.Int("expand", 2, 1, 64);
  p.Finish();
  const int64_t wide = size * expand;
  GraphBuilder b;
  b.AddInput("image", size);
  b.AddOperator("stem", {"image"}, "stem_out", size, 0, "conv");
  std::string prev = "stem_out";
  std::string cur = "stem_out";
  for (int64_t c = 0; c < cells; ++c) {
    const std::string pre = "c" + std::to_string(c) + "_";
    b.AddOperator(pre + "adj_prev", {prev}, pre + "hp", size, 0, "conv1x1");
    b.AddOperator(pre + "adj_cur", {cur}, pre + "h", size, 0, "conv1x1");
    const std::string h = pre + "h";
    const std::string hp = pre + "hp";
    auto add = [&](const std::string& name, std::vector<std::string> in) {
      b.AddOperator(pre + name, std::move(in), pre + name + "_out", size, 0,
                    "add");
      return pre + name + "_out";
    };
    auto pool = [&](const std::string& name, const std::string& in) {
      b.AddOperator(pre + name, {in}, pre + name + "_out", size, 0, "avgpool");
      return pre + name + "_out";
    };
    std::string b1 = add("add1", {SepConv(b, pre + "s1_", h, size, wide), h});
    std::string b2 = add("add2", {SepConv(b, pre + "s2_", hp, size, wide),
                                  SepConv(b, pre + "s3_", h, size, wide)});
    std::string b3 = add("add3", {pool("pool1", h), hp});
    std::string b4 = add("add4", {pool("pool2", hp), pool("pool3", hp)});
    std::string b5 = add("add5", {SepConv(b, pre + "s4_", hp, size, wide),
                                  SepConv(b, pre + "s5_", hp, size, wide)});
    b.AddOperator(pre + "concat", {b1, b2, b3, b4, b5}, pre + "out", 5 * size,
                  0, "concat");
    prev = cur;
    cur = pre + "out";
  }
  return b.Build();
}

ComputationGraph HrnetBlockLike(Params& p) {
  int64_t branches = p.Int("branches", 3, 1, 16);
  int64_t blocks = p.Int("blocks", 2, 1, 10000);
  bool exchange = p.Bool("exchange", false);
  int64_t stages = p.Int("stages", 1, 1, 1000);
  int64_t size = p.Int("size", 64, 1, kMaxSize);
  int64_t expand = p.Int("expand", 1, 1, 64);
  p.Finish();
  GraphBuilder b;
  std::vector<std::string> cur;
  std::vector<int64_t> sizes;
  for (int64_t i = 0; i < branches; ++i) {
    // Each lower resolution halves the activation.
    sizes.push_back(std::max<int64_t>(1, size >> i));
    cur.push_back("x" + std::to_string(i));
    b.AddInput(cur.back(), sizes.back());
  }
  for (int64_t st = 0; st < stages; ++st) {
    const std::string sp = "s" + std::to_string(st);
    for (int64_t i = 0; i < branches; ++i) {
      for (int64_t k = 0; k < blocks; ++k) {
        cur[i] = ResidualBlock(b,
                               sp + "r" + std::to_string(i) + "b" +
                                   std::to_string(k) + "_",
                               cur[i], sizes[i], sizes[i] * expand);
      }
    }
    if (!exchange && st + 1 == stages) break;
    // Every branch output feeds every exchange unit.
    std::vector<std::string> next;
    for (int64_t i = 0; i < branches; ++i) {
      next.push_back(sp + "y" + std::to_string(i));
      b.AddOperator(sp + "exchange" + std::to_string(i), cur, next.back(),
                    sizes[i], 0, "fuse");
    }
    cur = std::move(next);
  }
  return b.Build();
}

ComputationGraph RandomDag(Params& p) {
  int64_t n = p.Int("n", 10, 1, 100000);
  int64_t max_fanin = p.Int("max_fanin", 3, 1, 64);
  int64_t window = p.Int("window", 4, 1, 100000);
  int64_t seed = p.Int("seed", 0, 0, INT64_MAX);
  double extra_prob = p.Prob("extra_prob", 0.2);
  int64_t max_size = p.Int("max_size", 16, 1, kMaxSize);
  p.Finish();
  std::mt19937_64 rng(static_cast<uint64_t>(seed));
  auto below = [&](int64_t bound) {
    return static_cast<int64_t>(rng() % static_cast<uint64_t>(bound));
  };
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  GraphBuilder b;
  b.AddInput("x", 1 + below(max_size));
  for (int64_t i = 0; i < n; ++i) {
    std::vector<std::string> inputs;
    if (i == 0) {
      inputs.push_back("x");
    } else {
      // One earlier operator at least keeps the graph connected.
      int64_t lo = std::max<int64_t>(0, i - window);
      std::set<int64_t> picked{lo + below(i - lo)};
      int64_t more = below(max_fanin);
      for (int64_t r = 0; r < more; ++r) picked.insert(lo + below(i - lo));
      for (int64_t j : picked) inputs.push_back("t" + std::to_string(j));
    }
    int64_t extra = unit() < extra_prob ? 1 + below(max_size) : 0;
    b.AddOperator("v" + std::to_string(i), std::move(inputs),
                  "t" + std::to_string(i), 1 + below(max_size), extra);
  }
  return b.Build();
}

}  // namespace

std::string GeneratorSpec::Label() const {
  if (!params.is_object() || params.empty()) return family;
  std::string out = family + "{";
  bool first = true;
  for (const auto& [key, value] : params.items()) {
    if (!first) out += ",";
    first = false;
    out += key + ":" + value.dump();
  }
  return out + "}";
}

const std::vector<std::string>& GeneratorFamilies() {
  static const std::vector<std::string> kFamilies = {
      "linear",           "residual-chain",   "parallel-branches",
      "nasnet-cell-like", "hrnet-block-like", "random-dag"};
  return kFamilies;
}

ComputationGraph Generate(const GeneratorSpec& spec) {
  Params p(spec.family, spec.params);
  if (spec.family == "linear") return Linear(p);
  if (spec.family == "residual-chain") return ResidualChain(p);
  if (spec.family == "parallel-branches") return ParallelBranches(p);
  if (spec.family == "nasnet-cell-like") return NasnetCellLike(p);
  if (spec.family == "hrnet-block-like") return HrnetBlockLike(p);
  if (spec.family == "random-dag") return RandomDag(p);
  Invalid("unknown family '" + spec.family + "'");
}

GeneratorSpec SpecFromJson(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("family") ||
      !doc.at("family").is_string()) {
    Invalid("generator spec needs a string \"family\"");
  }
  GeneratorSpec spec;
  spec.family = doc.at("family").get<std::string>();
  for (const auto& [key, value] : doc.items()) {
    if (key != "family") spec.params[key] = value;
  }
  return spec;
}

nlohmann::json SpecToJson(const GeneratorSpec& spec) {
  nlohmann::json doc = spec.params.is_object() ? spec.params
                                               : nlohmann::json::object();
  doc["family"] = spec.family;
  return doc;
}

}  // namespace memsched
