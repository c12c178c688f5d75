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

#include <algorithm>
#include <cmath>
#include <limits>

#include "memsched/error.h"
#include "memsched/ilp_model.h"
#include "memsched/reachability.h"

namespace memsched {
namespace {

std::string Idx(size_t a) { return std::to_string(a); }
std::string Idx(size_t a, size_t b) { return Idx(a) + "_" + Idx(b); }
std::string Idx(size_t a, size_t b, size_t c) {
  return Idx(a, b) + "_" + Idx(c);
}

}  // namespace

std::string_view ConstraintTagName(ConstraintTag tag) {
  switch (tag) {
    case ConstraintTag::kBijectionStep: return "bijection-step";
    case ConstraintTag::kBijectionOp: return "bijection-op";
    case ConstraintTag::kInputAvailability: return "input-availability";
    case ConstraintTag::kPersistence: return "persistence";
    case ConstraintTag::kInitialEmpty: return "initial-empty";
    case ConstraintTag::kMemory: return "memory";
    case ConstraintTag::kPruneAncOp: return "prune-anc-op";
    case ConstraintTag::kPruneAncT: return "prune-anc-T";
    case ConstraintTag::kPruneDesOp: return "prune-des-op";
    case ConstraintTag::kPruneDesT: return "prune-des-T";
  }
  return "unknown";
}

std::string IlpModel::VariableName(uint32_t var) const {
  if (var == mem()) return "mem";
  if (var < n_ * n_) return "O_" + Idx(var / n_, var % n_ + 1);
  size_t rel = var - n_ * n_;
  return "T_" + Idx(rel / (n_ + 1), rel % (n_ + 1));
}

IlpModel BuildModel(const ComputationGraph& g, bool prune) {
  IlpModel model;
  const size_t n = g.num_ops();
  const size_t m = g.num_tensors();
  model.n_ = n;
  model.m_ = m;
  model.pruned_ = prune;
  for (const TensorSpec& t : g.tensors()) {
    model.tensor_size_.push_back(t.size);
    model.producer_.push_back(
        t.producer ? static_cast<int64_t>(t.producer->value()) : -1);
    model.pinned_.push_back(t.pinned);
  }
  for (const OperatorSpec& op : g.ops()) {
    model.extra_size_.push_back(op.extra_size);
    std::vector<uint32_t> ins;
    for (TensorId t : op.inputs) ins.push_back(t.value());
    std::sort(ins.begin(), ins.end());
    model.inputs_.push_back(std::move(ins));
  }

  auto& rows = model.constraints_;
  auto add = [&](ConstraintTag tag, std::string name, std::vector<Term> terms,
                 Sense sense, int64_t rhs) {
    rows.push_back(Constraint{tag, std::move(name), std::move(terms), sense,
                              rhs});
  };

  for (size_t j = 1; j <= n; ++j) {
    std::vector<Term> terms;
    for (size_t i = 0; i < n; ++i) terms.push_back({model.O(i, j), 1});
    add(ConstraintTag::kBijectionStep, "step_" + Idx(j), std::move(terms),
        Sense::kEqual, 1);
  }
  for (size_t i = 0; i < n; ++i) {
    std::vector<Term> terms;
    for (size_t j = 1; j <= n; ++j) terms.push_back({model.O(i, j), 1});
    add(ConstraintTag::kBijectionOp, "once_" + Idx(i), std::move(terms),
        Sense::kEqual, 1);
  }
  for (size_t i = 0; i < n; ++i) {
    for (uint32_t k : model.inputs_[i]) {
      for (size_t j = 1; j <= n; ++j) {
        add(ConstraintTag::kInputAvailability, "avail_" + Idx(i, k, j),
            {{model.O(i, j), 1}, {model.T(k, j), -1}}, Sense::kLessEqual, 0);
      }
    }
  }
  for (size_t k = 0; k < m; ++k) {
    for (size_t j = 1; j <= n; ++j) {
      std::vector<Term> terms{{model.T(k, j), 1}, {model.T(k, j - 1), -1}};
      if (model.producer_[k] >= 0) {
        terms.push_back({model.O(static_cast<size_t>(model.producer_[k]), j),
                         -1});
      }
      add(ConstraintTag::kPersistence, "keep_" + Idx(k, j), std::move(terms),
          Sense::kLessEqual, 0);
    }
    if (model.pinned_[k]) {
      add(ConstraintTag::kPersistence, "final_" + Idx(k),
          {{model.T(k, n), 1}}, Sense::kEqual, 1);
    }
  }
  for (size_t k = 0; k < m; ++k) {
    add(ConstraintTag::kInitialEmpty, "init_" + Idx(k), {{model.T(k, 0), 1}},
        Sense::kEqual, model.producer_[k] < 0 ? 1 : 0);
  }
  for (size_t j = 1; j <= n; ++j) {
    std::vector<Term> terms;
    for (size_t k = 0; k < m; ++k) {
      if (model.tensor_size_[k] != 0) {
        terms.push_back({model.T(k, j), model.tensor_size_[k]});
      }
    }
    for (size_t i = 0; i < n; ++i) {
      if (model.extra_size_[i] != 0) {
        terms.push_back({model.O(i, j), model.extra_size_[i]});
      }
    }
    terms.push_back({model.mem(), -1});
    add(ConstraintTag::kMemory, "mem_" + Idx(j), std::move(terms),
        Sense::kLessEqual, 0);
  }
  if (!prune) return model;

  Reachability reach(g);
  auto fix = [&](ConstraintTag tag, std::string name, uint32_t var) {
    if (!model.fixed_.emplace(var, 0).second) return;
    add(tag, std::move(name), {{var, 1}}, Sense::kEqual, 0);
  };
  for (size_t i = 0; i < n; ++i) {
    size_t anc = reach.num_ancestors(OpId(i));
    for (size_t j = 1; j <= anc; ++j) {
      fix(ConstraintTag::kPruneAncOp, "anc_O_" + Idx(i, j), model.O(i, j));
    }
  }
  for (size_t i = 0; i < n; ++i) {
    size_t anc = reach.num_ancestors(OpId(i));
    for (size_t j = 1; j <= anc; ++j) {
      fix(ConstraintTag::kPruneAncT, "anc_T_" + Idx(i, j), model.T(i, j));
    }
  }
  for (size_t i = 0; i < n; ++i) {
    size_t des = reach.num_descendants(OpId(i));
    for (size_t j = n - des + 1; j <= n; ++j) {
      fix(ConstraintTag::kPruneDesOp, "des_O_" + Idx(i, j), model.O(i, j));
    }
  }
  // A tensor is dead once its last reader has run. The reader with the
  // fewest descendants can run latest, so it sets the bound.
  for (size_t k = 0; k < m; ++k) {
    const TensorSpec& t = g.tensor(TensorId(k));
    if (t.pinned || t.consumers.empty()) continue;
    size_t fewest = std::numeric_limits<size_t>::max();
    for (OpId u : t.consumers) {
      fewest = std::min(fewest, reach.num_descendants(u));
    }
    for (size_t j = n - fewest + 1; j <= n; ++j) {
      fix(ConstraintTag::kPruneDesT, "des_T_" + Idx(k, j), model.T(k, j));
    }
  }
  return model;
}

nlohmann::json ModelStats::ToJson() const {
  return {{"variables_total", variables_total},
          {"variables_free", variables_free},
          {"constraints", constraints},
          {"per_tag", per_tag}};
}

ModelStats ComputeModelStats(const IlpModel& model) {
  ModelStats stats;
  stats.variables_total = model.num_variables();
  stats.variables_free = model.num_variables() - model.fixed().size();
  stats.constraints = model.constraints().size();
  for (size_t t = 0; t < kNumConstraintTags; ++t) {
    stats.per_tag[std::string(ConstraintTagName(static_cast<ConstraintTag>(t)))] =
        0;
  }
  for (const Constraint& c : model.constraints()) {
    ++stats.per_tag[std::string(ConstraintTagName(c.tag))];
  }
  return stats;
}

std::string FindViolation(const IlpModel& model,
                          const std::vector<double>& values) {
  constexpr double kTol = 1e-6;
  if (values.size() != model.num_variables()) {
    return "expected " + std::to_string(model.num_variables()) +
           " values, got " + std::to_string(values.size());
  }
  for (uint32_t v = 0; v < model.mem(); ++v) {
    double x = values[v];
    if (std::abs(x) > kTol && std::abs(x - 1) > kTol) {
      return model.VariableName(v) + " is not binary";
    }
  }
  if (values[model.mem()] < -kTol) return "mem is negative";
  for (const auto& [var, value] : model.fixed()) {
    if (std::abs(values[var] - static_cast<double>(value)) > kTol) {
      return model.VariableName(var) + " is fixed to " + std::to_string(value);
    }
  }
  for (const Constraint& c : model.constraints()) {
    double lhs = 0;
    for (const Term& t : c.terms) {
      lhs += static_cast<double>(t.coef) * values[t.var];
    }
    double rhs = static_cast<double>(c.rhs);
    bool ok = c.sense == Sense::kEqual ? std::abs(lhs - rhs) <= kTol
                                       : lhs <= rhs + kTol;
    if (!ok) {
      return "row " + c.name + " (" + std::string(ConstraintTagName(c.tag)) +
             ") is violated";
    }
  }
  return {};
}

}  // namespace memsched
