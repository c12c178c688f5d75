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

#ifndef MEMSCHED_ILP_MODEL_H_
#define MEMSCHED_ILP_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "memsched/graph.h"

namespace memsched {

enum class ConstraintTag {
  kBijectionStep,
  kBijectionOp,
  kInputAvailability,
  kPersistence,
  kInitialEmpty,
  kMemory,
  kPruneAncOp,
  kPruneAncT,
  kPruneDesOp,
  kPruneDesT,
};
inline constexpr size_t kNumConstraintTags = 10;

std::string_view ConstraintTagName(ConstraintTag tag);

enum class Sense { kLessEqual, kEqual };

struct Term {
  uint32_t var = 0;
  int64_t coef = 0;
};

struct Constraint {
  ConstraintTag tag = ConstraintTag::kBijectionStep;
  // Row name in exported files, unique within the model.
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  int64_t rhs = 0;
};

// Scheduling ILP over n operators and m tensors.
//   O(i, j)  operator i runs at step j, 1 <= j <= n
//   T(k, j)  tensor k is resident during step j, 0 <= j <= n
//   mem      peak memory, minimized
// Tensor k is the output of operator k for k < n; graph inputs follow.
class IlpModel {
 public:
  size_t num_ops() const { return n_; }
  size_t num_tensors() const { return m_; }
  size_t num_variables() const { return n_ * n_ + m_ * (n_ + 1) + 1; }
  bool pruned() const { return pruned_; }

  uint32_t O(size_t op, size_t step) const {
    return static_cast<uint32_t>(op * n_ + step - 1);
  }
  uint32_t T(size_t tensor, size_t step) const {
    return static_cast<uint32_t>(n_ * n_ + tensor * (n_ + 1) + step);
  }
  uint32_t mem() const { return static_cast<uint32_t>(num_variables() - 1); }

  // O_i_j, T_k_j or mem.
  std::string VariableName(uint32_t var) const;

  const std::vector<Constraint>& constraints() const { return constraints_; }
  // Variables fixed to zero by pruning.
  const std::map<uint32_t, int64_t>& fixed() const { return fixed_; }
  bool IsFixed(uint32_t var) const { return fixed_.count(var) != 0; }

  // Problem data the rows were built from.
  int64_t tensor_size(size_t k) const { return tensor_size_[k]; }
  int64_t extra_size(size_t i) const { return extra_size_[i]; }
  const std::vector<uint32_t>& inputs_of(size_t i) const { return inputs_[i]; }
  // Producer operator, or -1 for graph inputs.
  int64_t producer_of(size_t k) const { return producer_[k]; }
  bool pinned(size_t k) const { return pinned_[k]; }

 private:
  friend IlpModel BuildModel(const ComputationGraph& g, bool prune);

  size_t n_ = 0;
  size_t m_ = 0;
  bool pruned_ = false;
  std::vector<Constraint> constraints_;
  std::map<uint32_t, int64_t> fixed_;
  std::vector<int64_t> tensor_size_;
  std::vector<int64_t> extra_size_;
  std::vector<std::vector<uint32_t>> inputs_;
  std::vector<int64_t> producer_;
  std::vector<bool> pinned_;
};

// Builds the formulation. With `prune`, also fixes to zero every O and T
// variable outside the step window implied by ancestor and descendant
// counts; each fixing is kept as a tagged row and in fixed().
IlpModel BuildModel(const ComputationGraph& g, bool prune);

// CPLEX LP text. Fixed variables are substituted out and rows left without
// variables are dropped. Output is deterministic.
std::string ExportLp(const IlpModel& model);
// Throws Error{kIoError}.
void WriteLp(const IlpModel& model, const std::filesystem::path& path);

struct ModelStats {
  size_t variables_total = 0;
  size_t variables_free = 0;
  size_t constraints = 0;
  std::map<std::string, size_t> per_tag;

  nlohmann::json ToJson() const;
};

ModelStats ComputeModelStats(const IlpModel& model);

// Empty when `values` (one per variable) satisfies every row, every fixing
// and integrality of O and T; otherwise names the first violation.
std::string FindViolation(const IlpModel& model,
                          const std::vector<double>& values);

struct ModelSolution {
  bool feasible = false;
  int64_t objective = 0;
  std::vector<double> values;
};

// Exact optimum of the model by dynamic programming over executed-operator
// sets, honoring every fixing. Intended for small models; throws
// Error{kTooLarge} above 64 operators or 2^22 reachable sets.
ModelSolution SolveModel(const IlpModel& model);

}  // namespace memsched

#endif  // MEMSCHED_ILP_MODEL_H_
