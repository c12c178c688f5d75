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
#include <limits>
#include <map>

#include "memsched/error.h"
#include "memsched/ilp_model.h"

namespace memsched {
namespace {

constexpr size_t kMaxModelStates = size_t{1} << 22;

struct Entry {
  int64_t peak;
  uint64_t parent;
  uint32_t op;
};

}  // namespace

ModelSolution SolveModel(const IlpModel& model) {
  const size_t n = model.num_ops();
  const size_t m = model.num_tensors();
  if (n > 64) {
    throw Error(ErrorCode::kTooLarge,
                "model solver handles at most 64 operators, got " +
                    std::to_string(n));
  }
  // Everything below is read back from the model rows' source data and
  // fixings, not from the graph.
  std::vector<uint64_t> pred(n, 0);
  std::vector<uint64_t> readers(m, 0);
  std::vector<uint64_t> produced_by(m, 0);
  for (size_t k = 0; k < m; ++k) {
    if (model.producer_of(k) >= 0) produced_by[k] = uint64_t{1} << model.producer_of(k);
  }
  for (size_t i = 0; i < n; ++i) {
    for (uint32_t k : model.inputs_of(i)) {
      readers[k] |= uint64_t{1} << i;
      pred[i] |= produced_by[k];
    }
  }
  // Resident set during a step: tensors that exist and are still needed.
  auto resident = [&](size_t k, uint64_t before, uint64_t after) {
    bool exists = produced_by[k] == 0 || (after & produced_by[k]) != 0;
    return exists && (model.pinned(k) || (readers[k] & ~before) != 0);
  };

  std::vector<std::map<uint64_t, Entry>> layers(n + 1);
  layers[0][0] = Entry{std::numeric_limits<int64_t>::min(), 0, 0};
  size_t states = 1;
  for (size_t j = 1; j <= n; ++j) {
    for (const auto& [done, entry] : layers[j - 1]) {
      for (size_t v = 0; v < n; ++v) {
        uint64_t bit = uint64_t{1} << v;
        if ((done & bit) != 0 || (pred[v] & ~done) != 0) continue;
        if (model.IsFixed(model.O(v, j))) continue;
        const uint64_t after = done | bit;
        int64_t stable = model.extra_size(v);
        bool feasible = true;
        for (size_t k = 0; k < m && feasible; ++k) {
          if (!resident(k, done, after)) continue;
          if (model.IsFixed(model.T(k, j))) feasible = false;
          stable += model.tensor_size(k);
        }
        if (!feasible) continue;
        int64_t peak = std::max(entry.peak, stable);
        auto [it, fresh] = layers[j].try_emplace(
            after, Entry{peak, done, static_cast<uint32_t>(v)});
        if (fresh) {
          if (++states > kMaxModelStates) {
            throw Error(ErrorCode::kTooLarge, "model has too many states");
          }
        } else if (peak < it->second.peak) {
          it->second = Entry{peak, done, static_cast<uint32_t>(v)};
        }
      }
    }
  }

  ModelSolution sol;
  const uint64_t full = n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
  auto last = layers[n].find(full);
  if (last == layers[n].end()) return sol;

  sol.feasible = true;
  sol.objective = n == 0 ? 0 : last->second.peak;
  sol.values.assign(model.num_variables(), 0.0);
  std::vector<uint64_t> done_before(n + 1, 0);
  uint64_t cur = full;
  for (size_t j = n; j >= 1; --j) {
    const Entry& e = layers[j].at(cur);
    sol.values[model.O(e.op, j)] = 1;
    done_before[j] = e.parent;
    cur = e.parent;
  }
  for (size_t k = 0; k < m; ++k) {
    sol.values[model.T(k, 0)] = produced_by[k] == 0 ? 1 : 0;
    for (size_t j = 1; j <= n; ++j) {
      uint64_t after = j == n ? full : done_before[j + 1];
      sol.values[model.T(k, j)] =
          resident(k, done_before[j], after) ? 1 : 0;
    }
  }
  sol.values[model.mem()] = static_cast<double>(sol.objective);
  return sol;
}

}  // namespace memsched
