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

#include "memsched/solver.h"

#include <algorithm>
#include <limits>
#include <queue>
#include <utility>

#include "memsched/error.h"
#include "memsched/reachability.h"
#include "search_model.h"

namespace memsched {
namespace {

using Clock = std::chrono::steady_clock;
using internal::SearchModel;

constexpr uint32_t kNone = std::numeric_limits<uint32_t>::max();

uint64_t Mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Executed-set interning: open addressing over a flat pool of keys.
class StateTable {
 public:
  explicit StateTable(size_t words) : words_(words), slots_(1024, kNone) {}

  uint32_t size() const { return count_; }
  const uint64_t* key(uint32_t id) const { return &pool_[id * words_]; }

  // Returns the id for `key`, adding it when absent (always when `dedupe` is
  // false). The bool is true for fresh states.
  std::pair<uint32_t, bool> Intern(const uint64_t* key, bool dedupe) {
    if (!dedupe) return {Append(key), true};
    if (2 * (count_ + 1) > slots_.size()) Grow();
    size_t mask = slots_.size() - 1;
    for (size_t i = Hash(key) & mask;; i = (i + 1) & mask) {
      uint32_t id = slots_[i];
      if (id == kNone) {
        uint32_t fresh = Append(key);
        slots_[i] = fresh;
        return {fresh, true};
      }
      if (std::equal(key, key + words_, &pool_[id * words_])) {
        return {id, false};
      }
    }
  }

 private:
  uint64_t Hash(const uint64_t* key) const {
    uint64_t h = 0x243f6a8885a308d3ULL;
    for (size_t w = 0; w < words_; ++w) h = Mix(h ^ key[w]);
    return h;
  }

  uint32_t Append(const uint64_t* key) {
    pool_.insert(pool_.end(), key, key + words_);
    return count_++;
  }

  void Grow() {
    std::vector<uint32_t> old = std::move(slots_);
    slots_.assign(old.size() * 2, kNone);
    size_t mask = slots_.size() - 1;
    for (uint32_t id : old) {
      if (id == kNone) continue;
      size_t i = Hash(&pool_[id * words_]) & mask;
      while (slots_[i] != kNone) i = (i + 1) & mask;
      slots_[i] = id;
    }
  }

  size_t words_;
  uint32_t count_ = 0;
  std::vector<uint64_t> pool_;
  std::vector<uint32_t> slots_;
};

struct Completion {
  std::vector<uint32_t> suffix;
  int64_t peak = 0;
};

// Greedy completion from an executed set: run the ready operator with the
// smallest stable footprint, ties to the smaller resulting live size, then
// the smaller id.
Completion GreedyComplete(const SearchModel& m, std::vector<uint64_t> set,
                          size_t executed, int64_t live, int64_t peak) {
  Completion out;
  out.peak = peak;
  while (executed < m.n) {
    uint32_t best = kNone;
    int64_t best_stable = 0;
    int64_t best_live = 0;
    for (size_t v = 0; v < m.n; ++v) {
      if (!m.Ready(set.data(), v)) continue;
      int64_t s = m.Stable(v, live);
      int64_t after = m.LiveAfter(set.data(), v, live);
      if (best == kNone || s < best_stable ||
          (s == best_stable && after < best_live)) {
        best = static_cast<uint32_t>(v);
        best_stable = s;
        best_live = after;
      }
    }
    out.suffix.push_back(best);
    out.peak = std::max(out.peak, best_stable);
    live = best_live;
    set[best / 64] |= uint64_t{1} << (best % 64);
    ++executed;
  }
  return out;
}

Schedule ToSchedule(const std::vector<uint32_t>& order) {
  std::vector<OpId> ops;
  ops.reserve(order.size());
  for (uint32_t v : order) ops.emplace_back(v);
  return Schedule(std::move(ops));
}

std::vector<uint32_t> FromSchedule(const Schedule& s) {
  std::vector<uint32_t> order;
  order.reserve(s.size());
  for (OpId v : s.order()) order.push_back(v.value());
  return order;
}

}  // namespace

Schedule GreedySchedule(const ComputationGraph& g) {
  SearchModel m(g);
  Completion c = GreedyComplete(m, std::vector<uint64_t>(m.words, 0), 0,
                                m.initial_live, 0);
  return ToSchedule(c.suffix);
}

SolveResult BruteForce(const ComputationGraph& g) {
  const size_t n = g.num_ops();
  if (n > kMaxBruteForceOps) {
    throw Error(ErrorCode::kTooLarge,
                "brute force is limited to " +
                    std::to_string(kMaxBruteForceOps) + " operators, got " +
                    std::to_string(n));
  }
  const auto start = Clock::now();

  // Independent of the search model: liveness tracked with per-tensor
  // remaining-reader counters.
  std::vector<size_t> remaining_preds(n);
  for (size_t v = 0; v < n; ++v) {
    remaining_preds[v] = g.predecessors(OpId(v)).size();
  }
  std::vector<size_t> unread(g.num_tensors());
  int64_t live = 0;
  for (size_t t = 0; t < g.num_tensors(); ++t) {
    unread[t] = g.tensor(TensorId(t)).consumers.size();
    if (g.tensor(TensorId(t)).is_graph_input()) live += g.tensor(TensorId(t)).size;
  }

  SolveResult result;
  result.peak = std::numeric_limits<int64_t>::max();
  std::vector<uint32_t> order;
  std::vector<uint32_t> best;
  std::vector<bool> done(n, false);

  auto recurse = [&](auto&& self, int64_t peak) -> void {
    if (order.size() == n) {
      ++result.legal_orders;
      if (peak < result.peak) {
        result.peak = peak;
        best = order;
      }
      return;
    }
    for (size_t v = 0; v < n; ++v) {
      if (done[v] || remaining_preds[v] != 0) continue;
      const OperatorSpec& op = g.op(OpId(v));
      const TensorSpec& out = g.tensor(op.output);
      int64_t stable = live + out.size + op.extra_size;
      int64_t freed = 0;
      for (TensorId t : op.inputs) {
        if (--unread[t.index()] == 0 && !g.tensor(t).pinned) {
          freed += g.tensor(t).size;
        }
      }
      for (OpId s : g.successors(OpId(v))) --remaining_preds[s.index()];
      done[v] = true;
      order.push_back(static_cast<uint32_t>(v));
      live += out.size - freed;

      self(self, std::max(peak, stable));

      live -= out.size - freed;
      order.pop_back();
      done[v] = false;
      for (OpId s : g.successors(OpId(v))) ++remaining_preds[s.index()];
      for (TensorId t : op.inputs) ++unread[t.index()];
    }
  };
  recurse(recurse, n == 0 ? 0 : std::numeric_limits<int64_t>::min());
  if (n == 0) result.peak = 0;

  result.schedule = ToSchedule(best);
  result.proven_optimal = true;
  result.explored_states = result.legal_orders;
  result.wall_time = Clock::now() - start;
  result.incumbents.push_back({result.wall_time, result.peak});
  return result;
}

SolveResult Solve(const ComputationGraph& g, const SolverConfig& cfg) {
  if (cfg.mode == SolveMode::kBruteForce) return BruteForce(g);
  if (!(cfg.time_limit_seconds > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "time limit must be positive");
  }
  const auto start = Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(cfg.time_limit_seconds));

  SearchModel m(g);
  const size_t n = m.n;
  const size_t words = m.words;
  SolveResult result;

  std::vector<size_t> window_lo;
  std::vector<size_t> window_hi;
  if (cfg.step_windows) {
    Reachability reach(g);
    for (size_t v = 0; v < n; ++v) {
      window_lo.push_back(reach.num_ancestors(OpId(v)) + 1);
      window_hi.push_back(n - reach.num_descendants(OpId(v)));
    }
  }

  // Incumbent: the better of RPO and greedy.
  std::vector<uint32_t> incumbent = FromSchedule(RpoSchedule(g));
  int64_t incumbent_peak = Evaluate(g, ToSchedule(incumbent)).peak;
  auto offer = [&](std::vector<uint32_t> order, int64_t peak) {
    if (!result.incumbents.empty() && peak >= incumbent_peak) return;
    incumbent = std::move(order);
    incumbent_peak = peak;
    result.incumbents.push_back({Clock::now() - start, peak});
  };
  result.incumbents.push_back({Clock::now() - start, incumbent_peak});
  {
    Completion greedy = GreedyComplete(m, std::vector<uint64_t>(words, 0), 0,
                                       m.initial_live, 0);
    offer(std::move(greedy.suffix), greedy.peak);
  }

  StateTable table(words);
  std::vector<int64_t> best_peak;  // minimal peak-so-far reaching the state
  std::vector<int64_t> live;       // resident memory after the state
  std::vector<uint32_t> parent;
  std::vector<uint32_t> last_op;
  std::vector<uint32_t> depth;

  struct Item {
    int64_t bound;
    uint32_t depth;
    uint64_t tie;
    uint32_t id;
    int64_t peak;
  };
  auto lower_priority = [](const Item& a, const Item& b) {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.tie > b.tie;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(lower_priority)> open(
      lower_priority);
  auto tie_of = [&](uint32_t id) -> uint64_t {
    return cfg.seed == 0 ? id : Mix(cfg.seed ^ id);
  };

  std::vector<uint64_t> key(words, 0);
  {
    auto [id, fresh] = table.Intern(key.data(), true);
    best_peak.push_back(0);
    live.push_back(m.initial_live);
    parent.push_back(kNone);
    last_op.push_back(kNone);
    depth.push_back(0);
    int64_t bound = m.RemainingBound(key.data(), 0);
    open.push({bound, 0, tie_of(id), id, 0});
  }

  auto path_to = [&](uint32_t id) {
    std::vector<uint32_t> order;
    for (uint32_t s = id; parent[s] != kNone; s = parent[s]) {
      order.push_back(last_op[s]);
    }
    std::reverse(order.begin(), order.end());
    return order;
  };

  bool exhausted = false;
  uint64_t pops = 0;
  while (true) {
    if (open.empty()) {
      exhausted = true;
      break;
    }
    Item item = open.top();
    if (item.bound >= incumbent_peak) {
      exhausted = true;
      break;
    }
    open.pop();
    if (item.peak != best_peak[item.id]) continue;  // stale entry
    ++pops;
    if ((pops & 255) == 0 && Clock::now() >= deadline) break;
    if (cfg.node_limit && table.size() >= *cfg.node_limit) break;

    const uint32_t id = item.id;
    const size_t executed = depth[id];
    std::copy_n(table.key(id), words, key.begin());
    if (executed == n) {
      offer(path_to(id), best_peak[id]);
      continue;
    }
    if ((pops & 4095) == 0) {
      Completion dive =
          GreedyComplete(m, key, executed, live[id], best_peak[id]);
      if (dive.peak < incumbent_peak) {
        std::vector<uint32_t> order = path_to(id);
        order.insert(order.end(), dive.suffix.begin(), dive.suffix.end());
        offer(std::move(order), dive.peak);
      }
    }

    for (size_t v = 0; v < n; ++v) {
      if (!m.Ready(key.data(), v)) continue;
      if (cfg.step_windows &&
          (executed + 1 < window_lo[v] || executed + 1 > window_hi[v])) {
        continue;
      }
      const int64_t peak =
          std::max(best_peak[id], m.Stable(v, live[id]));
      if (peak >= incumbent_peak) continue;
      const int64_t next_live = m.LiveAfter(key.data(), v, live[id]);
      key[v / 64] |= uint64_t{1} << (v % 64);
      const int64_t bound =
          std::max(peak, m.RemainingBound(key.data(), executed + 1));
      if (bound < incumbent_peak) {
        auto [next, fresh] = table.Intern(key.data(), cfg.memoize);
        if (fresh) {
          best_peak.push_back(peak);
          live.push_back(next_live);
          parent.push_back(id);
          last_op.push_back(static_cast<uint32_t>(v));
          depth.push_back(static_cast<uint32_t>(executed + 1));
          open.push({bound, static_cast<uint32_t>(executed + 1),
                     tie_of(next), next, peak});
        } else if (peak < best_peak[next]) {
          best_peak[next] = peak;
          parent[next] = id;
          last_op[next] = static_cast<uint32_t>(v);
          open.push({bound, static_cast<uint32_t>(executed + 1),
                     tie_of(next), next, peak});
        }
      }
      key[v / 64] &= ~(uint64_t{1} << (v % 64));
    }
  }

  result.schedule = ToSchedule(incumbent);
  result.peak = Evaluate(g, result.schedule).peak;
  result.proven_optimal = exhausted;
  result.timed_out = !exhausted;
  result.explored_states = table.size();
  result.wall_time = Clock::now() - start;
  return result;
}

}  // namespace memsched
