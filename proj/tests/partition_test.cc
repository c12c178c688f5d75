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
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "memsched/error.h"
#include "memsched/partition.h"
#include "memsched/solver.h"
#include "testing.h"

namespace memsched {
namespace {

using testing::Chain;
using testing::Diamond;
using testing::RandomDag;

// Transitive closure by repeated DFS.
std::vector<std::vector<bool>> Closure(const ComputationGraph& g) {
  const size_t n = g.num_ops();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (size_t s = 0; s < n; ++s) {
    std::vector<size_t> stack{s};
    while (!stack.empty()) {
      size_t u = stack.back();
      stack.pop_back();
      for (OpId v : g.successors(OpId(u))) {
        if (!reach[s][v.index()]) {
          reach[s][v.index()] = true;
          stack.push_back(v.index());
        }
      }
    }
  }
  return reach;
}

// Parts i and j are cross-dependent when some path runs i -> j and another
// runs j -> i.
bool OracleAcyclic(const ComputationGraph& g,
                   const std::vector<std::vector<OpId>>& parts) {
  auto reach = Closure(g);
  const size_t k = parts.size();
  // Part-level reachability, closed transitively.
  std::vector<std::vector<bool>> pr(k, std::vector<bool>(k, false));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      for (OpId u : parts[i]) {
        for (OpId v : parts[j]) {
          if (reach[u.index()][v.index()]) pr[i][j] = true;
        }
      }
    }
  }
  for (size_t m = 0; m < k; ++m) {
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = 0; j < k; ++j) {
        if (pr[i][m] && pr[m][j]) pr[i][j] = true;
      }
    }
  }
  for (size_t i = 0; i < k; ++i) {
    if (pr[i][i]) return false;
  }
  return true;
}

int64_t OracleCut(const ComputationGraph& g,
                  const std::vector<std::vector<OpId>>& parts) {
  std::vector<size_t> where(g.num_ops());
  for (size_t p = 0; p < parts.size(); ++p) {
    for (OpId u : parts[p]) where[u.index()] = p;
  }
  int64_t cut = 0;
  for (const TensorSpec& t : g.tensors()) {
    std::set<size_t> touched;
    if (t.producer) touched.insert(where[t.producer->index()]);
    for (OpId c : t.consumers) touched.insert(where[c.index()]);
    if (touched.size() > 1) cut += t.size;
  }
  return cut;
}

void ExpectOrderedCover(const ComputationGraph& g, const PartitionPlan& plan) {
  std::vector<int> where(g.num_ops(), -1);
  for (size_t p = 0; p < plan.parts.size(); ++p) {
    EXPECT_FALSE(plan.parts[p].empty());
    for (OpId u : plan.parts[p]) {
      ASSERT_EQ(where[u.index()], -1);
      where[u.index()] = static_cast<int>(p);
    }
  }
  for (size_t u = 0; u < g.num_ops(); ++u) {
    ASSERT_GE(where[u], 0);
    for (OpId v : g.successors(OpId(u))) {
      EXPECT_LE(where[u], where[v.index()]);
    }
  }
}

TEST(PartitionTest, Balance) {
  BalanceBounds b = PartitionBalance(10, 3);
  EXPECT_EQ(b.lo, 2u);
  EXPECT_EQ(b.hi, 4u);
  b = PartitionBalance(9, 3);
  EXPECT_EQ(b.lo, 2u);
  EXPECT_EQ(b.hi, 3u);
  b = PartitionBalance(4, 4);
  EXPECT_EQ(b.lo, 1u);
  EXPECT_EQ(b.hi, 1u);
}

TEST(PartitionTest, SinglePart) {
  ComputationGraph g = Diamond();
  PartitionPlan plan = AcyclicPartition(g, 1);
  ASSERT_EQ(plan.parts.size(), 1u);
  EXPECT_EQ(plan.parts[0].size(), g.num_ops());
  EXPECT_EQ(plan.cut_weight, 0);
  EXPECT_EQ(plan.peak_part_index, 0u);
}

TEST(PartitionTest, ChainOfNine) {
  ComputationGraph g = Chain(9, 5);
  PartitionPlan plan = AcyclicPartition(g, 3);
  PartitionPlan naive = NaivePartition(g, 3);
  ASSERT_EQ(plan.parts.size(), 3u);
  for (size_t p = 0; p < 3; ++p) {
    std::vector<OpId> want{OpId(3 * p), OpId(3 * p + 1), OpId(3 * p + 2)};
    EXPECT_EQ(plan.parts[p], want);
  }
  EXPECT_EQ(plan.parts, naive.parts);
  EXPECT_EQ(plan.cut_weight, 10);
}

TEST(PartitionTest, SingletonsWhenKEqualsN) {
  ComputationGraph g = Diamond();
  PartitionPlan plan = NaivePartition(g, g.num_ops());
  for (const auto& p : plan.parts) EXPECT_EQ(p.size(), 1u);
  EXPECT_TRUE(IsAcyclicPlan(g, plan.parts));
}

TEST(PartitionTest, DiamondWithTailMovesOffHeavyTensor) {
  // The equal split separates b1 from its heavy output's reader.
  GraphBuilder b;
  b.AddInput("x", 1);
  b.AddOperator("src", {"x"}, "S", 1);
  b.AddOperator("a1", {"S"}, "A1", 1);
  b.AddOperator("a2", {"A1"}, "A2", 1);
  b.AddOperator("b1", {"S"}, "B1", 16);
  b.AddOperator("b2", {"B1"}, "B2", 1);
  b.AddOperator("sink", {"A2", "B2"}, "Y", 1);
  b.AddOperator("tail", {"Y"}, "Z", 1);
  ComputationGraph g = b.Build();
  PartitionPlan naive = NaivePartition(g, 2);
  PartitionPlan plan = AcyclicPartition(g, 2);
  EXPECT_EQ(naive.cut_weight, OracleCut(g, naive.parts));
  EXPECT_EQ(naive.cut_weight, 17);
  EXPECT_EQ(plan.cut_weight, OracleCut(g, plan.parts));
  EXPECT_EQ(plan.cut_weight, 2);
  EXPECT_EQ(plan.parts[0], testing::Ops(g, {"src", "a1", "a2"}));
  ExpectOrderedCover(g, plan);
}

TEST(PartitionTest, Errors) {
  ComputationGraph g = Chain(3);
  try {
    AcyclicPartition(g, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleBalance);
  }
  EXPECT_THROW(AcyclicPartition(g, 0), Error);
  EXPECT_THROW(CutWeight(g, {{OpId(0)}}), Error);
}

TEST(PartitionTest, AcyclicPredicateMatchesOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    ComputationGraph g = RandomDag(rng, {.min_ops = 2, .max_ops = 10});
    size_t k = 1 + rng() % std::min<size_t>(4, g.num_ops());
    std::vector<std::vector<OpId>> parts(k);
    for (size_t u = 0; u < g.num_ops(); ++u) {
      parts[u < k ? u : rng() % k].emplace_back(u);
    }
    for (auto& p : parts) std::sort(p.begin(), p.end());
    EXPECT_EQ(IsAcyclicPlan(g, parts), OracleAcyclic(g, parts));
  }
}

TEST(PartitionProperty, PlansAreOrderedBalancedAndNoWorseThanNaive) {
  std::mt19937_64 rng(21);
  int64_t total = 0;
  int64_t total_naive = 0;
  for (int trial = 0; trial < 400; ++trial) {
    ComputationGraph g = RandomDag(rng, {.max_ops = 24});
    size_t k = 1 + rng() % std::min<size_t>(6, g.num_ops());
    PartitionPlan plan = AcyclicPartition(g, k);
    PartitionPlan naive = NaivePartition(g, k);
    ASSERT_EQ(plan.parts.size(), k);
    ExpectOrderedCover(g, plan);
    ExpectOrderedCover(g, naive);
    EXPECT_TRUE(OracleAcyclic(g, plan.parts));
    EXPECT_TRUE(IsAcyclicPlan(g, plan.parts));
    BalanceBounds b = PartitionBalance(g.num_ops(), k);
    for (const auto& p : plan.parts) {
      EXPECT_GE(p.size(), b.lo);
      EXPECT_LE(p.size(), b.hi);
    }
    EXPECT_EQ(plan.cut_weight, OracleCut(g, plan.parts));
    EXPECT_EQ(plan.cut_weight, CutWeight(g, plan.parts));
    EXPECT_LE(plan.cut_weight, naive.cut_weight);
    total += plan.cut_weight;
    total_naive += naive.cut_weight;
    OpId peak = PeakOperator(g, RpoSchedule(g));
    const auto& holder = plan.parts[plan.peak_part_index];
    EXPECT_TRUE(std::find(holder.begin(), holder.end(), peak) != holder.end());
  }
  EXPECT_LT(total, total_naive);
}

TEST(PartitionedScheduleTest, ChainSameForEveryK) {
  ComputationGraph g = Chain(7, 3);
  for (size_t k = 1; k <= 7; ++k) {
    SolveResult r = PartitionedSchedule(g, k, {}, 20);
    EXPECT_EQ(r.schedule, RpoSchedule(g)) << k;
    EXPECT_EQ(r.peak, 6);
  }
}

TEST(PartitionedScheduleProperty, LegalAndNeverBelowOptimum) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    ComputationGraph g = RandomDag(rng, {.max_ops = 10});
    int64_t best = BruteForce(g).peak;
    for (size_t k = 1; k <= 3; ++k) {
      PartitionedResult r = PartitionedScheduleDetailed(g, k, {}, 20);
      ASSERT_TRUE(IsLegalSchedule(g, r.result.schedule));
      EXPECT_EQ(r.result.peak, Evaluate(g, r.result.schedule).peak);
      EXPECT_GE(r.result.peak, best);
      if (k == 1) {
        EXPECT_EQ(r.result.peak, best);
        EXPECT_TRUE(r.result.proven_optimal);
      } else if (r.plan.parts.size() > 1) {
        EXPECT_FALSE(r.result.proven_optimal);
      }
    }
  }
}

TEST(PartitionTest, PlanJson) {
  ComputationGraph g = Chain(4);
  nlohmann::json j = PlanToJson(g, AcyclicPartition(g, 2));
  ASSERT_EQ(j["parts"].size(), 2u);
  EXPECT_EQ(j["parts"][0][0], g.op(OpId(0)).name);
  EXPECT_EQ(j["cut_weight"], 1);
  EXPECT_TRUE(j.contains("peak_part_index"));
}

}  // namespace
}  // namespace memsched
