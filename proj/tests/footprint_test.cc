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
#include "memsched/footprint.h"
#include "testing.h"

namespace memsched {
namespace {

using testing::AllTopologicalOrders;
using testing::Diamond;
using testing::Ops;
using testing::RandomDag;
using testing::Simulate;
using testing::SmallChain;

// A random topological order: Kahn's algorithm with random ready picks.
Schedule RandomOrder(const ComputationGraph& g, std::mt19937_64& rng) {
  std::vector<size_t> indeg(g.num_ops());
  std::vector<OpId> ready;
  for (size_t v = 0; v < g.num_ops(); ++v) {
    indeg[v] = g.predecessors(OpId(v)).size();
    if (indeg[v] == 0) ready.emplace_back(v);
  }
  std::vector<OpId> order;
  while (!ready.empty()) {
    size_t k = std::uniform_int_distribution<size_t>(0, ready.size() - 1)(rng);
    OpId v = ready[k];
    ready.erase(ready.begin() + static_cast<ptrdiff_t>(k));
    order.push_back(v);
    for (OpId s : g.successors(v)) {
      if (--indeg[s.index()] == 0) ready.push_back(s);
    }
  }
  return Schedule(order);
}

TEST(EvaluateTest, ChainTrace) {
  ComputationGraph g = SmallChain();
  Schedule s(Ops(g, {"a", "b", "c"}));
  FootprintTrace t = Evaluate(g, s);
  EXPECT_EQ(t.stable, (std::vector<int64_t>{12, 6, 3}));
  EXPECT_EQ(t.transient, (std::vector<int64_t>{8, 4, 2, 1}));
  EXPECT_EQ(t.peak, 12);
  EXPECT_EQ(t.peak_step, 1u);
  EXPECT_EQ(PeakOperator(g, s), *g.FindOp("a"));
}

TEST(EvaluateTest, AllZeroSizes) {
  GraphBuilder b;
  b.AddInput("x", 0);
  b.AddOperator("a", {"x"}, "A", 0);
  b.AddOperator("b", {"A"}, "B", 0);
  ComputationGraph g = b.Build();
  Schedule s(Ops(g, {"a", "b"}));
  FootprintTrace t = Evaluate(g, s);
  EXPECT_EQ(t.stable, (std::vector<int64_t>{0, 0}));
  EXPECT_EQ(t.transient, (std::vector<int64_t>{0, 0, 0}));
  EXPECT_EQ(t.peak, 0);
  EXPECT_EQ(PeakOperator(g, s), *g.FindOp("a"));
}

TEST(EvaluateTest, EqualPeaksEarliestWins) {
  GraphBuilder b;
  b.AddInput("x", 1);
  b.AddOperator("a", {"x"}, "A", 1);
  b.AddOperator("b", {"A"}, "B", 1);
  ComputationGraph g = b.Build();
  Schedule s(Ops(g, {"a", "b"}));
  EXPECT_EQ(Evaluate(g, s).stable, (std::vector<int64_t>{2, 2}));
  EXPECT_EQ(PeakOperator(g, s), *g.FindOp("a"));
}

TEST(EvaluateTest, DiamondInterleavingsDiffer) {
  ComputationGraph g = Diamond(1, 4, 1, 4, 1, 1);
  std::set<int64_t> peaks;
  auto orders = AllTopologicalOrders(g);
  ASSERT_EQ(orders.size(), 6u);
  for (const auto& order : orders) {
    FootprintTrace t = Evaluate(g, Schedule(order));
    EXPECT_EQ(t.peak, Simulate(g, order).peak);
    peaks.insert(t.peak);
  }
  EXPECT_EQ(*peaks.begin(), 6);   // one branch at a time
  EXPECT_EQ(*peaks.rbegin(), 9);  // both wide tensors resident together
}

TEST(EvaluateTest, RejectsIllegalSchedule) {
  ComputationGraph g = SmallChain();
  try {
    Evaluate(g, Schedule(Ops(g, {"b", "a", "c"})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIllegalSchedule);
    EXPECT_NE(std::string(e.what()).find("'b'"), std::string::npos);
  }
  EXPECT_FALSE(IsLegalSchedule(g, Schedule(Ops(g, {"a", "b"}))));
  EXPECT_FALSE(IsLegalSchedule(g, Schedule(Ops(g, {"a", "a", "c"}))));
}

TEST(EvaluateProperty, MatchesSimulatorAndIdentities) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    ComputationGraph g = RandomDag(rng);
    Schedule s = RandomOrder(g, rng);
    FootprintTrace t = Evaluate(g, s);
    testing::SimTrace sim = Simulate(g, {s.order().begin(), s.order().end()});
    ASSERT_EQ(t.stable, sim.stable);
    ASSERT_EQ(t.transient, sim.transient);
    ASSERT_EQ(t.peak, sim.peak);
    ASSERT_EQ(t.stable.size(), g.num_ops());
    ASSERT_EQ(t.transient.size(), g.num_ops() + 1);
    EXPECT_EQ(t.transient.front(), g.TotalInputSize());
    EXPECT_EQ(t.transient.back(), g.TotalOutputSize());
    EXPECT_EQ(t.peak, *std::max_element(t.stable.begin(), t.stable.end()));
    EXPECT_EQ(t.stable[t.peak_step - 1], t.peak);

    std::vector<size_t> step(g.num_ops());
    for (size_t k = 0; k < s.size(); ++k) step[s[k].index()] = k;
    for (size_t i = 1; i <= g.num_ops(); ++i) {
      EXPECT_LE(t.transient[i - 1], t.stable[i - 1]);
      EXPECT_LE(t.transient[i], t.stable[i - 1]);
      // Transient after a step: stable minus workspace minus inputs freed.
      const OperatorSpec& op = g.op(s[i - 1]);
      int64_t freed = 0;
      for (TensorId x : op.inputs) {
        const TensorSpec& spec = g.tensor(x);
        if (spec.pinned) continue;
        size_t last = 0;
        for (OpId c : spec.consumers) last = std::max(last, step[c.index()]);
        if (last == i - 1) freed += spec.size;
      }
      EXPECT_EQ(t.transient[i], t.stable[i - 1] - op.extra_size - freed);
      EXPECT_EQ(t.stable[i - 1],
                t.transient[i - 1] + g.tensor(op.output).size + op.extra_size);
    }
  }
}

// Rebuilds `g` with operators inserted in `order`, renamed, and with every
// size multiplied by `scale`.
ComputationGraph Relabel(const ComputationGraph& g, const Schedule& order,
                         int64_t scale) {
  GraphBuilder b;
  for (TensorId t : g.input_tensors()) {
    b.AddInput("r_" + g.tensor(t).name, g.tensor(t).size * scale);
  }
  for (OpId v : order.order()) {
    const OperatorSpec& op = g.op(v);
    std::vector<std::string> ins;
    for (TensorId t : op.inputs) ins.push_back("r_" + g.tensor(t).name);
    b.AddOperator("r_" + op.name, ins, "r_" + g.tensor(op.output).name,
                  g.tensor(op.output).size * scale, op.extra_size * scale);
  }
  return b.Build();
}

TEST(EvaluateProperty, RenamingAndScaling) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    ComputationGraph g = RandomDag(rng);
    Schedule s = RandomOrder(g, rng);
    FootprintTrace base = Evaluate(g, s);
    for (int64_t k : {1, 3}) {
      ComputationGraph h = Relabel(g, RandomOrder(g, rng), k);
      std::vector<OpId> mapped;
      for (OpId v : s.order()) mapped.push_back(*h.FindOp("r_" + g.op(v).name));
      FootprintTrace t = Evaluate(h, Schedule(mapped));
      ASSERT_EQ(t.stable.size(), base.stable.size());
      for (size_t i = 0; i < t.stable.size(); ++i) {
        EXPECT_EQ(t.stable[i], k * base.stable[i]);
      }
      for (size_t i = 0; i < t.transient.size(); ++i) {
        EXPECT_EQ(t.transient[i], k * base.transient[i]);
      }
      EXPECT_EQ(t.peak_step, base.peak_step);
    }
  }
}

TEST(RpoTest, ChainAndDiamond) {
  ComputationGraph c = SmallChain();
  EXPECT_EQ(RpoSchedule(c), Schedule(Ops(c, {"a", "b", "c"})));
  ComputationGraph d = Diamond();
  EXPECT_EQ(RpoSchedule(d),
            Schedule(Ops(d, {"src", "a1", "a2", "b1", "b2", "sink"})));
}

TEST(RpoTest, LegalOnRandomGraphs) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    ComputationGraph g = RandomDag(rng, {.max_ops = 40});
    Schedule s = RpoSchedule(g);
    EXPECT_TRUE(IsLegalSchedule(g, s)) << FindScheduleViolation(g, s);
    EXPECT_EQ(RpoSchedule(g), s);
  }
}

TEST(TraceJsonTest, Fields) {
  ComputationGraph g = SmallChain();
  nlohmann::json j =
      TraceToJson(Evaluate(g, Schedule(Ops(g, {"a", "b", "c"}))), "KB");
  EXPECT_EQ(j["stable"], nlohmann::json({12, 6, 3}));
  EXPECT_EQ(j["transient"], nlohmann::json({8, 4, 2, 1}));
  EXPECT_EQ(j["peak"], 12);
  EXPECT_EQ(j["peak_step"], 1);
  EXPECT_EQ(j["unit"], "KB");
}

}  // namespace
}  // namespace memsched
