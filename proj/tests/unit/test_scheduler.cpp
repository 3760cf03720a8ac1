#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "edgesched/scheduler/policy.hpp"
#include "edgesched/scheduler/scoring.hpp"
#include "support.hpp"

using namespace edgesched;

namespace {

PolicyState state_for(std::size_t n, double eta = 0.7) {
  std::vector<NodeDescriptor> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i].node_id = static_cast<int>(i);
  OverloadLimits limits;
  return make_policy_state(nodes, SchedulingWeights{}, eta, 0.5, 1e-6, limits, NormalizationBounds{});
}

RawNodeSample best_sample() {
  RawNodeSample s;
  s.cpu_idle_fraction = 1;
  s.queue_length = 0;
  s.available_bandwidth = 200;
  s.link_latency = 5;
  return s;
}

RawNodeSample worst_sample() {
  RawNodeSample s;
  s.cpu_idle_fraction = 0;
  s.queue_length = 32;
  s.available_bandwidth = 20;
  s.link_latency = 60;
  return s;
}

}  // namespace

TEST(InstantScore, Examples) {
  EXPECT_DOUBLE_EQ(instant_score({0.7, 0.2, 0.9, 0.1}, {1, 0, 0, 0}), 0.7);
  EXPECT_DOUBLE_EQ(instant_score({1, 1, 1, 1}, {0.25, 0.25, 0.25, 0.25}), 1.0);
  EXPECT_NEAR(instant_score({0.5, 0.5, 1.0, 0.0}, {0.4, 0.3, 0.2, 0.1}), 0.55, 1e-15);
}

TEST(InstantScore, MatchesLoopDotProduct) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const ResourceStateVector r{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    const SchedulingWeights w{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    double dot = 0;
    for (int k = 0; k < 4; ++k) dot += r.as_array()[k] * w.as_array()[k];
    ASSERT_NEAR(instant_score(r, w), dot, 1e-12);
  }
}

TEST(SmoothUpdate, Examples) {
  EXPECT_DOUBLE_EQ(smooth_update(0.8, 0.4, 1.0), 0.8);
  EXPECT_DOUBLE_EQ(smooth_update(0.8, 0.4, 0.0), 0.4);
  EXPECT_NEAR(smooth_update(0.8, 0.4, 0.5), 0.6, 1e-15);
}

TEST(ApplyPenalty, Examples) {
  EXPECT_DOUBLE_EQ(apply_penalty(0.6, 0.5), 0.3);
  EXPECT_EQ(apply_penalty(0.0, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(apply_penalty(0.42, 0.999), 0.999 * 0.42);
  EXPECT_LT(apply_penalty(0.42, 0.999), 0.42);
}

TEST(FloorClamp, Examples) {
  EXPECT_EQ(floor_clamp(1e-9, 1e-6), 1e-6);
  EXPECT_EQ(floor_clamp(0.5, 1e-6), 0.5);
  EXPECT_EQ(floor_clamp(-0.2, 1e-6), 1e-6);
}

TEST(Attenuation, MonotoneAndInsideUnitInterval) {
  double prev = 2;
  for (int i = 0; i <= 100; ++i) {
    const double g = attenuation_factor(i / 100.0, 0.5);
    EXPECT_GT(g, 0.0);
    EXPECT_LT(g, 1.0);
    EXPECT_LE(g, prev);
    prev = g;
  }
  EXPECT_DOUBLE_EQ(attenuation_factor(1.0, 0.5), 0.5);
  EXPECT_LT(attenuation_factor(0.0, 0.5), 1.0);
}

TEST(DetectOverload, Examples) {
  NodeDescriptor node;  // capacity 32, memory 4096
  OverloadLimits limits{0.8, 120, 0.9};
  RawNodeSample calm;
  calm.link_latency = 5;
  calm.memory_used = 300;
  EXPECT_EQ(detect_overload(calm, node, limits), (OverloadStatus{false, 0}));

  RawNodeSample full = calm;
  full.queue_length = 32;
  const auto st = detect_overload(full, node, limits);
  EXPECT_TRUE(st.overloaded);
  EXPECT_GT(st.severity, 0);

  // queue 30/32 -> (0.9375-0.8)/0.2 = 0.6875; latency 150 vs 120 -> 0.25
  RawNodeSample two = calm;
  two.queue_length = 30;
  two.link_latency = 150;
  const auto both = detect_overload(two, node, limits);
  EXPECT_TRUE(both.overloaded);
  EXPECT_NEAR(both.severity, std::max(0.6875, 0.25), 1e-12);
  two.link_latency = 230;  // 110/120
  EXPECT_NEAR(detect_overload(two, node, limits).severity, 110.0 / 120.0, 1e-12);
}

TEST(PolicyStep, SingleNodeAlwaysChosen) {
  auto st = state_for(1);
  Rng rng(3);
  for (std::uint64_t t = 0; t < 50; ++t) {
    std::vector<RawNodeSample> s{testsupport::random_sample(rng)};
    EXPECT_EQ(policy_step(st, s, t, 0).node_id, 0);
  }
}

TEST(PolicyStep, IdenticalIdleNodesTieToLowestIndex) {
  auto st = state_for(2);
  std::vector<RawNodeSample> s{best_sample(), best_sample()};
  EXPECT_EQ(policy_step(st, s, 0, 0).node_id, 0);
}

TEST(PolicyStep, InitialScoreIsFlooredOnFirstUpdate) {
  auto st = state_for(2);
  std::vector<RawNodeSample> s{worst_sample(), worst_sample()};
  const auto d = policy_step(st, s, 0, 0);
  EXPECT_EQ(d.decision_scores, (std::vector<double>{1e-6, 1e-6}));
}

TEST(PolicyStep, BestNodeConvergesAndWins) {
  auto st = state_for(2, 0.9);
  std::vector<RawNodeSample> s{best_sample(), worst_sample()};
  // oracle: S_A(t) = 1 - 0.9^t from S_A(0) = 0
  double oracle = 0;
  int t = 0;
  while (std::abs(st.smoothed_scores[0] - 1.0) >= 1e-6) {
    const auto d = policy_step(st, s, static_cast<std::uint64_t>(t), 0);
    oracle = smooth_update(oracle, 1.0, 0.9);
    ++t;
    ASSERT_EQ(d.node_id, 0);
    ASSERT_NEAR(st.smoothed_scores[0], oracle, 1e-12);
    ASSERT_LT(t, 1000);
  }
  EXPECT_NEAR(std::pow(0.9, t), 1.0 - st.smoothed_scores[0], 1e-12);
  EXPECT_GT(st.smoothed_scores[0], st.smoothed_scores[1]);
}

TEST(PolicyStep, EmptyNodeSetIsConfigError) {
  EXPECT_THROW(make_policy_state({}, SchedulingWeights{}, 0.7, 0.5, 1e-6, {}, {}), ConfigError);
  PolicyState empty;
  EXPECT_THROW(policy_step(empty, {}, 0, 0), ConfigError);
}

TEST(PolicyStep, OverloadedNodeIsPenalizedNotRemoved) {
  auto st = state_for(2, 0.0);
  auto hot = best_sample();
  hot.queue_length = 32;  // full queue: severity 1 -> gamma = gamma_base
  std::vector<RawNodeSample> s{hot, best_sample()};
  const auto d = policy_step(st, s, 0, 0);
  EXPECT_EQ(d.node_id, 1);
  EXPECT_TRUE(st.last_overload[0].overloaded);
  const double expected = 0.5 * instant_score(normalize_sample(hot, st.bounds, 32), st.weights);
  EXPECT_NEAR(st.smoothed_scores[0], expected, 1e-12);
  EXPECT_GE(st.smoothed_scores[0], st.floor);
}

TEST(PolicyProperty, ScoresStayWithinFloorAndOne) {
  Rng rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    auto st = state_for(1 + rng.below(8), rng.uniform());
    for (std::uint64_t t = 0; t < 200; ++t) {
      std::vector<RawNodeSample> s;
      for (std::size_t i = 0; i < st.nodes.size(); ++i) s.push_back(testsupport::random_sample(rng));
      policy_step(st, s, t, 0);
      for (double x : st.smoothed_scores) {
        ASSERT_GE(x, st.floor);
        ASSERT_LE(x, 1.0 + 1e-12);
      }
    }
  }
}

TEST(PolicyProperty, ContractionUnderConstantInput) {
  for (double eta : {0.3, 0.7, 0.9}) {
    double s = 0.93;
    const double f = 0.37;
    for (int t = 1; t <= 100; ++t) {
      s = smooth_update(s, f, eta);
      ASSERT_LE(std::abs(s - f), std::pow(eta, t) * std::abs(0.93 - f) + 1e-12);
    }
  }
}

TEST(PolicyProperty, ArgmaxInvariantToWeightScaling) {
  Rng rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + rng.below(6);
    auto a = state_for(n, rng.uniform());
    a.weights = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    auto b = a;
    const double c = rng.uniform(0.1, 10);
    b.weights = {c * a.weights.alpha, c * a.weights.beta, c * a.weights.delta, c * a.weights.epsilon_w};
    b.floor = a.floor * c;
    for (std::uint64_t t = 0; t < 100; ++t) {
      std::vector<RawNodeSample> s;
      for (std::size_t i = 0; i < n; ++i) {
        auto x = testsupport::random_sample(rng);
        x.queue_length = rng.below(20);  // stay clear of the penalty path
        x.link_latency = rng.uniform(0, 100);
        x.memory_used = 0;
        s.push_back(x);
      }
      ASSERT_EQ(policy_step(a, s, t, 0).node_id, policy_step(b, s, t, 0).node_id);
    }
  }
}

TEST(PolicyProperty, DeterministicDecisionSequence) {
  Rng gen(8);
  std::vector<std::vector<RawNodeSample>> inputs;
  for (int t = 0; t < 300; ++t) {
    std::vector<RawNodeSample> s;
    for (int i = 0; i < 5; ++i) s.push_back(testsupport::random_sample(gen));
    inputs.push_back(s);
  }
  auto a = state_for(5), b = state_for(5);
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    ASSERT_EQ(policy_step(a, inputs[t], t, 1.0 * t), policy_step(b, inputs[t], t, 1.0 * t));
  }
}

TEST(PolicyProperty, HomogeneousConstantSamplesAlwaysNodeZero) {
  Rng rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    auto st = state_for(1 + rng.below(16), rng.uniform());
    const auto x = testsupport::random_sample(rng);
    std::vector<RawNodeSample> s(st.nodes.size(), x);
    for (std::uint64_t t = 0; t < 100; ++t) ASSERT_EQ(policy_step(st, s, t, 0).node_id, 0);
  }
}

TEST(RoundRobin, Examples) {
  auto st = state_for(4);
  std::vector<int> got;
  for (std::uint64_t t = 0; t < 5; ++t) got.push_back(rr_step(st, t, 0).node_id);
  EXPECT_EQ(got, (std::vector<int>{0, 1, 2, 3, 0}));

  auto one = state_for(1);
  for (std::uint64_t t = 0; t < 10; ++t) EXPECT_EQ(rr_step(one, t, 0).node_id, 0);

  auto four = state_for(4);
  std::vector<int> counts(4);
  for (std::uint64_t t = 0; t < 1000; ++t) ++counts[rr_step(four, t, 0).node_id];
  EXPECT_EQ(counts, (std::vector<int>{250, 250, 250, 250}));
}

TEST(Sra, EqualWeightsAlternate) {
  auto st = state_for(2);
  set_sra_snapshot(st, {0.5, 0.5});
  for (std::uint64_t t = 0; t < 20; ++t) EXPECT_EQ(sra_step(st, t, 0).node_id, static_cast<int>(t % 2));
}

TEST(Sra, DegenerateWeight) {
  auto st = state_for(2);
  set_sra_snapshot(st, {1.0, 0.0});
  for (std::uint64_t t = 0; t < 50; ++t) EXPECT_EQ(sra_step(st, t, 0).node_id, 0);
}

TEST(Sra, ProportionalSplit) {
  auto st = state_for(2);
  set_sra_snapshot(st, {0.75, 0.25});
  std::vector<int> counts(2);
  for (std::uint64_t t = 0; t < 100; ++t) ++counts[sra_step(st, t, 0).node_id];
  EXPECT_EQ(counts, (std::vector<int>{75, 25}));
}

TEST(Sra, AllZeroFallsBackToUniform) {
  auto st = state_for(3);
  set_sra_snapshot(st, {0, 0, 0});
  std::vector<int> counts(3);
  for (std::uint64_t t = 0; t < 99; ++t) ++counts[sra_step(st, t, 0).node_id];
  EXPECT_EQ(counts, (std::vector<int>{33, 33, 33}));
}

TEST(Sra, SnapshotIsStatic) {
  auto st = state_for(2);
  std::vector<RawNodeSample> first{best_sample(), worst_sample()};
  std::vector<RawNodeSample> later{worst_sample(), best_sample()};
  std::vector<int> counts(2);
  ++counts[decide(PolicyKind::StaticResourceAware, st, first, 0, 0).node_id];
  for (std::uint64_t t = 1; t < 50; ++t) {
    ++counts[decide(PolicyKind::StaticResourceAware, st, later, t, 0).node_id];
  }
  EXPECT_EQ(counts, (std::vector<int>{50, 0}));
}

TEST(Sra, CountsWithinOneOfShare) {
  Rng rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + rng.below(10);
    auto st = state_for(n);
    std::vector<double> w(n);
    double total = 0;
    for (auto& x : w) total += (x = rng.uniform());
    set_sra_snapshot(st, w);
    std::vector<int> counts(n);
    const int tasks = 1 + static_cast<int>(rng.below(500));
    for (int t = 0; t < tasks; ++t) ++counts[sra_step(st, t, 0).node_id];
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_LE(std::abs(counts[i] - tasks * w[i] / total), 1.0 + 1e-9);
    }
  }
}
