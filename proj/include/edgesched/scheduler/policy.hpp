#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "edgesched/core/errors.hpp"
#include "edgesched/core/normalize.hpp"
#include "edgesched/core/scenario.hpp"
#include "edgesched/core/types.hpp"
#include "edgesched/scheduler/scoring.hpp"

namespace edgesched {

struct AssignmentDecision {
  std::uint64_t task_id = 0;
  int node_id = 0;
  // Per-node values the choice was an argmax of (lowest index wins ties).
  // Dynamic: smoothed scores. SRA: cycling credits. RR: one-hot.
  std::vector<double> decision_scores;
  double decision_time = 0;

  bool operator==(const AssignmentDecision&) const = default;
};

// Mutable scheduling state. Single writer: callers serialize every *_step.
struct PolicyState {
  std::vector<NodeDescriptor> nodes;
  std::vector<double> smoothed_scores;
  std::size_t rr_cursor = 0;
  std::vector<double> sra_snapshot;
  std::vector<double> sra_credit;
  bool sra_captured = false;

  SchedulingWeights weights;
  double eta = 0.7;
  double gamma_base = 0.5;
  double floor = 1e-6;
  OverloadLimits limits;
  NormalizationBounds bounds;

  // Overload flags from the most recent dynamic step, for tracing.
  std::vector<OverloadStatus> last_overload;
};

inline PolicyState make_policy_state(std::vector<NodeDescriptor> nodes,
                                     const SchedulingWeights& weights, double eta,
                                     double gamma_base, double floor,
                                     const OverloadLimits& limits,
                                     const NormalizationBounds& bounds) {
  if (nodes.empty()) throw ConfigError("nodes", "policy needs at least one node");
  PolicyState s;
  s.smoothed_scores.assign(nodes.size(), 0.0);
  s.last_overload.assign(nodes.size(), OverloadStatus{});
  s.nodes = std::move(nodes);
  s.weights = weights;
  s.eta = eta;
  s.gamma_base = gamma_base;
  s.floor = floor;
  s.limits = limits;
  s.bounds = bounds;
  return s;
}

inline PolicyState make_policy_state(const ScenarioConfig& c) {
  return make_policy_state(c.nodes, c.weights, c.smoothing_eta, c.penalty_gamma_base,
                           c.score_floor, resolve_limits(c), effective_bounds(c));
}

// First index of the maximum.
inline int argmax_lowest(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return static_cast<int>(best);
}

// One pass of the resource-aware loop for one task: for every node,
// normalize -> fuse -> smooth -> attenuate if overloaded -> floor, then pick
// the argmax.
inline AssignmentDecision policy_step(PolicyState& state, std::span<const RawNodeSample> samples,
                                      std::uint64_t task_id, double now) {
  const std::size_t n = state.nodes.size();
  if (n == 0) throw ConfigError("nodes", "policy needs at least one node");
  if (samples.size() != n) {
    throw ConfigError("samples", "expected one sample per registered node");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = state.nodes[i];
    const auto r = normalize_sample(samples[i], state.bounds, node.queue_capacity);
    double s = smooth_update(state.smoothed_scores[i], instant_score(r, state.weights), state.eta);
    const auto status = detect_overload(samples[i], node, state.limits);
    if (status.overloaded) s = apply_penalty(s, attenuation_factor(status.severity, state.gamma_base));
    state.smoothed_scores[i] = floor_clamp(s, state.floor);
    state.last_overload[i] = status;
  }
  AssignmentDecision d;
  d.task_id = task_id;
  d.node_id = argmax_lowest(state.smoothed_scores);
  d.decision_scores = state.smoothed_scores;
  d.decision_time = now;
  return d;
}

inline AssignmentDecision rr_step(PolicyState& state, std::uint64_t task_id, double now) {
  const std::size_t n = state.nodes.size();
  if (n == 0) throw ConfigError("nodes", "policy needs at least one node");
  AssignmentDecision d;
  d.task_id = task_id;
  d.node_id = static_cast<int>(state.rr_cursor % n);
  d.decision_scores.assign(n, 0.0);
  d.decision_scores[static_cast<std::size_t>(d.node_id)] = 1.0;
  d.decision_time = now;
  ++state.rr_cursor;
  return d;
}

// Freezes the SRA weights. Only the first call has an effect.
inline void capture_sra_snapshot(PolicyState& state, std::span<const RawNodeSample> samples) {
  if (state.sra_captured) return;
  const std::size_t n = state.nodes.size();
  state.sra_snapshot.assign(n, 0.0);
  for (std::size_t i = 0; i < n && i < samples.size(); ++i) {
    state.sra_snapshot[i] = clamp01(samples[i].cpu_idle_fraction);
  }
  state.sra_credit.assign(n, 0.0);
  state.sra_captured = true;
}

inline void set_sra_snapshot(PolicyState& state, std::vector<double> idle) {
  state.sra_snapshot = std::move(idle);
  state.sra_credit.assign(state.sra_snapshot.size(), 0.0);
  state.sra_captured = true;
}

// Deterministic weighted cycling over the frozen idleness snapshot: every
// node earns its weight in credit per task, the richest node (lowest index
// on ties) is chosen and pays back the total weight. Over any window the
// counts stay within one task of the exact proportional share.
inline AssignmentDecision sra_step(PolicyState& state, std::uint64_t task_id, double now) {
  const std::size_t n = state.nodes.size();
  if (n == 0) throw ConfigError("nodes", "policy needs at least one node");
  if (!state.sra_captured) throw ConfigError("sra_snapshot", "snapshot not captured");

  double total = 0;
  for (double w : state.sra_snapshot) total += w;
  const bool uniform = !(total > 0);
  if (uniform) total = static_cast<double>(n);

  for (std::size_t i = 0; i < n; ++i) state.sra_credit[i] += uniform ? 1.0 : state.sra_snapshot[i];
  AssignmentDecision d;
  d.task_id = task_id;
  d.node_id = argmax_lowest(state.sra_credit);
  d.decision_scores = state.sra_credit;
  d.decision_time = now;
  state.sra_credit[static_cast<std::size_t>(d.node_id)] -= total;
  return d;
}

// Policy-by-name dispatch. CloudOnly still picks a gateway node (round-robin)
// whose uplink carries the frame.
inline AssignmentDecision decide(PolicyKind kind, PolicyState& state,
                                 std::span<const RawNodeSample> samples, std::uint64_t task_id,
                                 double now) {
  switch (kind) {
    case PolicyKind::Dynamic: return policy_step(state, samples, task_id, now);
    case PolicyKind::RoundRobin:
    case PolicyKind::CloudOnly: return rr_step(state, task_id, now);
    case PolicyKind::StaticResourceAware:
      capture_sra_snapshot(state, samples);
      return sra_step(state, task_id, now);
  }
  return rr_step(state, task_id, now);
}

}  // namespace edgesched
