#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "edgesched/core/scenario.hpp"
#include "edgesched/core/types.hpp"

namespace edgesched {

// Linear fusion score w^T R.
inline double instant_score(const ResourceStateVector& r, const SchedulingWeights& w) {
  return w.alpha * r.u + w.beta * r.q + w.delta * r.b + w.epsilon_w * r.l;
}

// Exponential smoothing; eta is the weight kept on the previous score.
inline double smooth_update(double s_prev, double instant, double eta) {
  return eta * s_prev + (1.0 - eta) * instant;
}

inline double apply_penalty(double s, double gamma_t) { return gamma_t * s; }

inline double floor_clamp(double s, double floor) { return std::max(s, floor); }

// Attenuation for a node flagged with the given severity in [0,1]:
// severity 0 -> just below 1, severity 1 -> gamma_base. Always in (0,1).
inline double attenuation_factor(double severity, double gamma_base) {
  const double sev = std::clamp(severity, 0.0, 1.0);
  const double g = gamma_base + (1.0 - gamma_base) * (1.0 - sev);
  constexpr double kBelowOne = 1.0 - std::numeric_limits<double>::epsilon();
  return std::clamp(g, std::numeric_limits<double>::min(), kBelowOne);
}

struct OverloadStatus {
  bool overloaded = false;
  double severity = 0;  // [0,1]

  bool operator==(const OverloadStatus&) const = default;
};

// Resolved thresholds; latency is absolute (ms).
struct OverloadLimits {
  double queue_fraction = 0.8;
  double latency_ms = 120;
  double memory_fraction = 0.9;
};

inline OverloadLimits resolve_limits(const ScenarioConfig& c) {
  return {c.overload.q_thresh, effective_latency_threshold(c), c.overload.mem_thresh};
}

// A node is overloaded when any ratio strictly exceeds its threshold.
// Excess of a capacity ratio is measured against the headroom left above
// the threshold, (x - t) / (1 - t); latency excess is relative, (x - t) / t.
// Severity is the largest excess, clamped to [0,1].
inline OverloadStatus detect_overload(const RawNodeSample& s, const NodeDescriptor& node,
                                      const OverloadLimits& limits) {
  auto ratio_excess = [](double x, double t) {
    if (x <= t) return -1.0;
    const double headroom = 1.0 - t;
    return headroom > 0 ? (x - t) / headroom : 1.0;
  };

  const double queue_ratio =
      static_cast<double>(s.queue_length) / static_cast<double>(node.queue_capacity);
  const double memory_ratio = s.memory_used / node.memory_capacity;

  const double queue_excess = ratio_excess(queue_ratio, limits.queue_fraction);
  const double memory_excess = ratio_excess(memory_ratio, limits.memory_fraction);
  const double latency_excess = s.link_latency > limits.latency_ms
                                    ? (s.link_latency - limits.latency_ms) / limits.latency_ms
                                    : -1.0;

  const double worst = std::max({queue_excess, memory_excess, latency_excess});
  if (worst < 0) return {};
  return {true, std::clamp(worst, 0.0, 1.0)};
}

}  // namespace edgesched
