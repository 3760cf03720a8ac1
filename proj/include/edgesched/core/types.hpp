#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "edgesched/core/errors.hpp"

namespace edgesched {

// One monitor reading of an edge node, in physical units.
struct RawNodeSample {
  double cpu_idle_fraction = 1.0;   // [0,1]
  std::size_t queue_length = 0;     // tasks held by the node, incl. in service
  double available_bandwidth = 0;   // Mbit/s
  double link_latency = 0;          // ms
  double memory_used = 0;           // MB
  double timestamp = 0;             // simulated ms

  bool operator==(const RawNodeSample&) const = default;
};

// Normalized node state [U, Q, B, L]. Every component is oriented so that a
// larger value means the node is a better target for new work.
struct ResourceStateVector {
  double u = 0;
  double q = 0;
  double b = 0;
  double l = 0;

  std::array<double, 4> as_array() const { return {u, q, b, l}; }
  bool operator==(const ResourceStateVector&) const = default;
};

struct SchedulingWeights {
  double alpha = 0.25;
  double beta = 0.25;
  double delta = 0.25;
  double epsilon_w = 0.25;

  std::array<double, 4> as_array() const { return {alpha, beta, delta, epsilon_w}; }

  void validate() const {
    const auto w = as_array();
    bool any_positive = false;
    for (double x : w) {
      if (!std::isfinite(x) || x < 0) {
        throw ConfigError("weights", "weights must be finite and non-negative");
      }
      any_positive = any_positive || x > 0;
    }
    if (!any_positive) throw ConfigError("weights", "at least one weight must be positive");
  }

  bool operator==(const SchedulingWeights&) const = default;
};

// Static capability profile of one edge node.
struct NodeDescriptor {
  int node_id = 0;
  double compute_rate = 20;          // detections per second
  double memory_capacity = 4096;     // MB
  double base_link_latency = 20;     // ms
  double link_bandwidth = 100;       // Mbit/s
  std::size_t queue_capacity = 32;   // tasks
  // Share of the CPU taken by co-located workloads. Only affects the reported
  // idleness, not the detector's service rate.
  double background_load = 0;

  double base_service_ms() const { return 1000.0 / compute_rate; }

  bool operator==(const NodeDescriptor&) const = default;
};

enum class PolicyKind { Dynamic, RoundRobin, StaticResourceAware, CloudOnly };
enum class ScenarioRegime { S1, S2, S3 };
enum class ArrivalMode { Poisson, FixedInterval };

inline constexpr std::array<PolicyKind, 4> kAllPolicies = {
    PolicyKind::Dynamic, PolicyKind::RoundRobin, PolicyKind::StaticResourceAware,
    PolicyKind::CloudOnly};
inline constexpr std::array<ScenarioRegime, 3> kAllRegimes = {
    ScenarioRegime::S1, ScenarioRegime::S2, ScenarioRegime::S3};

inline std::string_view to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::Dynamic: return "dynamic";
    case PolicyKind::RoundRobin: return "rr";
    case PolicyKind::StaticResourceAware: return "sra";
    case PolicyKind::CloudOnly: return "cloud-only";
  }
  return "?";
}

inline std::string_view to_string(ScenarioRegime r) {
  switch (r) {
    case ScenarioRegime::S1: return "S1";
    case ScenarioRegime::S2: return "S2";
    case ScenarioRegime::S3: return "S3";
  }
  return "?";
}

inline std::string_view to_string(ArrivalMode m) {
  return m == ArrivalMode::Poisson ? "poisson" : "fixed";
}

inline PolicyKind parse_policy(std::string_view s, const std::string& field = "policy") {
  for (auto p : kAllPolicies) {
    if (s == to_string(p)) return p;
  }
  throw ConfigError(field, "unknown policy '" + std::string(s) +
                               "' (expected dynamic, rr, sra or cloud-only)");
}

inline ScenarioRegime parse_regime(std::string_view s,
                                   const std::string& field = "scenario_regime") {
  if (s == "S1" || s == "s1") return ScenarioRegime::S1;
  if (s == "S2" || s == "s2") return ScenarioRegime::S2;
  if (s == "S3" || s == "s3") return ScenarioRegime::S3;
  throw ConfigError(field, "unknown scenario '" + std::string(s) + "' (expected S1, S2 or S3)");
}

inline ArrivalMode parse_arrival_mode(std::string_view s,
                                      const std::string& field = "arrival_mode") {
  if (s == "poisson") return ArrivalMode::Poisson;
  if (s == "fixed") return ArrivalMode::FixedInterval;
  throw ConfigError(field, "unknown arrival mode '" + std::string(s) + "'");
}

inline std::size_t regime_index(ScenarioRegime r) { return static_cast<std::size_t>(r); }
inline std::size_t policy_index(PolicyKind p) { return static_cast<std::size_t>(p); }

// Added one-way network latency of each regime, ms.
inline double regime_extra_latency(ScenarioRegime r) {
  switch (r) {
    case ScenarioRegime::S1: return 0;
    case ScenarioRegime::S2: return 100;
    case ScenarioRegime::S3: return 500;
  }
  return 0;
}

// Offered load as a fraction of the aggregate edge detection capacity.
inline double regime_load_factor(ScenarioRegime r) {
  switch (r) {
    case ScenarioRegime::S1: return 0.5;
    case ScenarioRegime::S2: return 0.8;
    case ScenarioRegime::S3: return 1.1;
  }
  return 0.5;
}

}  // namespace edgesched
