#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "edgesched/core/scenario.hpp"
#include "edgesched/sim/simulator.hpp"

namespace edgesched {

struct SimulationResult {
  double throughput = 0;            // completed tasks / s
  bool throughput_degenerate = false;
  double mean_latency = 0;          // ms
  double p50 = 0, p95 = 0, p99 = 0;
  bool latency_empty = true;
  std::vector<std::size_t> per_node_task_counts;
  std::size_t arrival_count = 0;
  std::size_t completion_count = 0;
  std::size_t drop_count = 0;
  std::size_t in_flight_count = 0;
  std::vector<double> peak_memory_per_node;
  double peak_memory = 0;           // max over nodes
  double mean_communication_latency = 0;
  double mean_busy_fraction = 0;

  PolicyKind policy = PolicyKind::Dynamic;
  ScenarioRegime scenario = ScenarioRegime::S1;
  std::size_t node_count = 0;
  std::uint64_t seed = 0;
};

// Nearest-rank percentile of an ascending sample: the ceil(p/100 * n)-th value.
inline double nearest_rank(std::span<const double> sorted, double p) {
  if (sorted.empty()) return 0;
  const double rank = std::ceil(p / 100.0 * static_cast<double>(sorted.size()));
  const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(sorted.size())));
  return sorted[idx - 1];
}

// Sums in ascending order so the result does not depend on record order.
inline double ordered_mean(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  double sum = 0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

// Per-task records -> indicators. node_stats may be empty (no resource
// figures then); node_count sizes per_node_task_counts.
inline SimulationResult aggregate(std::span<const TaskRecord> trace,
                                  std::span<const NodeStats> node_stats, std::size_t node_count) {
  SimulationResult r;
  r.node_count = node_count;
  r.per_node_task_counts.assign(node_count, 0);

  std::vector<double> latencies;
  std::vector<double> comm;
  double first_arrival = INFINITY;
  double last_completion = -INFINITY;
  for (const auto& t : trace) {
    if (!t.arrived) continue;
    ++r.arrival_count;
    first_arrival = std::min(first_arrival, t.arrival_time);
    if (t.node_id >= 0 && static_cast<std::size_t>(t.node_id) < node_count) {
      ++r.per_node_task_counts[static_cast<std::size_t>(t.node_id)];
    }
    if (t.dropped) {
      ++r.drop_count;
    } else if (t.completed && t.completion_time) {
      ++r.completion_count;
      latencies.push_back(*t.completion_time - t.arrival_time);
      comm.push_back(t.communication_latency());
      last_completion = std::max(last_completion, *t.completion_time);
    }
  }
  r.in_flight_count = r.arrival_count - r.completion_count - r.drop_count;

  if (!latencies.empty()) {
    r.latency_empty = false;
    std::sort(latencies.begin(), latencies.end());
    r.mean_latency = ordered_mean(latencies);
    r.p50 = nearest_rank(latencies, 50);
    r.p95 = nearest_rank(latencies, 95);
    r.p99 = nearest_rank(latencies, 99);
    r.mean_communication_latency = ordered_mean(std::move(comm));
  }

  const double span_ms = r.completion_count > 0 ? last_completion - first_arrival : 0.0;
  r.throughput_degenerate = r.completion_count < 2 || !(span_ms > 0);
  r.throughput = span_ms > 0 ? 1000.0 * static_cast<double>(r.completion_count) / span_ms : 0.0;

  if (!node_stats.empty()) {
    std::vector<double> busy;
    for (const auto& s : node_stats) {
      r.peak_memory_per_node.push_back(s.peak_memory);
      r.peak_memory = std::max(r.peak_memory, s.peak_memory);
      busy.push_back(span_ms > 0 ? s.busy_time / span_ms : 0.0);
    }
    r.mean_busy_fraction = ordered_mean(std::move(busy));
  }
  return r;
}

inline SimulationResult aggregate(const SimulationOutput& out) {
  SimulationResult r = aggregate(out.tasks, out.nodes, out.config.node_count);
  r.policy = out.config.policy;
  r.scenario = out.config.scenario_regime;
  r.seed = out.config.rng_seed;
  return r;
}

}  // namespace edgesched
