#pragma once

#include <cstdint>
#include <vector>

#include "edgesched/core/random.hpp"
#include "edgesched/core/scenario.hpp"

namespace testsupport {

// Small, fast scenario: identical default nodes, derived arrival rate.
inline edgesched::ScenarioConfig small_config(std::size_t nodes = 4, std::size_t tasks = 500,
                                              std::uint64_t seed = 1) {
  edgesched::ScenarioConfig c;
  c.node_count = nodes;
  c.task_count = tasks;
  c.rng_seed = seed;
  c.nodes = edgesched::generate_nodes(nodes, c.node_profile, seed);
  c.arrival_rate = 0.8 * edgesched::aggregate_capacity(c.nodes);
  edgesched::validate(c);
  return c;
}

inline edgesched::RawNodeSample random_sample(edgesched::Rng& rng) {
  edgesched::RawNodeSample s;
  s.cpu_idle_fraction = rng.uniform();
  s.queue_length = rng.below(40);
  s.available_bandwidth = rng.uniform(1, 250);
  s.link_latency = rng.uniform(0, 700);
  s.memory_used = rng.uniform(0, 9000);
  return s;
}

}  // namespace testsupport
